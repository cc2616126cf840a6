#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "windcast/features.hpp"
#include "windcast/ingest.hpp"

using namespace windcast;
using ingest::FeatureVector;
using ingest::Normalizer;
using ingest::NwpRecord;
using ingest::ScadaRecord;

namespace {

std::string scada_text(const std::string& rows) {
    return std::string(ingest::kScadaHeader) + "\n" + rows;
}

std::string nwp_text(const std::string& rows) {
    return std::string(ingest::kNwpHeader) + "\n" + rows;
}

}  // namespace

TEST(Ingest, ScadaRoundTrip) {
    std::vector<ScadaRecord> in(2);
    in[0] = {"wt001", make_time(2020, 1, 1, 0, 0, 0), 350.25, 6.5, 270.0, 265.5, 3.75};
    in[1] = {"wt001", make_time(2020, 1, 1, 0, 10, 0), 380.5, 6.8, 271.0, 266.0, 3.5};
    std::ostringstream os;
    ingest::write_scada(os, in);
    std::istringstream is(os.str());
    const auto result = ingest::parse_scada(is);
    EXPECT_TRUE(result.issues.empty());
    ASSERT_EQ(result.records.size(), 2u);
    EXPECT_EQ(result.records[0].turbine_id, "wt001");
    EXPECT_EQ(result.records[0].timestamp, in[0].timestamp);
    EXPECT_DOUBLE_EQ(result.records[0].power_kw, 350.25);
    EXPECT_DOUBLE_EQ(result.records[1].wind_speed_ms, 6.8);
}

TEST(Ingest, NwpRoundTripAndLead) {
    std::vector<NwpRecord> in(1);
    in[0].issue_time = make_time(2020, 1, 1, 0, 0, 0);
    in[0].valid_time = make_time(2020, 1, 1, 2, 15, 0);
    in[0].wind_speed_ms = 7.25;
    in[0].wind_gust_ms = 9.5;
    in[0].temp_c = -1.5;
    in[0].wind_dir_deg = 200.0;
    in[0].radiance_wm2 = 0.0;
    in[0].precip_mm = 0.4;
    std::ostringstream os;
    ingest::write_nwp(os, in);
    std::istringstream is(os.str());
    const auto result = ingest::parse_nwp(is);
    EXPECT_TRUE(result.issues.empty());
    ASSERT_EQ(result.records.size(), 1u);
    EXPECT_EQ(result.records[0].lead_minutes, 135);
    EXPECT_DOUBLE_EQ(result.records[0].temp_c, -1.5);
}

TEST(Ingest, HeaderMismatchFatal) {
    std::istringstream s1("turbine,when,power\nwt001,2020-01-01T00:00:00Z,1\n");
    EXPECT_THROW(ingest::parse_scada(s1), DataError);
    std::istringstream s2("");
    EXPECT_THROW(ingest::parse_scada(s2), DataError);
    std::istringstream s3("valid,issue\n");
    EXPECT_THROW(ingest::parse_nwp(s3), DataError);
}

TEST(Ingest, MalformedRowsCollectedBelowBudget) {
    std::string rows;
    for (int i = 0; i < 20; ++i) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "wt001,2020-01-01T%02d:00:00Z,100,5,180,180,2\n", i);
        rows += buf;
    }
    rows += "wt001,not-a-time,100,5,180,180,2\n";        // bad timestamp
    rows += "wt001,2020-01-02T00:00:00Z,abc,5,180,180,2\n";  // bad number
    std::istringstream is(scada_text(rows));
    const auto result = ingest::parse_scada(is);
    EXPECT_EQ(result.records.size(), 20u);
    ASSERT_EQ(result.issues.size(), 2u);
    EXPECT_EQ(result.issues[0].line, 22u);
    EXPECT_NE(result.issues[0].message.find("timestamp"), std::string::npos);
}

TEST(Ingest, ErrorBudgetExceededFatal) {
    std::string rows = "wt001,2020-01-01T00:00:00Z,100,5,180,180,2\n";
    rows += "wt001,bad,100,5,180,180,2\n";  // 1 of 2 rows malformed
    std::istringstream is(scada_text(rows));
    EXPECT_THROW(ingest::parse_scada(is), DataError);
}

TEST(Ingest, SortsUnorderedInput) {
    std::string rows;
    rows += "wt002,2020-01-01T00:00:00Z,1,5,0,0,0\n";
    rows += "wt001,2020-01-01T01:00:00Z,2,5,0,0,0\n";
    rows += "wt001,2020-01-01T00:00:00Z,3,5,0,0,0\n";
    std::istringstream is(scada_text(rows));
    const auto result = ingest::parse_scada(is);
    ASSERT_EQ(result.records.size(), 3u);
    EXPECT_EQ(result.records[0].turbine_id, "wt001");
    EXPECT_DOUBLE_EQ(result.records[0].power_kw, 3.0);
    EXPECT_DOUBLE_EQ(result.records[1].power_kw, 2.0);
    EXPECT_EQ(result.records[2].turbine_id, "wt002");
}

TEST(Ingest, DuplicateTimestampFatal) {
    std::string rows;
    rows += "wt001,2020-01-01T00:00:00Z,1,5,0,0,0\n";
    rows += "wt001,2020-01-01T00:00:00Z,2,5,0,0,0\n";
    std::istringstream is(scada_text(rows));
    EXPECT_THROW(ingest::parse_scada(is), DataError);
    // same timestamp on different turbines is fine
    std::string ok;
    ok += "wt001,2020-01-01T00:00:00Z,1,5,0,0,0\n";
    ok += "wt002,2020-01-01T00:00:00Z,2,5,0,0,0\n";
    std::istringstream is2(scada_text(ok));
    EXPECT_EQ(ingest::parse_scada(is2).records.size(), 2u);
}

TEST(Ingest, NwpNegativeLeadIsRowIssue) {
    std::string rows;
    for (int i = 0; i < 15; ++i) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "2020-01-01T00:00:00Z,2020-01-01T%02d:00:00Z,5,6,1,180,0,0\n", i);
        rows += buf;
    }
    rows += "2020-01-01T06:00:00Z,2020-01-01T00:00:00Z,5,6,1,180,0,0\n";  // valid < issue
    std::istringstream is(nwp_text(rows));
    const auto result = ingest::parse_nwp(is);
    EXPECT_EQ(result.records.size(), 15u);
    ASSERT_EQ(result.issues.size(), 1u);
    EXPECT_NE(result.issues[0].message.find("lead"), std::string::npos);
}

TEST(Features, HubHeightAdjustment) {
    EXPECT_DOUBLE_EQ(ingest::adjust_hub_height(8.0, 80.0, 114.0), 8.646589979016817);
    EXPECT_DOUBLE_EQ(ingest::adjust_hub_height(5.0, 120.0, 90.0), 4.699548231194853);
    EXPECT_DOUBLE_EQ(ingest::adjust_hub_height(0.0, 80.0, 114.0), 0.0);
    EXPECT_DOUBLE_EQ(ingest::adjust_hub_height(6.0, 100.0, 100.0), 6.0);
    EXPECT_THROW(ingest::adjust_hub_height(5.0, 1.0, 100.0), InputError);
    EXPECT_THROW(ingest::adjust_hub_height(-1.0, 80.0, 114.0), InputError);
}

TEST(Features, EncodeKnownInstant) {
    NwpRecord rec;
    rec.issue_time = make_time(2020, 6, 15, 10, 0, 0);
    rec.valid_time = make_time(2020, 6, 15, 12, 0, 0);
    rec.lead_minutes = 120;
    rec.wind_gust_ms = 11.0;
    rec.temp_c = 17.5;
    rec.wind_dir_deg = 90.0;
    const FeatureVector fv = ingest::encode_features(rec, 8.5, 0.0);
    EXPECT_DOUBLE_EQ(fv[0], 8.5);
    EXPECT_DOUBLE_EQ(fv[1], 11.0);
    EXPECT_DOUBLE_EQ(fv[2], 17.5);
    EXPECT_DOUBLE_EQ(fv[3], 1.0);                      // sin 90 deg
    EXPECT_NEAR(fv[4], 0.0, 1e-15);                    // cos 90 deg
    EXPECT_NEAR(fv[5], 0.0, 1e-15);                    // sin(2*pi*12/24)
    EXPECT_DOUBLE_EQ(fv[6], -1.0);                     // cos at noon
    EXPECT_NEAR(fv[7], 0.2821076626819194, 1e-12);     // doy 167
    EXPECT_NEAR(fv[8], -0.9593827529490743, 1e-12);
    EXPECT_DOUBLE_EQ(fv[9], 2.0);                      // lead hours
}

TEST(Features, EncodeRespectsTimezone) {
    NwpRecord rec;
    rec.valid_time = make_time(2020, 6, 15, 12, 0, 0);
    rec.wind_dir_deg = 0.0;
    const FeatureVector fv = ingest::encode_features(rec, 1.0, 5.5);  // local 17:30
    EXPECT_NEAR(fv[5], -0.9914448613738104, 1e-12);
    EXPECT_NEAR(fv[6], -0.13052619222005163, 1e-12);
}

TEST(Features, SinCosPairsOnUnitCircle) {
    NwpRecord rec;
    rec.valid_time = make_time(2021, 3, 7, 19, 45, 0);
    rec.wind_dir_deg = 237.3;
    const FeatureVector fv = ingest::encode_features(rec, 5.0, -4.0);
    EXPECT_NEAR(fv[3] * fv[3] + fv[4] * fv[4], 1.0, 1e-12);
    EXPECT_NEAR(fv[5] * fv[5] + fv[6] * fv[6], 1.0, 1e-12);
    EXPECT_NEAR(fv[7] * fv[7] + fv[8] * fv[8], 1.0, 1e-12);
}

TEST(Normalizer, FitApplyInvert) {
    std::vector<FeatureVector> rows;
    FeatureVector a{}, b{};
    for (std::size_t i = 0; i < ingest::kNumFeatures; ++i) {
        a[i] = static_cast<double>(i);           // mins
        b[i] = static_cast<double>(i) + 2.0;     // maxs
    }
    rows.push_back(a);
    rows.push_back(b);
    const Normalizer n = Normalizer::fit(rows, 2100.0);
    for (std::size_t i = 0; i < ingest::kNumFeatures; ++i) {
        EXPECT_DOUBLE_EQ(n.apply_feature(i, a[i]), 0.0);
        EXPECT_DOUBLE_EQ(n.apply_feature(i, b[i]), 1.0);
        EXPECT_DOUBLE_EQ(n.apply_feature(i, a[i] + 1.0), 0.5);
        EXPECT_DOUBLE_EQ(n.invert_feature(i, 0.5), a[i] + 1.0);
    }
}

TEST(Normalizer, ClampsOutOfRange) {
    std::vector<FeatureVector> rows(2);
    rows[0].fill(0.0);
    rows[1].fill(10.0);
    const Normalizer n = Normalizer::fit(rows, 1000.0);
    EXPECT_DOUBLE_EQ(n.apply_feature(0, -5.0), 0.0);
    EXPECT_DOUBLE_EQ(n.apply_feature(0, 15.0), 1.0);
}

TEST(Normalizer, DegenerateFeatureMapsToHalf) {
    std::vector<FeatureVector> rows(3);
    for (auto& r : rows) r.fill(4.2);
    const Normalizer n = Normalizer::fit(rows, 1000.0);
    EXPECT_DOUBLE_EQ(n.apply_feature(0, 4.2), 0.5);
    EXPECT_DOUBLE_EQ(n.apply_feature(0, 99.0), 0.5);
    EXPECT_DOUBLE_EQ(n.invert_feature(0, 0.5), 4.2);
}

TEST(Normalizer, PowerScaling) {
    std::vector<FeatureVector> rows(1);
    rows[0].fill(1.0);
    const Normalizer n = Normalizer::fit(rows, 2100.0);
    EXPECT_DOUBLE_EQ(n.normalize_power(1050.0), 0.5);
    EXPECT_DOUBLE_EQ(n.denormalize_power(0.5), 1050.0);
    EXPECT_DOUBLE_EQ(n.denormalize_power(-0.2), 0.0);    // clamped
    EXPECT_DOUBLE_EQ(n.denormalize_power(1.3), 2100.0);  // clamped
}

TEST(Normalizer, JsonRoundTripBitExact) {
    std::vector<FeatureVector> rows(2);
    rows[0].fill(0.1);          // not exactly representable
    rows[1].fill(1.0 / 3.0);
    rows[0][9] = -7.25;
    const Normalizer n = Normalizer::fit(rows, 2100.0);
    const Normalizer back = Normalizer::from_json(n.to_json());
    EXPECT_EQ(back.hash(), n.hash());
    for (std::size_t i = 0; i < ingest::kNumFeatures; ++i) {
        EXPECT_EQ(back.feature_min(i), n.feature_min(i));
        EXPECT_EQ(back.feature_max(i), n.feature_max(i));
    }
}

TEST(Normalizer, JsonIntegrityChecks) {
    std::vector<FeatureVector> rows(2);
    rows[0].fill(0.0);
    rows[1].fill(1.0);
    const Normalizer n = Normalizer::fit(rows, 2100.0);
    auto j = n.to_json();
    j["features"][0]["name"] = "wrong_name";
    EXPECT_THROW(Normalizer::from_json(j), IntegrityError);
    auto j2 = n.to_json();
    j2["kind"] = "other";
    EXPECT_THROW(Normalizer::from_json(j2), IntegrityError);
}

TEST(Normalizer, FitRejections) {
    EXPECT_THROW(Normalizer::fit({}, 2100.0), InputError);
    std::vector<FeatureVector> rows(1);
    rows[0].fill(0.0);
    EXPECT_THROW(Normalizer::fit(rows, 0.0), ConfigError);
    rows[0][3] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(Normalizer::fit(rows, 2100.0), InputError);
    Normalizer unfitted;
    EXPECT_THROW(unfitted.apply_feature(0, 1.0), InputError);
}
