#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "windcast/datagen.hpp"
#include "windcast/sampler.hpp"

using namespace windcast;
using ingest::NwpRecord;
using ingest::ScadaRecord;
using sampler::DayAssignment;
using sampler::ForecastSample;
using sampler::Partition;
using sampler::SampleBuildContext;

namespace {

constexpr TimePoint kT0 = 1577836800;  // 2020-01-01T00:00:00Z

// One issuance with full 15-min NWP coverage of the 49 hourly bins.
std::vector<NwpRecord> full_nwp(TimePoint issue, double ws = 8.0, double dir = 180.0) {
    std::vector<NwpRecord> out;
    for (std::int64_t off = 0; off < 49 * kSecondsPerHour; off += 15 * kSecondsPerMinute) {
        NwpRecord r;
        r.issue_time = issue;
        r.valid_time = issue + off;
        r.lead_minutes = off / 60;
        r.wind_speed_ms = ws;
        r.wind_gust_ms = ws * 1.2;
        r.temp_c = 5.0;
        r.wind_dir_deg = dir;
        out.push_back(r);
    }
    return out;
}

// Full 10-min SCADA coverage of the same window.
std::vector<ScadaRecord> full_scada(TimePoint start, double power = 100.0) {
    std::vector<ScadaRecord> out;
    for (std::int64_t off = 0; off < 49 * kSecondsPerHour; off += 10 * kSecondsPerMinute) {
        ScadaRecord r;
        r.turbine_id = "wt001";
        r.timestamp = start + off;
        r.power_kw = power;
        r.wind_speed_ms = 6.0;
        out.push_back(r);
    }
    return out;
}

SampleBuildContext ctx_equal_heights() {
    SampleBuildContext ctx;
    ctx.nwp_ref_height_m = 100.0;
    ctx.hub_height_m = 100.0;
    return ctx;
}

}  // namespace

TEST(BuildSamples, SingleCompleteIssuance) {
    const auto nwp = full_nwp(kT0);
    const auto scada = full_scada(kT0);
    const auto result = sampler::build_samples(nwp, scada, ctx_equal_heights());
    EXPECT_TRUE(result.warnings.empty());
    ASSERT_EQ(result.samples.size(), 1u);
    const ForecastSample& s = result.samples[0];
    EXPECT_EQ(s.turbine_id, "wt001");
    EXPECT_EQ(s.t0, kT0);
    ASSERT_EQ(s.features.size(), 49u);
    ASSERT_EQ(s.targets_kw.size(), 49u);
    for (int b = 0; b < 49; ++b) {
        EXPECT_DOUBLE_EQ(s.features[static_cast<std::size_t>(b)][0], 8.0);  // equal heights
        EXPECT_DOUBLE_EQ(s.features[static_cast<std::size_t>(b)][9], b);    // lead hours == step
        EXPECT_DOUBLE_EQ(s.targets_kw[static_cast<std::size_t>(b)], 100.0);
    }
}

TEST(BuildSamples, HourlyBinAveraging) {
    auto nwp = full_nwp(kT0);
    // bin 0 gets ws 4,6,8,10 -> mean 7
    for (int i = 0; i < 4; ++i) nwp[static_cast<std::size_t>(i)].wind_speed_ms = 4.0 + 2.0 * i;
    auto scada = full_scada(kT0);
    // bin 2 powers 10,20,30,40,50,60 -> mean 35
    for (int i = 0; i < 6; ++i)
        scada[static_cast<std::size_t>(12 + i)].power_kw = 10.0 * (i + 1);
    const auto result = sampler::build_samples(nwp, scada, ctx_equal_heights());
    ASSERT_EQ(result.samples.size(), 1u);
    EXPECT_DOUBLE_EQ(result.samples[0].features[0][0], 7.0);
    EXPECT_DOUBLE_EQ(result.samples[0].targets_kw[2], 35.0);
}

TEST(BuildSamples, CircularMeanDirection) {
    auto nwp = full_nwp(kT0);
    // bin 0 directions straddle north: mean must be 0, not 180
    nwp[0].wind_dir_deg = 350.0;
    nwp[1].wind_dir_deg = 10.0;
    nwp[2].wind_dir_deg = 355.0;
    nwp[3].wind_dir_deg = 5.0;
    const auto result = sampler::build_samples(nwp, full_scada(kT0), ctx_equal_heights());
    ASSERT_EQ(result.samples.size(), 1u);
    EXPECT_NEAR(result.samples[0].features[0][3], 0.0, 1e-9);  // sin ~ 0
    EXPECT_NEAR(result.samples[0].features[0][4], 1.0, 1e-9);  // cos ~ 1
}

TEST(BuildSamples, HubHeightAppliedToAveragedSpeed) {
    auto nwp = full_nwp(kT0, 8.0);
    SampleBuildContext ctx;
    ctx.nwp_ref_height_m = 80.0;
    ctx.hub_height_m = 114.0;
    const auto result = sampler::build_samples(nwp, full_scada(kT0), ctx);
    ASSERT_EQ(result.samples.size(), 1u);
    EXPECT_DOUBLE_EQ(result.samples[0].features[0][0], 8.646589979016817);
}

TEST(BuildSamples, HalfCoverageKeptBelowHalfDropped) {
    {
        // remove 2 of 4 NWP values in bin 5: exactly half remains, kept
        auto nwp = full_nwp(kT0);
        nwp.erase(nwp.begin() + 5 * 4, nwp.begin() + 5 * 4 + 2);
        const auto r = sampler::build_samples(nwp, full_scada(kT0), ctx_equal_heights());
        EXPECT_EQ(r.samples.size(), 1u);
    }
    {
        // remove 3 of 4: fewer than half, sample dropped
        auto nwp = full_nwp(kT0);
        nwp.erase(nwp.begin() + 5 * 4, nwp.begin() + 5 * 4 + 3);
        const auto r = sampler::build_samples(nwp, full_scada(kT0), ctx_equal_heights());
        EXPECT_EQ(r.samples.size(), 0u);
    }
    {
        // remove 3 of 6 SCADA values in bin 7: exactly half, kept
        auto scada = full_scada(kT0);
        scada.erase(scada.begin() + 7 * 6, scada.begin() + 7 * 6 + 3);
        const auto r = sampler::build_samples(full_nwp(kT0), scada, ctx_equal_heights());
        EXPECT_EQ(r.samples.size(), 1u);
    }
    {
        // remove 4 of 6: dropped
        auto scada = full_scada(kT0);
        scada.erase(scada.begin() + 7 * 6, scada.begin() + 7 * 6 + 4);
        const auto r = sampler::build_samples(full_nwp(kT0), scada, ctx_equal_heights());
        EXPECT_EQ(r.samples.size(), 0u);
    }
}

TEST(BuildSamples, NoOverlapWarns) {
    const auto nwp = full_nwp(kT0);
    const auto scada = full_scada(kT0 + 365 * kSecondsPerDay);
    const auto r = sampler::build_samples(nwp, scada, ctx_equal_heights());
    EXPECT_TRUE(r.samples.empty());
    ASSERT_FALSE(r.warnings.empty());
    EXPECT_NE(r.warnings[0].find("overlap"), std::string::npos);
}

TEST(BuildSamples, GeneratedFarmSampleCount) {
    datagen::FarmConfig c;
    c.n_turbines = 1;
    c.duration_days = 30;
    c.rng_seed = 3;
    const auto ds = datagen::generate_farm(c, datagen::BiasProfile{});
    SampleBuildContext ctx;
    ctx.nwp_ref_height_m = c.nwp_ref_height_m;
    ctx.hub_height_m = c.hub_height_m;
    const auto r = sampler::build_samples(ds.nwp, ds.scada[0], ctx);
    // issuances every 6 h; the 49-hour window must stay inside the 30-day
    // SCADA period, which the last two issuances of the month violate
    EXPECT_EQ(r.samples.size(), 112u);
    for (const auto& s : r.samples) {
        for (int b = 0; b < 49; ++b)
            EXPECT_DOUBLE_EQ(s.features[static_cast<std::size_t>(b)][9], b);
    }
}

TEST(Split, DeterministicAndExhaustive) {
    std::set<std::string> days;
    for (int d = 1; d <= 31; ++d) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "2020-01-%02d", d);
        days.insert(buf);
    }
    const DayAssignment a = sampler::split_days(days, 11);
    const DayAssignment b = sampler::split_days(days, 11);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.size(), 31u);

    int n_train = 0, n_val = 0, n_test = 0;
    for (const auto& [day, p] : a) {
        if (p == Partition::Train) ++n_train;
        else if (p == Partition::Validation) ++n_val;
        else ++n_test;
    }
    // round(0.2 * 31) = 6
    EXPECT_EQ(n_val, 6);
    EXPECT_EQ(n_test, 6);
    EXPECT_EQ(n_train, 19);
}

TEST(Split, RunsAreConsecutiveAndDisjoint) {
    std::set<std::string> days;
    for (int d = 1; d <= 30; ++d) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "2021-06-%02d", d);
        days.insert(buf);
    }
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const DayAssignment a = sampler::split_days(days, seed);
        std::vector<Partition> seq;
        for (const auto& d : days) seq.push_back(a.at(d));
        auto runs_of = [&](Partition p) {
            int runs = 0;
            for (std::size_t i = 0; i < seq.size(); ++i)
                if (seq[i] == p && (i == 0 || seq[i - 1] != p)) ++runs;
            return runs;
        };
        EXPECT_EQ(runs_of(Partition::Validation), 1) << "seed " << seed;
        EXPECT_EQ(runs_of(Partition::Test), 1) << "seed " << seed;
        EXPECT_EQ(std::count(seq.begin(), seq.end(), Partition::Validation), 6);
        EXPECT_EQ(std::count(seq.begin(), seq.end(), Partition::Test), 6);
    }
}

TEST(Split, PerMonthIndependentPlacement) {
    std::set<std::string> days;
    for (int m = 1; m <= 3; ++m)
        for (int d = 1; d <= days_in_month(2020, m); ++d) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "2020-%02d-%02d", m, d);
            days.insert(buf);
        }
    const DayAssignment a = sampler::split_days(days, 5);
    // each month holds its own val/test runs
    std::map<std::string, std::pair<int, int>> month_counts;
    for (const auto& [day, p] : a) {
        auto& [v, t] = month_counts[day.substr(0, 7)];
        if (p == Partition::Validation) ++v;
        if (p == Partition::Test) ++t;
    }
    ASSERT_EQ(month_counts.size(), 3u);
    for (const auto& [m, vt] : month_counts) {
        const int expect = static_cast<int>(std::llround(
            0.2 * (m == "2020-02" ? 29 : 31)));
        EXPECT_EQ(vt.first, expect) << m;
        EXPECT_EQ(vt.second, expect) << m;
    }
}

TEST(Split, ShortMonthRejected) {
    std::set<std::string> days = {"2020-01-01"};  // one day: two 1-day runs cannot fit
    EXPECT_THROW(sampler::split_days(days, 0), DataError);
    std::set<std::string> two = {"2020-01-01", "2020-01-02"};  // exactly fits
    const auto a = sampler::split_days(two, 0);
    EXPECT_EQ(a.size(), 2u);
}

TEST(Split, SamplePartitioning) {
    std::vector<ForecastSample> samples(6);
    const char* days[] = {"2020-01-05", "2020-01-05", "2020-01-10",
                          "2020-01-15", "2020-01-20", "2020-01-25"};
    for (int i = 0; i < 6; ++i) {
        samples[static_cast<std::size_t>(i)].t0 = parse_iso8601(std::string(days[i]) + "T06:00:00Z");
        samples[static_cast<std::size_t>(i)].features.resize(49);
        samples[static_cast<std::size_t>(i)].targets_kw.resize(49);
    }
    const auto split = sampler::split_monthly(samples, 17);
    EXPECT_EQ(split.train.size() + split.validation.size() + split.test.size(), 6u);
    // samples sharing a day share a partition
    const auto part_of = [&](std::size_t idx) {
        if (std::count(split.train.begin(), split.train.end(), idx)) return 0;
        if (std::count(split.validation.begin(), split.validation.end(), idx)) return 1;
        return 2;
    };
    EXPECT_EQ(part_of(0), part_of(1));
}

TEST(Split, BoundaryCrossingDetection) {
    DayAssignment a = {{"2020-01-01", Partition::Train},
                       {"2020-01-02", Partition::Train},
                       {"2020-01-03", Partition::Test},
                       {"2020-01-04", Partition::Test},
                       {"2020-01-05", Partition::Train}};
    std::vector<ForecastSample> samples(3);
    samples[0].t0 = make_time(2020, 1, 1, 6, 0, 0);   // spans jan1 06h .. jan3 06h -> crosses
    samples[1].t0 = make_time(2020, 1, 3, 0, 0, 0);   // spans jan3 .. jan5 00h -> crosses (jan5 train)
    samples[2].t0 = make_time(2020, 1, 3, 1, 0, 0);   // spans jan3 01h .. jan5 01h -> crosses
    const auto crossing = sampler::boundary_crossing_samples(samples, a);
    EXPECT_EQ(crossing, (std::vector<std::size_t>{0, 1, 2}));

    samples[0].t0 = make_time(2020, 1, 1, 0, 0, 0);   // jan1 00h .. jan3 00h -> touches jan3 test
    const auto c2 = sampler::boundary_crossing_samples(samples, a);
    EXPECT_TRUE(std::count(c2.begin(), c2.end(), 0u) == 1);

    DayAssignment all_train = {{"2020-01-01", Partition::Train},
                               {"2020-01-02", Partition::Train},
                               {"2020-01-03", Partition::Train}};
    std::vector<ForecastSample> inside(1);
    inside[0].t0 = make_time(2020, 1, 1, 0, 0, 0);
    EXPECT_TRUE(sampler::boundary_crossing_samples(inside, all_train).empty());
}

TEST(SampleIo, CsvRoundTripBitExact) {
    datagen::FarmConfig c;
    c.n_turbines = 1;
    c.duration_days = 5;
    c.rng_seed = 9;
    datagen::BiasProfile bias;
    bias.diurnal_amplitude_ms = 1.0;
    bias.noise_std_ms = 0.5;
    const auto ds = datagen::generate_farm(c, bias);
    SampleBuildContext ctx;
    ctx.nwp_ref_height_m = c.nwp_ref_height_m;
    ctx.hub_height_m = c.hub_height_m;
    const auto r = sampler::build_samples(ds.nwp, ds.scada[0], ctx);
    ASSERT_GT(r.samples.size(), 0u);

    std::ostringstream os;
    sampler::write_samples_csv(os, r.samples);
    std::istringstream is(os.str());
    const auto back = sampler::read_samples_csv(is);
    ASSERT_EQ(back.size(), r.samples.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back[i].turbine_id, r.samples[i].turbine_id);
        EXPECT_EQ(back[i].t0, r.samples[i].t0);
        for (int b = 0; b < 49; ++b) {
            const auto bi = static_cast<std::size_t>(b);
            EXPECT_EQ(back[i].targets_kw[bi], r.samples[i].targets_kw[bi]);
            for (std::size_t f = 0; f < ingest::kNumFeatures; ++f)
                EXPECT_EQ(back[i].features[bi][f], r.samples[i].features[bi][f]);
        }
    }
}

TEST(SampleIo, AssignmentJsonRoundTrip) {
    DayAssignment a = {{"2020-01-01", Partition::Train},
                       {"2020-01-02", Partition::Validation},
                       {"2020-01-03", Partition::Test}};
    const DayAssignment back = sampler::assignment_from_json(sampler::assignment_to_json(a));
    EXPECT_EQ(back, a);
}

TEST(SampleIo, RejectsCorruptHeader) {
    std::istringstream is("wrong,header\n");
    EXPECT_THROW(sampler::read_samples_csv(is), DataError);
}
