#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <string>
#include <vector>

#include "windcast/common.hpp"
#include "windcast/power_curve.hpp"
#include "windcast/rng.hpp"
#include "windcast/timeutil.hpp"

using namespace windcast;

TEST(Hash, Fnv1a64KnownVectors) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Hash, Hex64Formatting) {
    EXPECT_EQ(hex64(0), "0000000000000000");
    EXPECT_EQ(hex64(0xdeadbeefULL), "00000000deadbeef");
    EXPECT_EQ(hex64(0xcbf29ce484222325ULL), "cbf29ce484222325");
}

TEST(Hash, HexDoubleRoundTrip) {
    const double values[] = {0.0,     -0.0,   0.1,   -1.0 / 3.0, 1e308,
                             5e-324,  1.0,    -2.5,  3.14159265358979323846,
                             1e-300};
    for (double v : values) {
        const double back = hex_to_double(double_to_hex(v));
        std::uint64_t bv, bb;
        std::memcpy(&bv, &v, sizeof v);
        std::memcpy(&bb, &back, sizeof back);
        EXPECT_EQ(bv, bb);  // bit-exact, including signed zero
    }
}

TEST(Rng, Splitmix64KnownVectors) {
    // first three outputs of a splitmix64 stream seeded with 1234567
    EXPECT_EQ(mix64(1234567), 0x599ed017fb08fc85ULL);
    std::uint64_t state = 1234567;
    const std::uint64_t expected[] = {0x599ed017fb08fc85ULL, 0x2c73f08458540fa5ULL,
                                      0x883ebce5a3f27c77ULL};
    for (std::uint64_t e : expected) {
        EXPECT_EQ(mix64(state), e);
        state += 0x9e3779b97f4a7c15ULL;
    }
}

TEST(Rng, Mt19937_64TenThousandth) {
    // the standard pins this value for the default-seeded engine
    std::mt19937_64 gen(5489u);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = gen();
    EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, DeterministicAcrossInstances) {
    Rng a(42), b(42), c(43);
    bool any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next_u64();
        EXPECT_EQ(va, b.next_u64());
        if (va != c.next_u64()) any_diff = true;
    }
    EXPECT_TRUE(any_diff);
}

TEST(Rng, Uniform01Range) {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform01();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(Rng, UniformIntInclusiveBounds) {
    Rng rng(11);
    std::set<std::int64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto v = rng.uniform_int(-2, 3);
        EXPECT_GE(v, -2);
        EXPECT_LE(v, 3);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 6u);  // all values hit in 1000 draws
    for (int i = 0; i < 10; ++i) EXPECT_EQ(rng.uniform_int(5, 5), 5);
}

TEST(Rng, NormalMoments) {
    Rng rng(99);
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(2.0, 3.0);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    EXPECT_NEAR(mean, 2.0, 0.05);
    EXPECT_NEAR(std::sqrt(var), 3.0, 0.05);
}

TEST(Rng, ShuffleIsPermutation) {
    Rng rng(5);
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[static_cast<std::size_t>(i)] = i;
    auto w = v;
    rng.shuffle(w);
    EXPECT_NE(w, v);
    std::sort(w.begin(), w.end());
    EXPECT_EQ(w, v);
}

TEST(Rng, DerivedStreamsDiffer) {
    EXPECT_NE(derive_seed(0, 0), derive_seed(0, 1));
    EXPECT_NE(derive_seed(0, 0), derive_seed(1, 0));
}

TEST(Time, EpochAnchors) {
    EXPECT_EQ(make_time(1970, 1, 1, 0, 0, 0), 0);
    EXPECT_EQ(make_time(2020, 1, 1, 0, 0, 0), 1577836800);
    EXPECT_EQ(make_time(2020, 2, 29, 12, 34, 56), 1582979696);
    EXPECT_EQ(make_time(1969, 12, 31, 23, 59, 59), -1);
    EXPECT_EQ(make_time(2000, 3, 1, 0, 0, 0), 951868800);
    EXPECT_EQ(make_time(2026, 8, 22, 6, 0, 0), 1787378400);
}

TEST(Time, CivilRoundTrip) {
    for (int year : {1999, 2000, 2020, 2021, 2024}) {
        for (int month = 1; month <= 12; ++month) {
            const TimePoint t = make_time(year, month, 15, 8, 30, 0);
            const CivilDate d = civil_date_of(t);
            EXPECT_EQ(d.year, year);
            EXPECT_EQ(d.month, month);
            EXPECT_EQ(d.day, 15);
        }
    }
}

TEST(Time, LeapYears) {
    EXPECT_TRUE(is_leap_year(2000));
    EXPECT_TRUE(is_leap_year(2020));
    EXPECT_FALSE(is_leap_year(1900));
    EXPECT_FALSE(is_leap_year(2021));
    EXPECT_EQ(days_in_month(2020, 2), 29);
    EXPECT_EQ(days_in_month(2021, 2), 28);
    EXPECT_EQ(days_in_month(2021, 12), 31);
}

TEST(Time, DayOfYear) {
    EXPECT_EQ(day_of_year(make_time(2020, 1, 1, 0, 0, 0)), 1);
    EXPECT_EQ(day_of_year(make_time(2020, 12, 31, 23, 0, 0)), 366);
    EXPECT_EQ(day_of_year(make_time(2021, 3, 1, 0, 0, 0)), 60);
}

TEST(Time, Iso8601RoundTrip) {
    const TimePoint t = make_time(2021, 7, 4, 18, 5, 9);
    EXPECT_EQ(format_iso8601(t), "2021-07-04T18:05:09Z");
    EXPECT_EQ(parse_iso8601("2021-07-04T18:05:09Z"), t);
}

TEST(Time, Iso8601Rejects) {
    TimePoint t = 0;
    EXPECT_FALSE(try_parse_iso8601("2021-07-04 18:05:09Z", t));
    EXPECT_FALSE(try_parse_iso8601("2021-07-04T18:05:09", t));
    EXPECT_FALSE(try_parse_iso8601("2021-13-04T18:05:09Z", t));
    EXPECT_FALSE(try_parse_iso8601("2021-02-30T00:00:00Z", t));
    EXPECT_FALSE(try_parse_iso8601("garbage", t));
    EXPECT_THROW(parse_iso8601("nope"), InputError);
}

TEST(Time, LocalShiftAndHour) {
    const TimePoint t = make_time(2021, 6, 1, 0, 30, 0);
    EXPECT_DOUBLE_EQ(hour_of_day(t), 0.5);
    EXPECT_DOUBLE_EQ(hour_of_day(shift_to_local(t, -2.0)), 22.5);
    EXPECT_EQ(day_key(t), "2021-06-01");
    EXPECT_EQ(day_key(shift_to_local(t, -1.0)), "2021-05-31");
}

TEST(Time, FloorDivMod) {
    EXPECT_EQ(floor_div(-1, 86400), -1);
    EXPECT_EQ(floor_mod(-1, 86400), 86399);
    EXPECT_EQ(floor_div(86399, 86400), 0);
}

TEST(PowerCurve, DefaultCurveShape) {
    const PowerCurve curve = default_power_curve();
    EXPECT_DOUBLE_EQ(curve(0.0), 0.0);
    EXPECT_DOUBLE_EQ(curve(2.9), 0.0);
    EXPECT_DOUBLE_EQ(curve(3.0), 0.0);
    EXPECT_DOUBLE_EQ(curve(12.0), 2100.0);
    EXPECT_DOUBLE_EQ(curve(20.0), 2100.0);
    EXPECT_DOUBLE_EQ(curve(24.999), 2100.0);
    EXPECT_DOUBLE_EQ(curve(25.0), 0.0);
    EXPECT_DOUBLE_EQ(curve(30.0), 0.0);
    // halfway up the ramp: cubic smoothstep gives exactly half capacity
    EXPECT_NEAR(curve(7.5), 1050.0, 1e-9);
    EXPECT_THROW(curve(-0.1), InputError);
}

TEST(PowerCurve, Monotone) {
    const PowerCurve curve = default_power_curve();
    double prev = 0.0;
    for (double ws = 0.0; ws < 25.0; ws += 0.01) {
        const double p = curve(ws);
        EXPECT_GE(p, prev - 1e-12);
        prev = p;
    }
}

TEST(PowerCurve, InterpolationMidpoint) {
    PowerCurve c;
    c.knot_ws = {0.0, 10.0};
    c.knot_power = {0.0, 1000.0};
    c.capacity_kw = 1000.0;
    c.validate();
    EXPECT_DOUBLE_EQ(c(5.0), 500.0);
    EXPECT_DOUBLE_EQ(c(2.5), 250.0);
}

TEST(PowerCurve, ValidateRejects) {
    PowerCurve c;
    c.knot_ws = {0.0, 1.0, 1.0};
    c.knot_power = {0.0, 1.0, 2.0};
    c.capacity_kw = 2.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c.knot_ws = {0.0, 1.0, 2.0};
    c.knot_power = {0.0, 2.0, 1.0};
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Errors, HierarchyCatchable) {
    EXPECT_THROW(throw ConfigError("x"), Error);
    EXPECT_THROW(throw DataError("x"), Error);
    EXPECT_THROW(throw IntegrityError("x"), Error);
}
