#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "windcast/common.hpp"
#include "windcast/features.hpp"
#include "windcast/ingest.hpp"
#include "windcast/rng.hpp"
#include "windcast/timeutil.hpp"

namespace windcast::sampler {

inline constexpr int kSampleSteps = 49;  // t0 .. t0+48h, hourly

// One matched forecast sample: 49 hourly feature rows (pre-normalization,
// physical units) and the 49 observed hourly-mean power values.
struct ForecastSample {
    std::string turbine_id;
    TimePoint t0 = 0;
    std::vector<ingest::FeatureVector> features;  // kSampleSteps rows
    std::vector<double> targets_kw;               // kSampleSteps values
};

struct SampleBuildContext {
    double nwp_ref_height_m = 80.0;
    double hub_height_m = 114.0;
    double local_tz_offset_hours = 0.0;
    int nwp_interval_minutes = 15;
    int scada_interval_minutes = 10;
};

struct BuildResult {
    std::vector<ForecastSample> samples;
    std::vector<std::string> warnings;
};

namespace detail {

struct BinAccum {
    double ws = 0.0, gust = 0.0, temp = 0.0, dir_sin = 0.0, dir_cos = 0.0;
    int count = 0;

    void add(const ingest::NwpRecord& r) {
        ws += r.wind_speed_ms;
        gust += r.wind_gust_ms;
        temp += r.temp_c;
        const double th = r.wind_dir_deg * ingest::kPi / 180.0;
        dir_sin += std::sin(th);
        dir_cos += std::cos(th);
        ++count;
    }
};

inline double circular_mean_deg(double sin_sum, double cos_sum) {
    if (sin_sum == 0.0 && cos_sum == 0.0) return 0.0;
    double deg = std::atan2(sin_sum, cos_sum) * 180.0 / ingest::kPi;
    if (deg < 0.0) deg += 360.0;
    return deg;
}

}  // namespace detail

// Matches one turbine's SCADA series against the shared NWP series. One
// candidate sample per NWP issuance; 15-min NWP values and 10-min SCADA
// power are averaged into hourly bins [t, t+1h). A bin with fewer than half
// of its expected sub-hourly values is missing, and a candidate with any
// missing bin is dropped entirely.
inline BuildResult build_samples(const std::vector<ingest::NwpRecord>& nwp,
                                 const std::vector<ingest::ScadaRecord>& scada,
                                 const SampleBuildContext& ctx) {
    BuildResult result;
    if (nwp.empty() || scada.empty()) {
        result.warnings.push_back("empty input series, no samples built");
        return result;
    }
    const int nwp_per_bin = 60 / ctx.nwp_interval_minutes;
    const int scada_per_bin = 60 / ctx.scada_interval_minutes;
    const int nwp_min_bin = (nwp_per_bin + 1) / 2;
    const int scada_min_bin = (scada_per_bin + 1) / 2;

    // scada is sorted by timestamp (single turbine); verify cheaply.
    for (std::size_t i = 1; i < scada.size(); ++i)
        if (scada[i].timestamp <= scada[i - 1].timestamp)
            throw InputError("build_samples: scada series not strictly increasing");

    const std::string turbine_id = scada.front().turbine_id;

    bool any_overlap = false;
    std::size_t i = 0;  // nwp cursor; records sorted by (issue_time, valid_time)
    while (i < nwp.size()) {
        const TimePoint issue = nwp[i].issue_time;
        std::size_t j = i;
        while (j < nwp.size() && nwp[j].issue_time == issue) ++j;

        const TimePoint t0 = issue;
        std::array<detail::BinAccum, kSampleSteps> bins{};
        for (std::size_t k = i; k < j; ++k) {
            const std::int64_t off = nwp[k].valid_time - t0;
            if (off < 0) continue;
            const std::int64_t bin = off / kSecondsPerHour;
            if (bin >= kSampleSteps) continue;
            bins[static_cast<std::size_t>(bin)].add(nwp[k]);
        }

        std::array<double, kSampleSteps> target{};
        std::array<int, kSampleSteps> target_n{};
        {
            const auto lo = std::lower_bound(
                scada.begin(), scada.end(), t0,
                [](const ingest::ScadaRecord& r, TimePoint t) { return r.timestamp < t; });
            for (auto it = lo; it != scada.end(); ++it) {
                const std::int64_t off = it->timestamp - t0;
                const std::int64_t bin = off / kSecondsPerHour;
                if (bin >= kSampleSteps) break;
                target[static_cast<std::size_t>(bin)] += it->power_kw;
                ++target_n[static_cast<std::size_t>(bin)];
                any_overlap = true;
            }
        }

        bool complete = true;
        for (int b = 0; b < kSampleSteps; ++b) {
            if (bins[static_cast<std::size_t>(b)].count < nwp_min_bin ||
                target_n[static_cast<std::size_t>(b)] < scada_min_bin) {
                complete = false;
                break;
            }
        }
        if (complete) {
            ForecastSample s;
            s.turbine_id = turbine_id;
            s.t0 = t0;
            s.features.reserve(kSampleSteps);
            s.targets_kw.reserve(kSampleSteps);
            for (int b = 0; b < kSampleSteps; ++b) {
                const auto& acc = bins[static_cast<std::size_t>(b)];
                ingest::NwpRecord mean_rec;
                mean_rec.issue_time = issue;
                mean_rec.valid_time = t0 + b * kSecondsPerHour;
                mean_rec.lead_minutes = (mean_rec.valid_time - issue) / kSecondsPerMinute;
                mean_rec.wind_speed_ms = acc.ws / acc.count;
                mean_rec.wind_gust_ms = acc.gust / acc.count;
                mean_rec.temp_c = acc.temp / acc.count;
                // Circular mean keeps the encoded pair on the unit circle.
                mean_rec.wind_dir_deg =
                    detail::circular_mean_deg(acc.dir_sin, acc.dir_cos);
                const double ws_hub = ingest::adjust_hub_height(
                    mean_rec.wind_speed_ms, ctx.nwp_ref_height_m, ctx.hub_height_m);
                s.features.push_back(
                    ingest::encode_features(mean_rec, ws_hub, ctx.local_tz_offset_hours));
                s.targets_kw.push_back(target[static_cast<std::size_t>(b)] /
                                       target_n[static_cast<std::size_t>(b)]);
            }
            result.samples.push_back(std::move(s));
        }
        i = j;
    }
    if (!any_overlap)
        result.warnings.push_back("nwp and scada series do not overlap in time");
    return result;
}

enum class Partition { Train, Validation, Test };

inline const char* partition_name(Partition p) {
    switch (p) {
        case Partition::Train: return "train";
        case Partition::Validation: return "validation";
        default: return "test";
    }
}

inline Partition partition_from_name(const std::string& s) {
    if (s == "train") return Partition::Train;
    if (s == "validation") return Partition::Validation;
    if (s == "test") return Partition::Test;
    throw IntegrityError("unknown partition name: " + s);
}

// day (UTC "YYYY-MM-DD") -> partition, shared across all turbines.
using DayAssignment = std::map<std::string, Partition>;

struct DatasetSplit {
    DayAssignment assignment;
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

// Draws, per calendar month, one run of consecutive days for validation and
// one for test (each round(20%) of that month's present days); everything
// else trains. Runs are placed by rejection sampling, so the layout is
// deterministic for a fixed seed.
inline DayAssignment split_days(const std::set<std::string>& days, std::uint64_t seed) {
    DayAssignment assignment;
    std::map<std::string, std::vector<std::string>> by_month;  // "YYYY-MM" -> days
    for (const auto& d : days) by_month[d.substr(0, 7)].push_back(d);

    Rng rng(derive_seed(seed, 7));
    for (auto& [month, mdays] : by_month) {
        std::sort(mdays.begin(), mdays.end());
        const std::int64_t len = static_cast<std::int64_t>(mdays.size());
        const std::int64_t run = std::max<std::int64_t>(1, std::llround(0.2 * static_cast<double>(len)));
        if (2 * run > len)
            throw DataError("split: month " + month + " has " + std::to_string(len) +
                            " days, too short for two " + std::to_string(run) + "-day runs");
        std::int64_t vstart = 0, tstart = 0;
        for (int attempt = 0;; ++attempt) {
            if (attempt > 100000)
                throw DataError("split: could not place non-overlapping runs in " + month);
            vstart = rng.uniform_int(0, len - run);
            tstart = rng.uniform_int(0, len - run);
            const bool overlap = vstart < tstart + run && tstart < vstart + run;
            if (!overlap) break;
        }
        for (std::int64_t k = 0; k < len; ++k) {
            Partition p = Partition::Train;
            if (k >= vstart && k < vstart + run) p = Partition::Validation;
            else if (k >= tstart && k < tstart + run) p = Partition::Test;
            assignment[mdays[static_cast<std::size_t>(k)]] = p;
        }
    }
    return assignment;
}

// A sample belongs to the partition of its t0 day.
inline void apply_assignment(const std::vector<ForecastSample>& samples,
                             const DayAssignment& assignment, DatasetSplit& out) {
    for (std::size_t idx = 0; idx < samples.size(); ++idx) {
        const auto it = assignment.find(day_key(samples[idx].t0));
        if (it == assignment.end())
            throw IntegrityError("split: sample day " + day_key(samples[idx].t0) +
                                 " missing from assignment");
        switch (it->second) {
            case Partition::Train: out.train.push_back(idx); break;
            case Partition::Validation: out.validation.push_back(idx); break;
            case Partition::Test: out.test.push_back(idx); break;
        }
    }
}

inline DatasetSplit split_monthly(const std::vector<ForecastSample>& samples, std::uint64_t seed) {
    if (samples.empty()) throw InputError("split: no samples");
    std::set<std::string> days;
    for (const auto& s : samples) days.insert(day_key(s.t0));
    DatasetSplit split;
    split.assignment = split_days(days, seed);
    apply_assignment(samples, split.assignment, split);
    return split;
}

// Optional strictness knob: drop samples whose 49-hour window touches a day
// assigned to a different partition than their t0 day.
inline std::vector<std::size_t> boundary_crossing_samples(
    const std::vector<ForecastSample>& samples, const DayAssignment& assignment) {
    std::vector<std::size_t> crossing;
    for (std::size_t idx = 0; idx < samples.size(); ++idx) {
        const auto& s = samples[idx];
        const auto own = assignment.find(day_key(s.t0));
        if (own == assignment.end()) continue;
        // Daily stride from t0 visits each calendar day the window touches.
        for (TimePoint t = s.t0; t <= s.t0 + 48 * kSecondsPerHour; t += kSecondsPerDay) {
            const auto it = assignment.find(day_key(t));
            if (it != assignment.end() && it->second != own->second) {
                crossing.push_back(idx);
                break;
            }
        }
    }
    return crossing;
}

// --- sample file format -------------------------------------------------
// Long-format delimited text, one row per (sample, step). Values use %.17g
// so a write/read round trip is bit exact.

inline constexpr const char* kSamplesHeader =
    "sample,turbine_id,t0,step,nwp_ws_adj,nwp_gust,nwp_temp,nwp_dir_sin,nwp_dir_cos,"
    "hour_sin,hour_cos,doy_sin,doy_cos,lead_time,target_kw";

inline void write_samples_csv(std::ostream& os, const std::vector<ForecastSample>& samples) {
    os << kSamplesHeader << "\n";
    char buf[32];
    for (std::size_t idx = 0; idx < samples.size(); ++idx) {
        const auto& s = samples[idx];
        for (int step = 0; step < kSampleSteps; ++step) {
            os << idx << ',' << s.turbine_id << ',' << format_iso8601(s.t0) << ',' << step;
            for (double v : s.features[static_cast<std::size_t>(step)]) {
                std::snprintf(buf, sizeof(buf), "%.17g", v);
                os << ',' << buf;
            }
            std::snprintf(buf, sizeof(buf), "%.17g", s.targets_kw[static_cast<std::size_t>(step)]);
            os << ',' << buf << '\n';
        }
    }
}

inline std::vector<ForecastSample> read_samples_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("samples: empty stream");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSamplesHeader) throw DataError("samples: bad header");

    std::vector<ForecastSample> samples;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = ingest::detail::split_csv(line);
        if (f.size() != 15)
            throw DataError("samples line " + std::to_string(lineno) + ": expected 15 fields");
        const std::size_t idx = static_cast<std::size_t>(std::stoull(f[0]));
        const int step = std::stoi(f[3]);
        if (idx == samples.size()) {
            samples.emplace_back();
            samples.back().turbine_id = f[1];
            samples.back().t0 = parse_iso8601(f[2]);
        } else if (idx != samples.size() - 1) {
            throw DataError("samples line " + std::to_string(lineno) + ": indices out of order");
        }
        auto& s = samples.back();
        if (step != static_cast<int>(s.features.size()))
            throw DataError("samples line " + std::to_string(lineno) + ": steps out of order");
        ingest::FeatureVector fv;
        for (std::size_t k = 0; k < ingest::kNumFeatures; ++k) {
            double v;
            if (!ingest::detail::parse_double(f[4 + k], v))
                throw DataError("samples line " + std::to_string(lineno) + ": bad value");
            fv[k] = v;
        }
        double target;
        if (!ingest::detail::parse_double(f[14], target))
            throw DataError("samples line " + std::to_string(lineno) + ": bad target");
        s.features.push_back(fv);
        s.targets_kw.push_back(target);
    }
    for (const auto& s : samples)
        if (static_cast<int>(s.features.size()) != kSampleSteps)
            throw DataError("samples: sample with " + std::to_string(s.features.size()) +
                            " steps, expected 49");
    return samples;
}

inline nlohmann::json assignment_to_json(const DayAssignment& a) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [day, p] : a) j[day] = partition_name(p);
    return j;
}

inline DayAssignment assignment_from_json(const nlohmann::json& j) {
    DayAssignment a;
    for (auto it = j.begin(); it != j.end(); ++it)
        a[it.key()] = partition_from_name(it.value().get<std::string>());
    return a;
}

}  // namespace windcast::sampler
