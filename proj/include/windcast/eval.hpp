#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "windcast/common.hpp"
#include "windcast/timeutil.hpp"

namespace windcast::eval {

using json = nlohmann::ordered_json;

// Per-sample errors first, then an unweighted mean over samples. The two
// aggregation orders differ (averaging RMSE_k is not a pooled RMSE), and
// everything downstream assumes this one.
struct MetricsReport {
    std::vector<double> mb_k;
    std::vector<double> mae_k;
    std::vector<double> rmse_k;
    double mb = 0.0;
    double mae = 0.0;
    double rmse = 0.0;
    double nrmse_pct = 0.0;
    std::size_t samples = 0;
    double capacity_kw = 0.0;

    json to_json() const {
        return json{{"samples", samples},
                    {"capacity_kw", capacity_kw},
                    {"mb_kw", mb},
                    {"mae_kw", mae},
                    {"rmse_kw", rmse},
                    {"nrmse_pct", nrmse_pct}};
    }
};

inline MetricsReport compute_metrics(const std::vector<std::vector<double>>& preds,
                                     const std::vector<std::vector<double>>& truth,
                                     double capacity_kw) {
    if (capacity_kw <= 0.0) throw ConfigError("metrics: capacity must be > 0");
    if (preds.empty()) throw InputError("metrics: no samples");
    if (preds.size() != truth.size()) throw InputError("metrics: sample counts differ");

    MetricsReport r;
    r.samples = preds.size();
    r.capacity_kw = capacity_kw;
    r.mb_k.reserve(r.samples);
    r.mae_k.reserve(r.samples);
    r.rmse_k.reserve(r.samples);
    for (std::size_t k = 0; k < preds.size(); ++k) {
        const auto& p = preds[k];
        const auto& t = truth[k];
        if (p.empty() || p.size() != t.size())
            throw InputError("metrics: prediction/truth shapes differ");
        double sb = 0.0, sa = 0.0, sq = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (!std::isfinite(p[j]) || !std::isfinite(t[j]))
                throw InputError("metrics: non-finite value");
            const double d = p[j] - t[j];  // bias sign: prediction - observation
            sb += d;
            sa += std::abs(d);
            sq += d * d;
        }
        const double inv_t = 1.0 / static_cast<double>(p.size());
        r.mb_k.push_back(sb * inv_t);
        r.mae_k.push_back(sa * inv_t);
        r.rmse_k.push_back(std::sqrt(sq * inv_t));
    }
    const double inv_k = 1.0 / static_cast<double>(r.samples);
    for (std::size_t k = 0; k < r.samples; ++k) {
        r.mb += r.mb_k[k];
        r.mae += r.mae_k[k];
        r.rmse += r.rmse_k[k];
    }
    r.mb *= inv_k;
    r.mae *= inv_k;
    r.rmse *= inv_k;
    r.nrmse_pct = r.rmse * 100.0 / capacity_kw;
    return r;
}

enum class BiasDimension { month, local_hour };

inline const char* bias_dimension_name(BiasDimension d) {
    return d == BiasDimension::month ? "month" : "local_hour";
}

struct BiasBin {
    int bin = 0;  // month 1-12 or local hour 0-23
    std::size_t n = 0;
    double mean_bias = 0.0;
    double stddev = 0.0;  // population std of the bin's errors
};

// Mean of (pred - truth) per calendar bin in local time. Timestep j of
// sample k sits at t0s[k] + j hours. Bins that receive no timesteps are
// omitted rather than emitted as zero.
inline std::vector<BiasBin> bias_table(const std::vector<std::vector<double>>& preds,
                                       const std::vector<std::vector<double>>& truth,
                                       const std::vector<TimePoint>& t0s, BiasDimension dim,
                                       double tz_offset_hours) {
    if (preds.size() != truth.size() || preds.size() != t0s.size())
        throw InputError("bias table: shapes differ");
    std::map<int, std::vector<double>> bins;
    for (std::size_t k = 0; k < preds.size(); ++k) {
        if (preds[k].size() != truth[k].size())
            throw InputError("bias table: prediction/truth shapes differ");
        for (std::size_t j = 0; j < preds[k].size(); ++j) {
            const TimePoint t = t0s[k] + static_cast<TimePoint>(j) * kSecondsPerHour;
            const TimePoint local = shift_to_local(t, tz_offset_hours);
            const int bin = dim == BiasDimension::month
                                ? civil_date_of(local).month
                                : second_of_day(local) / static_cast<int>(kSecondsPerHour);
            bins[bin].push_back(preds[k][j] - truth[k][j]);
        }
    }
    std::vector<BiasBin> out;
    out.reserve(bins.size());
    for (const auto& [bin, errs] : bins) {
        BiasBin b;
        b.bin = bin;
        b.n = errs.size();
        double mean = 0.0;
        for (double e : errs) mean += e;
        mean /= static_cast<double>(errs.size());
        double var = 0.0;
        for (double e : errs) var += (e - mean) * (e - mean);
        var /= static_cast<double>(errs.size());
        b.mean_bias = mean;
        b.stddev = std::sqrt(var);
        out.push_back(b);
    }
    return out;
}

// Tidy long format for external plotting: one row per populated bin.
inline std::string bias_table_csv(const std::vector<BiasBin>& bins, BiasDimension dim) {
    std::string out = std::string(bias_dimension_name(dim)) + ",n,mean_bias_kw,std_kw\n";
    char buf[128];
    for (const BiasBin& b : bins) {
        std::snprintf(buf, sizeof(buf), "%d,%zu,%.17g,%.17g\n", b.bin, b.n, b.mean_bias,
                      b.stddev);
        out += buf;
    }
    return out;
}

inline json bias_table_to_json(const std::vector<BiasBin>& bins, BiasDimension dim) {
    json rows = json::array();
    for (const BiasBin& b : bins)
        rows.push_back(json{{"bin", b.bin},
                            {"n", b.n},
                            {"mean_bias_kw", b.mean_bias},
                            {"std_kw", b.stddev}});
    return json{{"dimension", bias_dimension_name(dim)}, {"bins", std::move(rows)}};
}

struct ComparisonRow {
    std::string name;
    double mae_pct_of_baseline = 0.0;
    double rmse_pct_of_baseline = 0.0;
    int rank = 0;  // 1 = lowest RMSE; ties share the lower rank
};

// Relative-to-baseline table. Ranks cover the listed models only; the
// baseline is the denominator, not a contestant.
inline std::vector<ComparisonRow> compare_models(
    const std::vector<std::pair<std::string, MetricsReport>>& reports,
    const MetricsReport& baseline) {
    if (reports.empty()) throw InputError("comparison: no models");
    if (baseline.mae <= 0.0 || baseline.rmse <= 0.0)
        throw InputError("comparison: baseline errors must be positive");
    for (const auto& [name, rep] : reports) {
        if (rep.samples != baseline.samples)
            throw IntegrityError("comparison: model '" + name +
                                 "' evaluated on a different sample count than the baseline");
    }
    std::vector<ComparisonRow> out;
    out.reserve(reports.size());
    for (const auto& [name, rep] : reports) {
        ComparisonRow row;
        row.name = name;
        row.mae_pct_of_baseline = rep.mae / baseline.mae * 100.0;
        row.rmse_pct_of_baseline = rep.rmse / baseline.rmse * 100.0;
        row.rank = 1;
        for (const auto& [other_name, other] : reports) {
            (void)other_name;
            if (other.rmse < rep.rmse) ++row.rank;
        }
        out.push_back(std::move(row));
    }
    return out;
}

// Cross-turbine mean and sample standard deviation of the aggregate metrics,
// one entry per turbine in.
struct TurbineSummary {
    std::size_t turbines = 0;
    double mb_mean = 0.0, mb_std = 0.0;
    double mae_mean = 0.0, mae_std = 0.0;
    double rmse_mean = 0.0, rmse_std = 0.0;
    double nrmse_mean = 0.0, nrmse_std = 0.0;

    json to_json() const {
        return json{{"turbines", turbines},
                    {"mb_kw", {{"mean", mb_mean}, {"std", mb_std}}},
                    {"mae_kw", {{"mean", mae_mean}, {"std", mae_std}}},
                    {"rmse_kw", {{"mean", rmse_mean}, {"std", rmse_std}}},
                    {"nrmse_pct", {{"mean", nrmse_mean}, {"std", nrmse_std}}}};
    }
};

inline TurbineSummary summarize_turbines(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) throw InputError("summary: no turbine reports");
    const auto stats = [&](auto field) {
        double mean = 0.0;
        for (const auto& r : reports) mean += field(r);
        mean /= static_cast<double>(reports.size());
        double var = 0.0;
        if (reports.size() > 1) {
            for (const auto& r : reports) {
                const double d = field(r) - mean;
                var += d * d;
            }
            var /= static_cast<double>(reports.size() - 1);
        }
        return std::pair<double, double>{mean, std::sqrt(var)};
    };
    TurbineSummary s;
    s.turbines = reports.size();
    std::tie(s.mb_mean, s.mb_std) = stats([](const MetricsReport& r) { return r.mb; });
    std::tie(s.mae_mean, s.mae_std) = stats([](const MetricsReport& r) { return r.mae; });
    std::tie(s.rmse_mean, s.rmse_std) = stats([](const MetricsReport& r) { return r.rmse; });
    std::tie(s.nrmse_mean, s.nrmse_std) =
        stats([](const MetricsReport& r) { return r.nrmse_pct; });
    return s;
}

}  // namespace windcast::eval
