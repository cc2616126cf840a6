#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "windcast/common.hpp"
#include "windcast/ingest.hpp"
#include "windcast/timeutil.hpp"

namespace windcast::ingest {

inline constexpr std::size_t kNumFeatures = 10;

// Column order of every feature matrix in the toolkit.
inline constexpr std::array<const char*, kNumFeatures> kFeatureNames = {
    "nwp_ws_adj", "nwp_gust", "nwp_temp", "nwp_dir_sin", "nwp_dir_cos",
    "hour_sin",   "hour_cos", "doy_sin",  "doy_cos",     "lead_time"};

using FeatureVector = std::array<double, kNumFeatures>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// ws_hub = ws_nwp * log(h_hub) / log(h_nwp). The base cancels; natural log.
// Heights <= 1 m make the ratio meaningless (log <= 0), hence the guard.
inline double adjust_hub_height(double ws, double h_nwp, double h_hub) {
    if (!(h_nwp > 1.0) || !(h_hub > 1.0))
        throw InputError("hub-height adjustment requires heights > 1 m");
    if (!(ws >= 0.0)) throw InputError("wind speed must be >= 0");
    return ws * std::log(h_hub) / std::log(h_nwp);
}

// Pre-normalization feature encoding for one hourly timestep.
//   - direction: degrees -> (sin, cos) on the unit circle
//   - hour of day: 2*pi * (local hour + minute fraction) / 24
//   - day of year: 2*pi * (doy - 1) / 365.25, leap years stay continuous
//   - lead time passed through in hours
inline FeatureVector encode_features(const NwpRecord& rec, double hub_adjusted_ws,
                                     double local_tz_offset_hours) {
    const TimePoint local = shift_to_local(rec.valid_time, local_tz_offset_hours);
    const double theta_dir = rec.wind_dir_deg * kPi / 180.0;
    const double theta_hour = kTwoPi * hour_of_day(local) / 24.0;
    const double theta_doy = kTwoPi * (static_cast<double>(day_of_year(local)) - 1.0) / 365.25;
    return FeatureVector{hub_adjusted_ws,
                         rec.wind_gust_ms,
                         rec.temp_c,
                         std::sin(theta_dir),
                         std::cos(theta_dir),
                         std::sin(theta_hour),
                         std::cos(theta_hour),
                         std::sin(theta_doy),
                         std::cos(theta_doy),
                         static_cast<double>(rec.lead_minutes) / 60.0};
}

// Per-feature min/max scaler plus the fixed power scale (0, capacity).
// Fit on training rows only; at apply time out-of-range values saturate so
// model inputs stay inside the trained [0,1] envelope.
class Normalizer {
public:
    Normalizer() = default;

    static Normalizer fit(const std::vector<FeatureVector>& train_rows, double capacity_kw) {
        if (train_rows.empty()) throw InputError("normalizer fit: empty training set");
        if (capacity_kw <= 0.0) throw ConfigError("normalizer fit: capacity must be > 0");
        Normalizer n;
        n.capacity_kw_ = capacity_kw;
        n.mins_.fill(std::numeric_limits<double>::infinity());
        n.maxs_.fill(-std::numeric_limits<double>::infinity());
        for (const auto& row : train_rows) {
            for (std::size_t i = 0; i < kNumFeatures; ++i) {
                if (!std::isfinite(row[i])) throw InputError("normalizer fit: non-finite feature");
                n.mins_[i] = std::min(n.mins_[i], row[i]);
                n.maxs_[i] = std::max(n.maxs_[i], row[i]);
            }
        }
        n.fitted_ = true;
        return n;
    }

    bool fitted() const { return fitted_; }
    double capacity_kw() const { return capacity_kw_; }
    double feature_min(std::size_t i) const { return mins_.at(i); }
    double feature_max(std::size_t i) const { return maxs_.at(i); }

    double apply_feature(std::size_t i, double x) const {
        require_fitted();
        const double span = maxs_[i] - mins_[i];
        if (span == 0.0) return 0.5;  // degenerate feature: constant in training
        return std::clamp((x - mins_[i]) / span, 0.0, 1.0);
    }

    // Inverse of apply_feature for in-range values. Degenerate features
    // collapse to their constant.
    double invert_feature(std::size_t i, double y) const {
        require_fitted();
        const double span = maxs_[i] - mins_[i];
        if (span == 0.0) return mins_[i];
        return mins_[i] + y * span;
    }

    FeatureVector apply(const FeatureVector& fv) const {
        FeatureVector out;
        for (std::size_t i = 0; i < kNumFeatures; ++i) out[i] = apply_feature(i, fv[i]);
        return out;
    }

    double normalize_power(double kw) const {
        require_fitted();
        return kw / capacity_kw_;
    }

    // Model outputs come back clamped to the physical range.
    double denormalize_power(double y) const {
        require_fitted();
        return std::clamp(y * capacity_kw_, 0.0, capacity_kw_);
    }

    nlohmann::json to_json() const {
        require_fitted();
        nlohmann::json features = nlohmann::json::array();
        for (std::size_t i = 0; i < kNumFeatures; ++i) {
            features.push_back({{"name", kFeatureNames[i]},
                                {"min", mins_[i]},
                                {"max", maxs_[i]},
                                {"min_hex", double_to_hex(mins_[i])},
                                {"max_hex", double_to_hex(maxs_[i])}});
        }
        return nlohmann::json{{"kind", "minmax_normalizer"},
                              {"version", 1},
                              {"capacity_kw", capacity_kw_},
                              {"features", std::move(features)}};
    }

    static Normalizer from_json(const nlohmann::json& j) {
        if (!j.contains("kind") || j.at("kind") != "minmax_normalizer")
            throw IntegrityError("normalizer json: wrong kind");
        Normalizer n;
        n.capacity_kw_ = j.at("capacity_kw").get<double>();
        const auto& features = j.at("features");
        if (features.size() != kNumFeatures)
            throw IntegrityError("normalizer json: wrong feature count");
        for (std::size_t i = 0; i < kNumFeatures; ++i) {
            const auto& f = features.at(i);
            if (f.at("name").get<std::string>() != kFeatureNames[i])
                throw IntegrityError("normalizer json: feature order mismatch");
            n.mins_[i] = hex_to_double(f.at("min_hex").get<std::string>());
            n.maxs_[i] = hex_to_double(f.at("max_hex").get<std::string>());
        }
        n.fitted_ = true;
        return n;
    }

    // Fingerprint of the exact fitted statistics. Models store it so a
    // forecaster cannot silently run with a foreign normalizer.
    std::uint64_t hash() const {
        require_fitted();
        std::uint64_t h = fnv1a64("normalizer");
        h = fnv1a64(mins_.data(), sizeof(double) * kNumFeatures, h);
        h = fnv1a64(maxs_.data(), sizeof(double) * kNumFeatures, h);
        h = fnv1a64(&capacity_kw_, sizeof(double), h);
        return h;
    }

private:
    void require_fitted() const {
        if (!fitted_) throw InputError("normalizer used before fit");
    }

    std::array<double, kNumFeatures> mins_{};
    std::array<double, kNumFeatures> maxs_{};
    double capacity_kw_ = 0.0;
    bool fitted_ = false;
};

inline FeatureVector apply_normalizer(const Normalizer& n, const FeatureVector& fv) {
    return n.apply(fv);
}

inline double denormalize_power(const Normalizer& n, double y) { return n.denormalize_power(y); }

}  // namespace windcast::ingest
