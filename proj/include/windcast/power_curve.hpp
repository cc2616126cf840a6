#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "windcast/common.hpp"

namespace windcast {

// Monotone wind-speed -> power lookup. Serves both as the uncorrected
// baseline forecaster and as ground truth inside the synthetic generator.
struct PowerCurve {
    std::vector<double> knot_ws;     // m/s, strictly increasing
    std::vector<double> knot_power;  // kW, non-decreasing
    double capacity_kw = 0.0;
    double cutout_ms = 25.0;  // at/above this the turbine is shut down -> 0 kW

    void validate() const {
        if (knot_ws.size() < 2 || knot_ws.size() != knot_power.size())
            throw ConfigError("power curve needs >= 2 matching knots");
        if (capacity_kw <= 0.0) throw ConfigError("power curve capacity must be > 0");
        for (std::size_t i = 0; i < knot_ws.size(); ++i) {
            if (!std::isfinite(knot_ws[i]) || !std::isfinite(knot_power[i]))
                throw ConfigError("power curve knot not finite");
            if (knot_power[i] < 0.0 || knot_power[i] > capacity_kw)
                throw ConfigError("power curve knot power outside [0, capacity]");
            if (i > 0) {
                if (knot_ws[i] <= knot_ws[i - 1])
                    throw ConfigError("power curve knot wind speeds must be strictly increasing");
                if (knot_power[i] < knot_power[i - 1])
                    throw ConfigError("power curve must be monotone non-decreasing");
            }
        }
    }

    // Linear interpolation between knots, clamped to [0, capacity].
    // Negative wind speed is a caller bug, not a data condition.
    double operator()(double ws) const {
        if (!(ws >= 0.0)) throw InputError("wind speed must be >= 0");
        if (ws >= cutout_ms) return 0.0;
        if (ws <= knot_ws.front()) return std::clamp(knot_power.front(), 0.0, capacity_kw);
        if (ws >= knot_ws.back()) return std::clamp(knot_power.back(), 0.0, capacity_kw);
        const auto it = std::upper_bound(knot_ws.begin(), knot_ws.end(), ws);
        const std::size_t hi = static_cast<std::size_t>(it - knot_ws.begin());
        const std::size_t lo = hi - 1;
        const double f = (ws - knot_ws[lo]) / (knot_ws[hi] - knot_ws[lo]);
        const double p = knot_power[lo] + f * (knot_power[hi] - knot_power[lo]);
        return std::clamp(p, 0.0, capacity_kw);
    }
};

inline double true_power(double ws, const PowerCurve& curve) { return curve(ws); }

// Synthetic stand-in for a manufacturer curve: zero below cut-in, a smooth
// cubic ramp (3u^2 - 2u^3) from cut-in to rated, flat at capacity up to
// cut-out. Knots every 0.5 m/s; evaluation interpolates linearly between
// them like any tabulated curve.
inline PowerCurve default_power_curve(double capacity_kw = 2100.0, double cutin_ms = 3.0,
                                      double rated_ms = 12.0, double cutout_ms = 25.0) {
    if (capacity_kw <= 0.0) throw ConfigError("capacity must be > 0");
    if (!(0.0 <= cutin_ms && cutin_ms < rated_ms && rated_ms < cutout_ms))
        throw ConfigError("need 0 <= cut-in < rated < cut-out");
    PowerCurve c;
    c.capacity_kw = capacity_kw;
    c.cutout_ms = cutout_ms;
    for (double ws = 0.0; ws <= cutout_ms + 1e-9; ws += 0.5) {
        double p = 0.0;
        if (ws >= rated_ms) {
            p = capacity_kw;
        } else if (ws > cutin_ms) {
            const double u = (ws - cutin_ms) / (rated_ms - cutin_ms);
            p = capacity_kw * (3.0 * u * u - 2.0 * u * u * u);
        }
        c.knot_ws.push_back(ws);
        c.knot_power.push_back(p);
    }
    return c;
}

}  // namespace windcast
