#pragma once

#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"
#include "windcast/common.hpp"
#include "windcast/ingest.hpp"
#include "windcast/power_curve.hpp"
#include "windcast/rng.hpp"
#include "windcast/timeutil.hpp"

namespace windcast::datagen {

// Desk-scale stand-in for a real wind farm: SCADA series per turbine plus a
// shared NWP forecast series with configurable injected forecast biases.
struct FarmConfig {
    int n_turbines = 2;
    TimePoint start_time = make_time(2020, 1, 1);
    int duration_days = 30;
    int nwp_interval_minutes = 15;
    int nwp_reissue_hours = 6;
    int nwp_lead_hours = 72;
    int scada_interval_minutes = 10;
    double hub_height_m = 114.0;
    double nwp_ref_height_m = 80.0;
    double capacity_kw = 2100.0;
    double local_tz_offset_hours = 0.0;  // local clock used by the diurnal bias term
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (n_turbines < 1) throw ConfigError("n_turbines must be >= 1");
        if (duration_days < 1) throw ConfigError("duration_days must be >= 1");
        if (!(hub_height_m > 1.0) || !(nwp_ref_height_m > 1.0))
            throw ConfigError("heights must be > 1 m (log adjustment)");
        if (capacity_kw <= 0.0) throw ConfigError("capacity_kw must be > 0");
        if (nwp_interval_minutes < 1 || nwp_interval_minutes > 60)
            throw ConfigError("nwp_interval_minutes must be in [1, 60]");
        if (scada_interval_minutes < 1 || scada_interval_minutes > 60)
            throw ConfigError("scada_interval_minutes must be in [1, 60]");
        if (nwp_reissue_hours < 1 || nwp_reissue_hours > 24)
            throw ConfigError("nwp_reissue_hours must be in [1, 24]");
        if (nwp_lead_hours < 49 || nwp_lead_hours > 72)
            throw ConfigError("nwp_lead_hours must be in [49, 72]");
    }
};

// Systematic NWP wind-speed errors injected at the NWP reference height:
// day/night over- and underestimation, a seasonal term, a per-turbine true
// wind offset (so each turbine sees a different apparent bias), and
// unbiased forecast noise.
struct BiasProfile {
    double diurnal_amplitude_ms = 0.0;
    double seasonal_amplitude_ms = 0.0;
    double per_turbine_offset_std_ms = 0.0;
    double noise_std_ms = 0.0;

    void validate() const {
        for (double v : {diurnal_amplitude_ms, seasonal_amplitude_ms, per_turbine_offset_std_ms,
                         noise_std_ms}) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("bias amplitudes must be >= 0");
        }
    }
};

// Positive 06-18 local (peak at noon), negative at night.
inline double injected_diurnal_bias(const BiasProfile& bias, double local_hour) {
    return bias.diurnal_amplitude_ms * std::sin(2.0 * M_PI * (local_hour - 6.0) / 24.0);
}

// Positive in June-August (peak mid July, doy 196), negative in winter.
inline double injected_seasonal_bias(const BiasProfile& bias, double doy) {
    return bias.seasonal_amplitude_ms * std::cos(2.0 * M_PI * (doy - 196.0) / 365.25);
}

// Ground-truth hub-height wind: mean + seasonal sinusoid + diurnal sinusoid
// + AR(1) fluctuation. The values below are only a plausible default; tests
// zero the AR term to get closed-form conditional means.
struct WindProcessParams {
    double mean_ms = 7.5;
    double seasonal_amp_ms = 1.5;
    double seasonal_peak_doy = 15.0;  // winter winds stronger
    double diurnal_amp_ms = 0.8;
    double diurnal_peak_hour = 15.0;
    double ar_tau_minutes = 240.0;  // AR(1) decorrelation time
    double ar_std_ms = 1.6;         // stationary standard deviation
};

struct SyntheticDataset {
    FarmConfig config;
    BiasProfile truth_bias;
    PowerCurve truth_curve;
    std::vector<std::string> turbine_ids;
    std::vector<std::vector<ingest::ScadaRecord>> scada;  // indexed like turbine_ids
    std::vector<ingest::NwpRecord> nwp;                   // one shared NWP location
};

namespace detail {

struct WindGrid {
    TimePoint start = 0;
    std::int64_t step_seconds = 0;
    std::vector<double> wind_ms;  // hub height, farm level

    double at(TimePoint t) const {
        const std::int64_t idx = (t - start) / step_seconds;
        return wind_ms.at(static_cast<std::size_t>(idx));
    }
};

inline double wrap_degrees(double d) {
    d = std::fmod(d, 360.0);
    if (d < 0.0) d += 360.0;
    return d;
}

// Plausible ambient temperature, deg C; feeds both SCADA and NWP channels.
inline double ambient_temp(TimePoint t, double tz_offset_hours) {
    const TimePoint local = shift_to_local(t, tz_offset_hours);
    const double doy = static_cast<double>(day_of_year(local));
    const double hour = hour_of_day(local);
    return 8.0 + 9.0 * std::cos(2.0 * M_PI * (doy - 196.0) / 365.25) +
           3.5 * std::sin(2.0 * M_PI * (hour - 15.0) / 24.0);
}

inline double ambient_dir(TimePoint t) {
    const double days = static_cast<double>(t) / kSecondsPerDay;
    return wrap_degrees(235.0 + 45.0 * std::sin(2.0 * M_PI * days / 11.0) +
                        20.0 * std::sin(2.0 * M_PI * days / 2.3));
}

inline double solar_radiance(TimePoint t, double tz_offset_hours) {
    const TimePoint local = shift_to_local(t, tz_offset_hours);
    const double hour = hour_of_day(local);
    const double doy = static_cast<double>(day_of_year(local));
    const double season = 0.65 + 0.35 * std::cos(2.0 * M_PI * (doy - 172.0) / 365.25);
    const double elevation = std::sin(M_PI * (hour - 6.0) / 12.0);
    return elevation > 0.0 ? 820.0 * season * elevation : 0.0;
}

}  // namespace detail

inline SyntheticDataset generate_farm(const FarmConfig& config, const BiasProfile& bias,
                                      const WindProcessParams& wind = WindProcessParams{}) {
    config.validate();
    bias.validate();

    const std::int64_t step_min =
        std::gcd(std::gcd(static_cast<std::int64_t>(config.scada_interval_minutes),
                          static_cast<std::int64_t>(config.nwp_interval_minutes)),
                 std::int64_t{60});
    const std::int64_t step_s = step_min * kSecondsPerMinute;
    const TimePoint scada_end = config.start_time + config.duration_days * kSecondsPerDay;

    // Last issuance strictly before the SCADA end; its lead window extends
    // the wind grid past the measured period.
    const std::int64_t reissue_s = config.nwp_reissue_hours * kSecondsPerHour;
    const std::int64_t n_issuances = (scada_end - config.start_time + reissue_s - 1) / reissue_s;
    const TimePoint grid_end = config.start_time + (n_issuances - 1) * reissue_s +
                               config.nwp_lead_hours * kSecondsPerHour;

    // Farm-level true wind at hub height on the common grid.
    detail::WindGrid grid;
    grid.start = config.start_time;
    grid.step_seconds = step_s;
    const std::size_t n_steps = static_cast<std::size_t>((grid_end - config.start_time) / step_s) + 1;
    grid.wind_ms.resize(n_steps);
    {
        Rng ar_rng(derive_seed(config.rng_seed, 0));
        const double phi = std::exp(-static_cast<double>(step_min) / wind.ar_tau_minutes);
        const double inno_std = wind.ar_std_ms * std::sqrt(std::max(0.0, 1.0 - phi * phi));
        double ar = wind.ar_std_ms > 0.0 ? ar_rng.normal(0.0, wind.ar_std_ms) : 0.0;
        for (std::size_t i = 0; i < n_steps; ++i) {
            const TimePoint t = config.start_time + static_cast<std::int64_t>(i) * step_s;
            const TimePoint local = shift_to_local(t, config.local_tz_offset_hours);
            const double doy = static_cast<double>(day_of_year(local));
            const double hour = hour_of_day(local);
            const double seasonal =
                wind.seasonal_amp_ms *
                std::cos(2.0 * M_PI * (doy - wind.seasonal_peak_doy) / 365.25);
            const double diurnal =
                wind.diurnal_amp_ms *
                std::cos(2.0 * M_PI * (hour - wind.diurnal_peak_hour) / 24.0);
            grid.wind_ms[i] = std::max(0.0, wind.mean_ms + seasonal + diurnal + ar);
            if (i + 1 < n_steps && wind.ar_std_ms > 0.0)
                ar = phi * ar + ar_rng.normal(0.0, inno_std);
        }
    }

    SyntheticDataset ds;
    ds.config = config;
    ds.truth_bias = bias;
    ds.truth_curve = default_power_curve(config.capacity_kw);

    // Per-turbine true-wind offsets: the NWP location is shared, so these
    // offsets are what makes the apparent bias differ across turbines.
    std::vector<double> turbine_offset(static_cast<std::size_t>(config.n_turbines), 0.0);
    {
        Rng trng(derive_seed(config.rng_seed, 1));
        for (auto& off : turbine_offset)
            off = bias.per_turbine_offset_std_ms > 0.0
                      ? trng.normal(0.0, bias.per_turbine_offset_std_ms)
                      : 0.0;
    }

    ds.turbine_ids.reserve(static_cast<std::size_t>(config.n_turbines));
    ds.scada.resize(static_cast<std::size_t>(config.n_turbines));
    for (int j = 0; j < config.n_turbines; ++j) {
        char idbuf[16];
        std::snprintf(idbuf, sizeof(idbuf), "wt%03d", j + 1);
        ds.turbine_ids.emplace_back(idbuf);

        Rng srng(derive_seed(config.rng_seed, 100 + static_cast<std::uint64_t>(j)));
        auto& series = ds.scada[static_cast<std::size_t>(j)];
        const std::int64_t scada_step = config.scada_interval_minutes * kSecondsPerMinute;
        for (TimePoint t = config.start_time; t < scada_end; t += scada_step) {
            const double ws = std::max(0.0, grid.at(t) + turbine_offset[static_cast<std::size_t>(j)]);
            ingest::ScadaRecord rec;
            rec.turbine_id = ds.turbine_ids.back();
            rec.timestamp = t;
            rec.wind_speed_ms = ws;
            rec.power_kw = ds.truth_curve(ws);
            rec.wind_dir_deg = detail::wrap_degrees(detail::ambient_dir(t) + srng.normal(0.0, 6.0));
            rec.nacelle_dir_deg = detail::wrap_degrees(rec.wind_dir_deg + srng.normal(0.0, 3.0));
            rec.temp_c = detail::ambient_temp(t, config.local_tz_offset_hours) + srng.normal(0.0, 0.4);
            series.push_back(std::move(rec));
        }
    }

    // NWP wind is the farm-level truth taken down to the NWP reference
    // height, plus the injected bias terms and turbine-independent noise.
    const double to_ref = std::log(config.nwp_ref_height_m) / std::log(config.hub_height_m);
    Rng nrng(derive_seed(config.rng_seed, 2));
    const std::int64_t lead_step_s = config.nwp_interval_minutes * kSecondsPerMinute;
    const std::int64_t lead_max_s = config.nwp_lead_hours * kSecondsPerHour;
    for (std::int64_t k = 0; k < n_issuances; ++k) {
        const TimePoint issue = config.start_time + k * reissue_s;
        for (std::int64_t off = 0; off <= lead_max_s; off += lead_step_s) {
            const TimePoint valid = issue + off;
            const TimePoint local = shift_to_local(valid, config.local_tz_offset_hours);
            const double ref_true = grid.at(valid) * to_ref;
            const double injected =
                injected_diurnal_bias(bias, hour_of_day(local)) +
                injected_seasonal_bias(bias, static_cast<double>(day_of_year(local)));
            const double noise = bias.noise_std_ms > 0.0 ? nrng.normal(0.0, bias.noise_std_ms) : 0.0;

            ingest::NwpRecord rec;
            rec.issue_time = issue;
            rec.valid_time = valid;
            rec.lead_minutes = off / kSecondsPerMinute;
            rec.wind_speed_ms = std::max(0.0, ref_true + injected + noise);
            rec.wind_gust_ms = rec.wind_speed_ms * 1.3 + std::abs(nrng.normal(0.0, 0.4));
            rec.temp_c = detail::ambient_temp(valid, config.local_tz_offset_hours) +
                         nrng.normal(0.0, 0.7);
            rec.wind_dir_deg = detail::wrap_degrees(detail::ambient_dir(valid) + nrng.normal(0.0, 12.0));
            rec.radiance_wm2 = std::max(
                0.0, detail::solar_radiance(valid, config.local_tz_offset_hours) *
                         (1.0 + 0.08 * nrng.normal(0.0, 1.0)));
            rec.precip_mm = nrng.uniform01() < 0.04 ? 0.2 + 2.5 * nrng.uniform01() : 0.0;
            ds.nwp.push_back(std::move(rec));
        }
    }
    return ds;
}

inline nlohmann::json farm_config_to_json(const FarmConfig& c) {
    return nlohmann::json{{"n_turbines", c.n_turbines},
                          {"start_time", format_iso8601(c.start_time)},
                          {"duration_days", c.duration_days},
                          {"nwp_interval_minutes", c.nwp_interval_minutes},
                          {"nwp_reissue_hours", c.nwp_reissue_hours},
                          {"nwp_lead_hours", c.nwp_lead_hours},
                          {"scada_interval_minutes", c.scada_interval_minutes},
                          {"hub_height_m", c.hub_height_m},
                          {"nwp_ref_height_m", c.nwp_ref_height_m},
                          {"capacity_kw", c.capacity_kw},
                          {"local_tz_offset_hours", c.local_tz_offset_hours},
                          {"rng_seed", c.rng_seed}};
}

inline FarmConfig farm_config_from_json(const nlohmann::json& j) {
    FarmConfig c;
    c.n_turbines = j.value("n_turbines", c.n_turbines);
    if (j.contains("start_time")) c.start_time = parse_iso8601(j.at("start_time").get<std::string>());
    c.duration_days = j.value("duration_days", c.duration_days);
    c.nwp_interval_minutes = j.value("nwp_interval_minutes", c.nwp_interval_minutes);
    c.nwp_reissue_hours = j.value("nwp_reissue_hours", c.nwp_reissue_hours);
    c.nwp_lead_hours = j.value("nwp_lead_hours", c.nwp_lead_hours);
    c.scada_interval_minutes = j.value("scada_interval_minutes", c.scada_interval_minutes);
    c.hub_height_m = j.value("hub_height_m", c.hub_height_m);
    c.nwp_ref_height_m = j.value("nwp_ref_height_m", c.nwp_ref_height_m);
    c.capacity_kw = j.value("capacity_kw", c.capacity_kw);
    c.local_tz_offset_hours = j.value("local_tz_offset_hours", c.local_tz_offset_hours);
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    return c;
}

inline nlohmann::json wind_process_to_json(const WindProcessParams& w) {
    return nlohmann::json{{"mean_ms", w.mean_ms},
                          {"seasonal_amp_ms", w.seasonal_amp_ms},
                          {"seasonal_peak_doy", w.seasonal_peak_doy},
                          {"diurnal_amp_ms", w.diurnal_amp_ms},
                          {"diurnal_peak_hour", w.diurnal_peak_hour},
                          {"ar_tau_minutes", w.ar_tau_minutes},
                          {"ar_std_ms", w.ar_std_ms}};
}

inline WindProcessParams wind_process_from_json(const nlohmann::json& j) {
    WindProcessParams w;
    w.mean_ms = j.value("mean_ms", w.mean_ms);
    w.seasonal_amp_ms = j.value("seasonal_amp_ms", w.seasonal_amp_ms);
    w.seasonal_peak_doy = j.value("seasonal_peak_doy", w.seasonal_peak_doy);
    w.diurnal_amp_ms = j.value("diurnal_amp_ms", w.diurnal_amp_ms);
    w.diurnal_peak_hour = j.value("diurnal_peak_hour", w.diurnal_peak_hour);
    w.ar_tau_minutes = j.value("ar_tau_minutes", w.ar_tau_minutes);
    w.ar_std_ms = j.value("ar_std_ms", w.ar_std_ms);
    return w;
}

inline nlohmann::json bias_profile_to_json(const BiasProfile& b) {
    return nlohmann::json{{"diurnal_amplitude_ms", b.diurnal_amplitude_ms},
                          {"seasonal_amplitude_ms", b.seasonal_amplitude_ms},
                          {"per_turbine_offset_std_ms", b.per_turbine_offset_std_ms},
                          {"noise_std_ms", b.noise_std_ms}};
}

inline BiasProfile bias_profile_from_json(const nlohmann::json& j) {
    BiasProfile b;
    b.diurnal_amplitude_ms = j.value("diurnal_amplitude_ms", 0.0);
    b.seasonal_amplitude_ms = j.value("seasonal_amplitude_ms", 0.0);
    b.per_turbine_offset_std_ms = j.value("per_turbine_offset_std_ms", 0.0);
    b.noise_std_ms = j.value("noise_std_ms", 0.0);
    return b;
}

}  // namespace windcast::datagen
