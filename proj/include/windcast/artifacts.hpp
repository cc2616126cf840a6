#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "windcast/common.hpp"
#include "windcast/continual.hpp"
#include "windcast/forecaster.hpp"
#include "windcast/sampler.hpp"

namespace windcast::artifacts {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
    if (!out) throw ConfigError("short write to " + path.string());
}

inline std::uint64_t file_hash(const fs::path& path) {
    const std::string bytes = read_file(path);
    return fnv1a64(std::string_view(bytes));
}

inline json load_json(const fs::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

// --- power curve -------------------------------------------------------------

inline json curve_to_json(const PowerCurve& c) {
    json ws = json::array(), power = json::array();
    for (double v : c.knot_ws) ws.push_back(double_to_hex(v));
    for (double v : c.knot_power) power.push_back(double_to_hex(v));
    return json{{"capacity_kw", double_to_hex(c.capacity_kw)},
                {"cutout_ms", double_to_hex(c.cutout_ms)},
                {"knot_ws", std::move(ws)},
                {"knot_power", std::move(power)}};
}

inline PowerCurve curve_from_json(const json& j) {
    PowerCurve c;
    c.capacity_kw = hex_to_double(j.at("capacity_kw").get<std::string>());
    c.cutout_ms = hex_to_double(j.at("cutout_ms").get<std::string>());
    for (const auto& v : j.at("knot_ws")) c.knot_ws.push_back(hex_to_double(v.get<std::string>()));
    for (const auto& v : j.at("knot_power"))
        c.knot_power.push_back(hex_to_double(v.get<std::string>()));
    c.validate();
    return c;
}

// --- trained model artifacts -------------------------------------------------
//
// model_<turbine>.json carries the config, curve, normalizer and integrity
// hashes; neural parameter and buffer blobs live in params_<turbine>.bin.

inline std::string model_json_name(const std::string& turbine) {
    return "model_" + turbine + ".json";
}
inline std::string params_bin_name(const std::string& turbine) {
    return "params_" + turbine + ".bin";
}

inline void save_model(const fs::path& dir, const std::string& turbine,
                       const models::Forecaster& f, const models::ModelConfig& cfg) {
    json j;
    j["version"] = kVersion;
    j["kind"] = models::kind_name(f.kind);
    j["turbine"] = turbine;
    j["config"] = cfg.to_json();
    j["curve"] = curve_to_json(f.curve);
    if (f.kind != models::ModelKind::baseline) {
        j["normalizer"] = f.normalizer.to_json();
        j["normalizer_hash"] = hex64(f.normalizer.hash());
    }
    if (f.kind == models::ModelKind::gb) j["gb_model"] = gbdt::ensemble_to_json(f.gb);
    if (models::is_neural(f.kind)) {
        if (!f.net) throw IntegrityError("save: neural model has no network");
        std::ostringstream blob;
        nnet::Network::write_blob(blob, f.net->params());
        nnet::Network::write_blob(blob, f.net->buffers());
        const std::string bytes = blob.str();
        write_file(dir / params_bin_name(turbine), bytes);
        j["params_file"] = params_bin_name(turbine);
        j["params_count"] = f.net->param_count();
        j["buffers_count"] = f.net->buffer_count();
        j["params_hash"] = hex64(fnv1a64(std::string_view(bytes)));
        j["segments"] = f.net->segment_index_json();
        json hist;
        hist["epochs"] = f.train_history.history.size();
        hist["best_epoch"] = f.train_history.best_epoch;
        hist["best_val_loss"] = double_to_hex(f.train_history.best_val_loss);
        j["train"] = std::move(hist);
    }
    write_file(dir / model_json_name(turbine), j.dump(2) + "\n");
}

inline models::Forecaster load_model(const fs::path& dir, const std::string& turbine) {
    const fs::path jpath = dir / model_json_name(turbine);
    const json j = load_json(jpath);
    models::Forecaster f;
    try {
        f.kind = models::parse_kind(j.at("kind").get<std::string>());
        f.curve = curve_from_json(j.at("curve"));
        if (f.kind != models::ModelKind::baseline) {
            f.normalizer = ingest::Normalizer::from_json(j.at("normalizer"));
            const std::string recorded = j.at("normalizer_hash").get<std::string>();
            if (hex64(f.normalizer.hash()) != recorded)
                throw IntegrityError("normalizer hash mismatch in " + jpath.string());
        }
        if (f.kind == models::ModelKind::gb)
            f.gb = gbdt::ensemble_from_json(j.at("gb_model"));
        if (models::is_neural(f.kind)) {
            const models::ModelConfig cfg = models::ModelConfig::from_json(j.at("config"));
            f.spec = cfg.spec;
            f.net = std::make_unique<nnet::Network>(f.spec);
            const fs::path bin = dir / j.at("params_file").get<std::string>();
            const std::string bytes = read_file(bin);
            if (hex64(fnv1a64(std::string_view(bytes))) != j.at("params_hash").get<std::string>())
                throw IntegrityError("parameter blob hash mismatch for " + bin.string());
            const auto pcount = j.at("params_count").get<std::size_t>();
            const auto bcount = j.at("buffers_count").get<std::size_t>();
            if (pcount != f.net->param_count() || bcount != f.net->buffer_count())
                throw IntegrityError("parameter count mismatch for " + bin.string());
            std::istringstream blob(bytes);
            f.net->params() = nnet::Network::read_blob(blob, pcount);
            f.net->buffers() = nnet::Network::read_blob(blob, bcount);
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed model artifact " + jpath.string() + ": " + e.what());
    }
    return f;
}

inline models::ModelConfig load_model_config(const fs::path& dir, const std::string& turbine) {
    const json j = load_json(dir / model_json_name(turbine));
    try {
        return models::ModelConfig::from_json(j.at("config"));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed model artifact in " + dir.string() + ": " + e.what());
    }
}

// --- prepared datasets ---------------------------------------------------------
//
// A prepared directory holds one samples_<turbine>.csv per turbine plus
// dataset.json with the turbine list, the shared day assignment, the
// normalizer (train rows only) and the local clock offset.

struct PreparedDataset {
    std::vector<std::string> turbine_ids;
    std::map<std::string, std::vector<sampler::ForecastSample>> samples;
    sampler::DayAssignment assignment;
    ingest::Normalizer normalizer;
    double tz_offset_hours = 0.0;
};

inline std::string samples_csv_name(const std::string& turbine) {
    return "samples_" + turbine + ".csv";
}

inline void save_prepared(const fs::path& dir, const PreparedDataset& d) {
    json j;
    j["version"] = kVersion;
    j["turbines"] = d.turbine_ids;
    j["tz_offset_hours"] = d.tz_offset_hours;
    j["normalizer"] = d.normalizer.to_json();
    j["normalizer_hash"] = hex64(d.normalizer.hash());
    j["assignment"] = sampler::assignment_to_json(d.assignment);
    write_file(dir / "dataset.json", j.dump(2) + "\n");
    for (const auto& id : d.turbine_ids) {
        std::ostringstream os;
        sampler::write_samples_csv(os, d.samples.at(id));
        write_file(dir / samples_csv_name(id), os.str());
    }
}

inline PreparedDataset load_prepared(const fs::path& dir) {
    const json j = load_json(dir / "dataset.json");
    PreparedDataset d;
    try {
        d.turbine_ids = j.at("turbines").get<std::vector<std::string>>();
        d.tz_offset_hours = j.value("tz_offset_hours", 0.0);
        d.normalizer = ingest::Normalizer::from_json(j.at("normalizer"));
        if (hex64(d.normalizer.hash()) != j.at("normalizer_hash").get<std::string>())
            throw IntegrityError("normalizer hash mismatch in " + dir.string());
        d.assignment = sampler::assignment_from_json(j.at("assignment"));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed dataset.json in " + dir.string() + ": " + e.what());
    }
    for (const auto& id : d.turbine_ids) {
        std::istringstream is(read_file(dir / samples_csv_name(id)));
        d.samples[id] = sampler::read_samples_csv(is);
    }
    return d;
}

inline sampler::DatasetSplit split_with(const std::vector<sampler::ForecastSample>& samples,
                                        const sampler::DayAssignment& assignment) {
    sampler::DatasetSplit out;
    out.assignment = assignment;
    sampler::apply_assignment(samples, assignment, out);
    return out;
}

inline std::vector<sampler::ForecastSample> select(
    const std::vector<sampler::ForecastSample>& samples, const std::vector<std::size_t>& idx) {
    std::vector<sampler::ForecastSample> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(samples[i]);
    return out;
}

// --- run manifests -------------------------------------------------------------
//
// Every command writes exactly one manifest.json into its output directory.
// Manifests carry no wall-clock time, so a rerun with equal seeds is
// byte-identical; the covered data range stands in for a timestamp.

struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    json config;                                  // resolved configuration
    std::map<std::string, std::string> inputs;    // name -> content hash
    std::map<std::string, std::string> outputs;   // file -> content hash
    json notes;                                   // command-specific extras

    json to_json() const {
        json j;
        j["command"] = command;
        j["version"] = kVersion;
        j["seed"] = seed;
        j["config"] = config.is_null() ? json::object() : config;
        j["config_hash"] = hex64(fnv1a64(j["config"].dump()));
        j["inputs"] = inputs;
        j["outputs"] = outputs;
        if (!notes.is_null()) j["notes"] = notes;
        return j;
    }
};

inline void write_manifest(const fs::path& dir, RunManifest& m,
                           const std::vector<std::string>& output_files) {
    for (const auto& name : output_files) m.outputs[name] = hex64(file_hash(dir / name));
    write_file(dir / "manifest.json", m.to_json().dump(2) + "\n");
}

}  // namespace windcast::artifacts
