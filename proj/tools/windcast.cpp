#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "windcast/artifacts.hpp"
#include "windcast/continual.hpp"
#include "windcast/datagen.hpp"
#include "windcast/eval.hpp"
#include "windcast/forecaster.hpp"
#include "windcast/ingest.hpp"
#include "windcast/sampler.hpp"
#include "windcast/timeutil.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace wc = windcast;
namespace art = windcast::artifacts;

namespace {

constexpr const char* kDataDirEnv = "WINDCAST_DATA_DIR";

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Directory flags fall back to WINDCAST_DATA_DIR so the common
// generate-then-prepare loop needs no repeated paths.
fs::path resolve_dir(const std::string& flag, const char* flag_name) {
    if (!flag.empty()) return fs::path(flag);
    if (const char* env = std::getenv(kDataDirEnv); env != nullptr && *env != '\0')
        return fs::path(env);
    throw wc::ConfigError(std::string(flag_name) + " not given and " + kDataDirEnv + " is unset");
}

void ensure_outdir(const fs::path& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec)
        throw wc::ConfigError("cannot create output directory " + out.string() + ": " +
                              ec.message());
}

// Config files are part of the invocation: absent or malformed ones are
// configuration mistakes, not missing artifacts or bad data.
json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    try {
        return art::load_json(path);
    } catch (const wc::MissingArtifactError& e) {
        throw wc::ConfigError(e.what());
    } catch (const wc::DataError& e) {
        throw wc::ConfigError(e.what());
    }
}

void add_input(art::RunManifest& m, const std::string& name, const fs::path& p) {
    m.inputs[name] = wc::hex64(art::file_hash(p));
}

void add_prepared_inputs(art::RunManifest& m, const fs::path& dir,
                         const art::PreparedDataset& d) {
    add_input(m, (dir / "dataset.json").string(), dir / "dataset.json");
    for (const auto& id : d.turbine_ids) {
        const std::string name = art::samples_csv_name(id);
        add_input(m, (dir / name).string(), dir / name);
    }
}

void add_model_inputs(art::RunManifest& m, const fs::path& dir, const std::string& turbine) {
    const std::string mj = art::model_json_name(turbine);
    add_input(m, (dir / mj).string(), dir / mj);
    const fs::path bin = dir / art::params_bin_name(turbine);
    if (fs::exists(bin)) add_input(m, bin.string(), bin);
}

json train_config_to_json(const wc::nnet::TrainConfig& c) {
    return json{{"batch_size", c.batch_size},
                {"max_epochs", c.max_epochs},
                {"patience", c.patience},
                {"restore_best", c.restore_best},
                {"learning_rate", c.learning_rate}};
}

void train_config_apply_json(wc::nnet::TrainConfig& c, const json& j) {
    c.batch_size = j.value("batch_size", c.batch_size);
    c.max_epochs = j.value("max_epochs", c.max_epochs);
    c.patience = j.value("patience", c.patience);
    c.restore_best = j.value("restore_best", c.restore_best);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
}

bool curves_equal(const wc::PowerCurve& a, const wc::PowerCurve& b) {
    return a.capacity_kw == b.capacity_kw && a.cutout_ms == b.cutout_ms &&
           a.knot_ws == b.knot_ws && a.knot_power == b.knot_power;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    std::string config;
    std::string out;
    std::string start;
    int turbines = 0;
    int days = 0;
    double capacity = 0.0;
    double diurnal = 0.0;
    double seasonal = 0.0;
    double offset_std = 0.0;
    double noise = 0.0;
    std::uint64_t seed = 0;
    CLI::Option* o_start = nullptr;
    CLI::Option* o_turbines = nullptr;
    CLI::Option* o_days = nullptr;
    CLI::Option* o_capacity = nullptr;
    CLI::Option* o_diurnal = nullptr;
    CLI::Option* o_seasonal = nullptr;
    CLI::Option* o_offset_std = nullptr;
    CLI::Option* o_noise = nullptr;
    CLI::Option* o_seed = nullptr;
};

int cmd_generate(const GenerateArgs& a) {
    const json cfg = load_config_file(a.config);
    wc::datagen::FarmConfig farm;
    wc::datagen::BiasProfile bias;
    wc::datagen::WindProcessParams wind;
    try {
        if (cfg.contains("farm")) farm = wc::datagen::farm_config_from_json(cfg.at("farm"));
        if (cfg.contains("bias")) bias = wc::datagen::bias_profile_from_json(cfg.at("bias"));
        if (cfg.contains("wind")) wind = wc::datagen::wind_process_from_json(cfg.at("wind"));
        if (a.o_turbines->count()) farm.n_turbines = a.turbines;
        if (a.o_days->count()) farm.duration_days = a.days;
        if (a.o_start->count()) farm.start_time = wc::parse_iso8601(a.start);
        if (a.o_capacity->count()) farm.capacity_kw = a.capacity;
        if (a.o_seed->count()) farm.rng_seed = a.seed;
        if (a.o_diurnal->count()) bias.diurnal_amplitude_ms = a.diurnal;
        if (a.o_seasonal->count()) bias.seasonal_amplitude_ms = a.seasonal;
        if (a.o_offset_std->count()) bias.per_turbine_offset_std_ms = a.offset_std;
        if (a.o_noise->count()) bias.noise_std_ms = a.noise;
    } catch (const wc::InputError& e) {
        throw wc::ConfigError(e.what());
    } catch (const nlohmann::json::exception& e) {
        throw wc::ConfigError(std::string("malformed config: ") + e.what());
    }
    // Validate before touching the filesystem so a bad config leaves no files.
    farm.validate();
    bias.validate();
    const fs::path out = resolve_dir(a.out, "--out");

    const auto ds = wc::datagen::generate_farm(farm, bias, wind);
    ensure_outdir(out);
    std::vector<std::string> files;
    for (std::size_t i = 0; i < ds.turbine_ids.size(); ++i) {
        std::ostringstream os;
        wc::ingest::write_scada(os, ds.scada[i]);
        const std::string name = "scada_" + ds.turbine_ids[i] + ".csv";
        art::write_file(out / name, os.str());
        files.push_back(name);
    }
    {
        std::ostringstream os;
        wc::ingest::write_nwp(os, ds.nwp);
        art::write_file(out / "nwp.csv", os.str());
        files.push_back("nwp.csv");
    }

    art::RunManifest m;
    m.command = "generate";
    m.seed = farm.rng_seed;
    m.config = json{{"farm", wc::datagen::farm_config_to_json(farm)},
                    {"bias", wc::datagen::bias_profile_to_json(bias)},
                    {"wind", wc::datagen::wind_process_to_json(wind)}};
    if (!a.config.empty()) add_input(m, a.config, a.config);
    const wc::TimePoint end_time = farm.start_time + farm.duration_days * wc::kSecondsPerDay;
    m.notes = json{{"turbines", ds.turbine_ids},
                   {"time_range", json{{"start", wc::format_iso8601(farm.start_time)},
                                       {"end", wc::format_iso8601(end_time)}}}};
    art::write_manifest(out, m, files);
    std::cout << "generate: " << files.size() << " data files + manifest in " << out.string()
              << "\n";
    return 0;
}

// ----------------------------------------------------------------- prepare

struct PrepareArgs {
    std::string data;
    std::string nwp;
    std::string out;
    std::vector<std::string> scada;
    double capacity = 0.0;
    double hub_height = 0.0;
    double ref_height = 0.0;
    double tz_offset = 0.0;
    int nwp_interval = 0;
    int scada_interval = 0;
    std::uint64_t seed = 0;
    CLI::Option* o_capacity = nullptr;
    CLI::Option* o_hub = nullptr;
    CLI::Option* o_ref = nullptr;
    CLI::Option* o_tz = nullptr;
    CLI::Option* o_nwp_interval = nullptr;
    CLI::Option* o_scada_interval = nullptr;
};

int cmd_prepare(const PrepareArgs& a) {
    if (a.out.empty()) throw wc::ConfigError("--out is required");
    // Input discovery: explicit file lists win; otherwise scan the data dir.
    std::vector<fs::path> scada_files;
    fs::path nwp_file;
    fs::path data_dir;
    bool used_data_dir = false;
    if (!a.scada.empty()) {
        if (a.nwp.empty()) throw wc::ConfigError("--nwp is required when --scada is given");
        for (const auto& s : a.scada) scada_files.emplace_back(s);
        nwp_file = a.nwp;
    } else {
        data_dir = resolve_dir(a.data, "--data");
        used_data_dir = true;
        if (!fs::is_directory(data_dir))
            throw wc::MissingArtifactError("data directory " + data_dir.string() +
                                           " does not exist");
        for (const auto& entry : fs::directory_iterator(data_dir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("scada_", 0) == 0 && name.size() > 10 &&
                name.substr(name.size() - 4) == ".csv")
                scada_files.push_back(entry.path());
        }
        std::sort(scada_files.begin(), scada_files.end());
        if (scada_files.empty())
            throw wc::MissingArtifactError("no scada_*.csv files in " + data_dir.string());
        nwp_file = data_dir / "nwp.csv";
        if (!fs::exists(nwp_file))
            throw wc::MissingArtifactError("missing " + nwp_file.string());
    }

    // Geometry defaults come from the generating manifest when present.
    wc::sampler::SampleBuildContext ctx;
    double capacity = 2100.0;
    if (used_data_dir && fs::exists(data_dir / "manifest.json")) {
        const json gm = art::load_json(data_dir / "manifest.json");
        if (gm.contains("config") && gm.at("config").contains("farm")) {
            const json& f = gm.at("config").at("farm");
            ctx.nwp_ref_height_m = f.value("nwp_ref_height_m", ctx.nwp_ref_height_m);
            ctx.hub_height_m = f.value("hub_height_m", ctx.hub_height_m);
            ctx.local_tz_offset_hours = f.value("local_tz_offset_hours", ctx.local_tz_offset_hours);
            ctx.nwp_interval_minutes = f.value("nwp_interval_minutes", ctx.nwp_interval_minutes);
            ctx.scada_interval_minutes =
                f.value("scada_interval_minutes", ctx.scada_interval_minutes);
            capacity = f.value("capacity_kw", capacity);
        }
    }
    if (a.o_ref->count()) ctx.nwp_ref_height_m = a.ref_height;
    if (a.o_hub->count()) ctx.hub_height_m = a.hub_height;
    if (a.o_tz->count()) ctx.local_tz_offset_hours = a.tz_offset;
    if (a.o_nwp_interval->count()) ctx.nwp_interval_minutes = a.nwp_interval;
    if (a.o_scada_interval->count()) ctx.scada_interval_minutes = a.scada_interval;
    if (a.o_capacity->count()) capacity = a.capacity;
    if (capacity <= 0.0) throw wc::ConfigError("--capacity must be > 0");

    // Parse and regroup by turbine; records may arrive split across files.
    std::map<std::string, std::vector<wc::ingest::ScadaRecord>> by_turbine;
    std::size_t scada_issues = 0;
    for (const auto& p : scada_files) {
        std::istringstream is(art::read_file(p));
        auto parsed = wc::ingest::parse_scada(is);
        scada_issues += parsed.issues.size();
        for (auto& r : parsed.records) by_turbine[r.turbine_id].push_back(std::move(r));
    }
    for (auto& [id, recs] : by_turbine)
        std::stable_sort(recs.begin(), recs.end(),
                         [](const auto& x, const auto& y) { return x.timestamp < y.timestamp; });
    std::istringstream nis(art::read_file(nwp_file));
    auto nwp = wc::ingest::parse_nwp(nis);
    if (scada_issues + nwp.issues.size() > 0)
        std::cerr << "prepare: skipped " << scada_issues << " scada and " << nwp.issues.size()
                  << " nwp malformed rows\n";

    art::PreparedDataset d;
    d.tz_offset_hours = ctx.local_tz_offset_hours;
    std::set<std::string> days;
    for (auto& [id, recs] : by_turbine) {
        auto built = wc::sampler::build_samples(nwp.records, recs, ctx);
        for (const auto& w : built.warnings) std::cerr << "prepare: " << id << ": " << w << "\n";
        if (built.samples.empty())
            throw wc::DataError("turbine " + id +
                                ": no overlapping time range between SCADA and NWP");
        for (const auto& s : built.samples) days.insert(wc::day_key(s.t0));
        d.turbine_ids.push_back(id);
        d.samples[id] = std::move(built.samples);
    }

    // One shared day map and one shared normalizer across the whole farm.
    const auto assignment = wc::sampler::split_days(days, a.seed);
    d.assignment = assignment;
    std::vector<wc::ingest::FeatureVector> train_rows;
    for (const auto& id : d.turbine_ids) {
        const auto split = art::split_with(d.samples[id], assignment);
        for (std::size_t k : split.train)
            for (const auto& row : d.samples[id][k].features) train_rows.push_back(row);
    }
    if (train_rows.empty())
        throw wc::DataError("the day split assigned no training samples to any turbine");
    d.normalizer = wc::ingest::Normalizer::fit(train_rows, capacity);

    const fs::path out(a.out);
    ensure_outdir(out);
    art::save_prepared(out, d);

    art::RunManifest m;
    m.command = "prepare";
    m.seed = a.seed;
    m.config = json{{"capacity_kw", capacity},
                    {"nwp_ref_height_m", ctx.nwp_ref_height_m},
                    {"hub_height_m", ctx.hub_height_m},
                    {"local_tz_offset_hours", ctx.local_tz_offset_hours},
                    {"nwp_interval_minutes", ctx.nwp_interval_minutes},
                    {"scada_interval_minutes", ctx.scada_interval_minutes}};
    for (const auto& p : scada_files) add_input(m, p.string(), p);
    add_input(m, nwp_file.string(), nwp_file);
    json counts = json::object();
    for (const auto& id : d.turbine_ids) counts[id] = d.samples[id].size();
    int train_days = 0, val_days = 0, test_days = 0;
    for (const auto& [day, part] : assignment) {
        (void)day;
        if (part == wc::sampler::Partition::Train) ++train_days;
        else if (part == wc::sampler::Partition::Validation) ++val_days;
        else ++test_days;
    }
    m.notes = json{{"samples_per_turbine", counts},
                   {"days", json{{"train", train_days},
                                 {"validation", val_days},
                                 {"test", test_days}}}};
    std::vector<std::string> files{"dataset.json"};
    for (const auto& id : d.turbine_ids) files.push_back(art::samples_csv_name(id));
    art::write_manifest(out, m, files);
    std::cout << "prepare: " << d.turbine_ids.size() << " turbines, "
              << days.size() << " days in " << out.string() << "\n";
    return 0;
}

// ------------------------------------------------------------------- train

struct TrainArgs {
    std::string prepared;
    std::string config;
    std::string kind;
    std::string out;
    std::uint64_t seed = 0;
    int parallel = 1;
    int max_epochs = 0;
    int batch_size = 0;
    int patience = 0;
    CLI::Option* o_kind = nullptr;
    CLI::Option* o_max_epochs = nullptr;
    CLI::Option* o_batch_size = nullptr;
    CLI::Option* o_patience = nullptr;
};

wc::models::ModelConfig resolve_model_config(const json& cfg, const std::string& kind_flag,
                                             bool kind_given) {
    if (cfg.contains("model")) {
        auto mc = wc::models::ModelConfig::from_json(cfg.at("model"));
        if (kind_given && wc::models::parse_kind(kind_flag) != mc.kind)
            throw wc::ConfigError("--kind conflicts with the config file's model.kind");
        return mc;
    }
    if (!kind_given)
        throw wc::ConfigError("specify --kind or a config file with a model section");
    return wc::models::ModelConfig::defaults(wc::models::parse_kind(kind_flag));
}

int cmd_train(const TrainArgs& a) {
    if (a.prepared.empty()) throw wc::ConfigError("--prepared is required");
    if (a.out.empty()) throw wc::ConfigError("--out is required");
    if (a.parallel < 1) throw wc::ConfigError("--parallel must be >= 1");
    const json cfg = load_config_file(a.config);
    const auto mc = resolve_model_config(cfg, a.kind, a.o_kind->count() > 0);
    wc::nnet::TrainConfig tc;
    if (cfg.contains("train")) train_config_apply_json(tc, cfg.at("train"));
    if (a.o_max_epochs->count()) tc.max_epochs = a.max_epochs;
    if (a.o_batch_size->count()) tc.batch_size = a.batch_size;
    if (a.o_patience->count()) tc.patience = a.patience;
    tc.validate();

    const fs::path pdir(a.prepared);
    const auto prepared = art::load_prepared(pdir);
    const auto curve = wc::default_power_curve(prepared.normalizer.capacity_kw());

    const auto& ids = prepared.turbine_ids;
    std::vector<wc::models::Forecaster> fitted(ids.size());
    std::vector<std::exception_ptr> errors(ids.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= ids.size()) return;
            try {
                const auto& samples = prepared.samples.at(ids[i]);
                const auto split = art::split_with(samples, prepared.assignment);
                wc::models::TrainOptions opts;
                opts.train = tc;
                opts.train.rng_seed = wc::derive_seed(a.seed, i);
                fitted[i] = wc::models::train_forecaster(
                    mc, art::select(samples, split.train), art::select(samples, split.validation),
                    prepared.normalizer, curve, opts);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int workers = std::min<int>(a.parallel, static_cast<int>(ids.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    const fs::path out(a.out);
    ensure_outdir(out);
    std::vector<std::string> files;
    json per_turbine = json::object();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        art::save_model(out, ids[i], fitted[i], mc);
        files.push_back(art::model_json_name(ids[i]));
        if (wc::models::is_neural(mc.kind)) {
            files.push_back(art::params_bin_name(ids[i]));
            per_turbine[ids[i]] =
                json{{"epochs", fitted[i].train_history.history.size()},
                     {"best_epoch", fitted[i].train_history.best_epoch},
                     {"best_val_loss", wc::double_to_hex(fitted[i].train_history.best_val_loss)}};
        }
    }

    // --parallel is an execution knob: keeping it out of the manifest keeps
    // runs with different worker counts byte-identical.
    art::RunManifest m;
    m.command = "train";
    m.seed = a.seed;
    m.config = json{{"model", mc.to_json()}, {"train", train_config_to_json(tc)}};
    if (!a.config.empty()) add_input(m, a.config, a.config);
    add_prepared_inputs(m, pdir, prepared);
    if (!per_turbine.empty()) m.notes = json{{"turbines", per_turbine}};
    art::write_manifest(out, m, files);
    std::cout << "train: " << wc::models::kind_name(mc.kind) << " for " << ids.size()
              << " turbines in " << out.string() << "\n";
    return 0;
}

// ------------------------------------------------------------------ search

struct SearchArgs {
    std::string prepared;
    std::string config;
    std::string space;
    std::string kind;
    std::string turbine;
    std::string out;
    int n_configs = 200;
    std::uint64_t seed = 0;
    int max_epochs = 0;
    int batch_size = 0;
    int patience = 0;
    CLI::Option* o_max_epochs = nullptr;
    CLI::Option* o_batch_size = nullptr;
    CLI::Option* o_patience = nullptr;
};

int cmd_search(const SearchArgs& a) {
    if (a.prepared.empty()) throw wc::ConfigError("--prepared is required");
    if (a.out.empty()) throw wc::ConfigError("--out is required");
    const auto kind = wc::models::parse_kind(a.kind);
    wc::models::SearchSpace space;
    if (!a.space.empty()) {
        try {
            space = wc::models::SearchSpace::from_json(load_config_file(a.space));
        } catch (const nlohmann::json::exception& e) {
            throw wc::ConfigError(std::string("malformed search space: ") + e.what());
        }
    }
    const json cfg = load_config_file(a.config);
    wc::models::TrainOptions base;
    if (cfg.contains("train")) train_config_apply_json(base.train, cfg.at("train"));
    if (a.o_max_epochs->count()) base.train.max_epochs = a.max_epochs;
    if (a.o_batch_size->count()) base.train.batch_size = a.batch_size;
    if (a.o_patience->count()) base.train.patience = a.patience;
    base.train.validate();

    const fs::path pdir(a.prepared);
    const auto prepared = art::load_prepared(pdir);
    if (!prepared.samples.count(a.turbine))
        throw wc::ConfigError("turbine " + a.turbine + " is not in " + a.prepared);
    const auto curve = wc::default_power_curve(prepared.normalizer.capacity_kw());
    const auto& samples = prepared.samples.at(a.turbine);
    const auto split = art::split_with(samples, prepared.assignment);

    const auto result = wc::models::random_search(
        kind, space, art::select(samples, split.train), art::select(samples, split.validation),
        prepared.normalizer, curve, a.n_configs, a.seed, base);

    const fs::path out(a.out);
    ensure_outdir(out);
    art::write_file(out / "search.json",
                    wc::models::search_result_to_json(result).dump(2) + "\n");
    std::string trials = "trial,config_hash,val_rmse,epochs\n";
    for (const auto& t : result.trials)
        trials += std::to_string(t.index) + "," + wc::hex64(t.config_hash) + "," +
                  fmt17(t.val_rmse) + "," + std::to_string(t.epochs) + "\n";
    art::write_file(out / "trials.csv", trials);
    art::write_file(out / "best_config.json", result.best.to_json().dump(2) + "\n");

    art::RunManifest m;
    m.command = "search";
    m.seed = a.seed;
    m.config = json{{"kind", wc::models::kind_name(kind)},
                    {"turbine", a.turbine},
                    {"n_configs", a.n_configs},
                    {"space", space.to_json()},
                    {"train", train_config_to_json(base.train)}};
    if (!a.config.empty()) add_input(m, a.config, a.config);
    if (!a.space.empty()) add_input(m, a.space, a.space);
    add_prepared_inputs(m, pdir, prepared);
    m.notes = json{{"best_index", result.best_index},
                   {"best_val_rmse", wc::double_to_hex(result.best_val_rmse)}};
    art::write_manifest(out, m, {"search.json", "trials.csv", "best_config.json"});
    std::cout << "search: best trial " << result.best_index << " val_rmse "
              << fmt17(result.best_val_rmse) << " in " << out.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::vector<std::string> models;
    std::string prepared;
    std::string out;
    std::uint64_t seed = 0;
};

struct LoadedKind {
    wc::models::ModelKind kind;
    std::map<std::string, wc::models::Forecaster> per_turbine;
};

int cmd_evaluate(const EvaluateArgs& a) {
    if (a.models.empty()) throw wc::ConfigError("--models is required");
    if (a.prepared.empty()) throw wc::ConfigError("--prepared is required");
    if (a.out.empty()) throw wc::ConfigError("--out is required");
    const fs::path pdir(a.prepared);
    const auto prepared = art::load_prepared(pdir);
    const double capacity = prepared.normalizer.capacity_kw();

    art::RunManifest m;
    m.command = "evaluate";
    m.seed = a.seed;
    add_prepared_inputs(m, pdir, prepared);

    // Load every artifact; each model kind may appear only once.
    std::vector<LoadedKind> loaded;
    for (const auto& dir_str : a.models) {
        const fs::path dir(dir_str);
        LoadedKind lk;
        bool first = true;
        for (const auto& id : prepared.turbine_ids) {
            auto f = art::load_model(dir, id);
            add_model_inputs(m, dir, id);
            if (first) {
                lk.kind = f.kind;
                first = false;
            } else if (f.kind != lk.kind) {
                throw wc::IntegrityError("mixed model kinds in " + dir_str);
            }
            lk.per_turbine.emplace(id, std::move(f));
        }
        for (const auto& prev : loaded)
            if (prev.kind == lk.kind)
                throw wc::ConfigError(std::string("model kind ") +
                                      wc::models::kind_name(lk.kind) +
                                      " appears in more than one --models dir");
        loaded.push_back(std::move(lk));
    }
    std::sort(loaded.begin(), loaded.end(), [](const LoadedKind& x, const LoadedKind& y) {
        return static_cast<int>(x.kind) < static_cast<int>(y.kind);
    });

    // All artifacts must describe the same turbine hardware as the dataset.
    const wc::PowerCurve* ref_curve = nullptr;
    for (const auto& lk : loaded) {
        for (const auto& [id, f] : lk.per_turbine) {
            if (ref_curve == nullptr) ref_curve = &f.curve;
            if (!curves_equal(*ref_curve, f.curve))
                throw wc::IntegrityError("model artifacts disagree on the power curve");
            if (f.curve.capacity_kw != capacity)
                throw wc::IntegrityError("model curve capacity differs from the dataset's");
            if (f.kind != wc::models::ModelKind::baseline &&
                f.normalizer.capacity_kw() != capacity)
                throw wc::IntegrityError("model normalizer capacity differs from the dataset's");
        }
    }

    // Shared test tensors, pooled in turbine order.
    std::vector<std::vector<wc::sampler::ForecastSample>> test_sets;
    std::vector<std::vector<std::vector<double>>> truth_sets;
    std::vector<std::vector<double>> pooled_truth;
    std::vector<wc::TimePoint> pooled_t0s;
    for (const auto& id : prepared.turbine_ids) {
        const auto& samples = prepared.samples.at(id);
        const auto split = art::split_with(samples, prepared.assignment);
        auto test = art::select(samples, split.test);
        if (test.empty()) throw wc::DataError("turbine " + id + ": no test samples");
        truth_sets.push_back(wc::models::targets_matrix(test));
        for (const auto& row : truth_sets.back()) pooled_truth.push_back(row);
        for (const auto& s : test) pooled_t0s.push_back(s.t0);
        test_sets.push_back(std::move(test));
    }

    struct KindResult {
        std::string name;
        std::vector<wc::eval::MetricsReport> per_turbine;
        wc::eval::MetricsReport pooled;
        std::vector<std::vector<double>> pooled_preds;
    };
    std::vector<KindResult> results;
    bool have_baseline_artifact = false;
    for (const auto& lk : loaded)
        if (lk.kind == wc::models::ModelKind::baseline) have_baseline_artifact = true;

    const auto evaluate_kind = [&](const std::string& name,
                                   const std::function<std::vector<std::vector<double>>(
                                       std::size_t)>& forecast_turbine) {
        KindResult kr;
        kr.name = name;
        for (std::size_t ti = 0; ti < prepared.turbine_ids.size(); ++ti) {
            auto preds = forecast_turbine(ti);
            kr.per_turbine.push_back(wc::eval::compute_metrics(preds, truth_sets[ti], capacity));
            for (auto& row : preds) kr.pooled_preds.push_back(std::move(row));
        }
        kr.pooled = wc::eval::compute_metrics(kr.pooled_preds, pooled_truth, capacity);
        results.push_back(std::move(kr));
    };

    if (!have_baseline_artifact) {
        if (ref_curve == nullptr) throw wc::ConfigError("no model artifacts loaded");
        const wc::PowerCurve curve = *ref_curve;
        evaluate_kind("baseline", [&](std::size_t ti) {
            std::vector<std::vector<double>> preds;
            preds.reserve(test_sets[ti].size());
            for (const auto& s : test_sets[ti])
                preds.push_back(wc::models::baseline_forecast(s, curve));
            return preds;
        });
    }
    for (const auto& lk : loaded) {
        evaluate_kind(wc::models::kind_name(lk.kind), [&](std::size_t ti) {
            const auto& f = lk.per_turbine.at(prepared.turbine_ids[ti]);
            return wc::models::forecast_many(f, test_sets[ti]);
        });
    }

    const KindResult* baseline = nullptr;
    for (const auto& kr : results)
        if (kr.name == "baseline") baseline = &kr;
    if (baseline == nullptr) throw wc::IntegrityError("no baseline row was produced");

    // metrics.csv: one row per model x turbine plus a pooled "all" row.
    std::string metrics_csv = "model,turbine,samples,mb_kw,mae_kw,rmse_kw,nrmse_pct\n";
    const auto metrics_row = [](const std::string& model, const std::string& turbine,
                                const wc::eval::MetricsReport& r) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%.17g,%.17g,%.17g,%.17g\n", model.c_str(),
                      turbine.c_str(), r.samples, r.mb, r.mae, r.rmse, r.nrmse_pct);
        return std::string(buf);
    };
    for (const auto& kr : results) {
        for (std::size_t ti = 0; ti < prepared.turbine_ids.size(); ++ti)
            metrics_csv += metrics_row(kr.name, prepared.turbine_ids[ti], kr.per_turbine[ti]);
        metrics_csv += metrics_row(kr.name, "all", kr.pooled);
    }

    // summary.csv: cross-turbine mean and spread per model.
    std::string summary_csv =
        "model,turbines,mb_kw_mean,mb_kw_std,mae_kw_mean,mae_kw_std,rmse_kw_mean,rmse_kw_std,"
        "nrmse_pct_mean,nrmse_pct_std\n";
    std::map<std::string, wc::eval::TurbineSummary> summaries;
    for (const auto& kr : results) {
        const auto s = wc::eval::summarize_turbines(kr.per_turbine);
        summaries[kr.name] = s;
        char buf[512];
        std::snprintf(buf, sizeof(buf),
                      "%s,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      kr.name.c_str(), s.turbines, s.mb_mean, s.mb_std, s.mae_mean, s.mae_std,
                      s.rmse_mean, s.rmse_std, s.nrmse_mean, s.nrmse_std);
        summary_csv += buf;
    }

    // relative.csv: trained models against the baseline, pooled errors.
    std::vector<std::pair<std::string, wc::eval::MetricsReport>> contenders;
    for (const auto& kr : results)
        if (kr.name != "baseline") contenders.emplace_back(kr.name, kr.pooled);
    std::string relative_csv;
    std::vector<wc::eval::ComparisonRow> relative;
    if (!contenders.empty()) {
        relative = wc::eval::compare_models(contenders, baseline->pooled);
        relative_csv = "model,mae_pct_of_baseline,rmse_pct_of_baseline,rank\n";
        for (const auto& row : relative) {
            char buf[256];
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%d\n", row.name.c_str(),
                          row.mae_pct_of_baseline, row.rmse_pct_of_baseline, row.rank);
            relative_csv += buf;
        }
    }

    const fs::path out(a.out);
    ensure_outdir(out);
    std::vector<std::string> files;
    art::write_file(out / "metrics.csv", metrics_csv);
    files.push_back("metrics.csv");
    art::write_file(out / "summary.csv", summary_csv);
    files.push_back("summary.csv");
    if (!relative_csv.empty()) {
        art::write_file(out / "relative.csv", relative_csv);
        files.push_back("relative.csv");
    }
    for (const auto& kr : results) {
        const auto hour_bins =
            wc::eval::bias_table(kr.pooled_preds, pooled_truth, pooled_t0s,
                                 wc::eval::BiasDimension::local_hour, prepared.tz_offset_hours);
        const auto month_bins =
            wc::eval::bias_table(kr.pooled_preds, pooled_truth, pooled_t0s,
                                 wc::eval::BiasDimension::month, prepared.tz_offset_hours);
        const std::string hour_name = "bias_hour_" + kr.name + ".csv";
        const std::string month_name = "bias_month_" + kr.name + ".csv";
        art::write_file(out / hour_name,
                        wc::eval::bias_table_csv(hour_bins, wc::eval::BiasDimension::local_hour));
        art::write_file(out / month_name,
                        wc::eval::bias_table_csv(month_bins, wc::eval::BiasDimension::month));
        files.push_back(hour_name);
        files.push_back(month_name);
    }

    json jm;
    jm["capacity_kw"] = capacity;
    jm["turbines"] = prepared.turbine_ids;
    json jmodels = json::object();
    for (const auto& kr : results) {
        json per = json::object();
        for (std::size_t ti = 0; ti < prepared.turbine_ids.size(); ++ti)
            per[prepared.turbine_ids[ti]] = kr.per_turbine[ti].to_json();
        jmodels[kr.name] = json{{"pooled", kr.pooled.to_json()},
                                {"per_turbine", per},
                                {"across_turbines", summaries.at(kr.name).to_json()}};
    }
    jm["models"] = jmodels;
    if (!relative.empty()) {
        json jr = json::array();
        for (const auto& row : relative)
            jr.push_back(json{{"model", row.name},
                              {"mae_pct_of_baseline", row.mae_pct_of_baseline},
                              {"rmse_pct_of_baseline", row.rmse_pct_of_baseline},
                              {"rank", row.rank}});
        jm["relative"] = std::move(jr);
    }
    art::write_file(out / "metrics.json", jm.dump(2) + "\n");
    files.push_back("metrics.json");

    art::write_manifest(out, m, files);
    std::cout << "evaluate: " << results.size() << " models, "
              << pooled_truth.size() << " pooled test samples in " << out.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------- finetune

struct FinetuneArgs {
    std::string models;
    std::string prepared;
    std::string config;
    std::string out;
    std::string frozen;
    double lr_scale = 0.0;
    int max_epochs = 0;
    int patience = 0;
    int batch_size = 0;
    std::uint64_t seed = 0;
    CLI::Option* o_frozen = nullptr;
    CLI::Option* o_lr_scale = nullptr;
    CLI::Option* o_max_epochs = nullptr;
    CLI::Option* o_patience = nullptr;
    CLI::Option* o_batch_size = nullptr;
};

wc::continual::FinetuneConfig resolve_finetune_config(const json& cfg, const FinetuneArgs& a) {
    wc::continual::FinetuneConfig fc;
    if (cfg.contains("finetune")) {
        try {
            fc = wc::continual::FinetuneConfig::from_json(cfg.at("finetune"));
        } catch (const nlohmann::json::exception& e) {
            throw wc::ConfigError(std::string("malformed finetune section: ") + e.what());
        }
    }
    if (a.o_lr_scale->count()) fc.lr_scale = a.lr_scale;
    if (a.o_max_epochs->count()) fc.max_epochs = a.max_epochs;
    if (a.o_patience->count()) fc.patience = a.patience;
    if (a.o_batch_size->count()) fc.batch_size = a.batch_size;
    if (a.o_frozen->count()) {
        if (a.frozen == "default") {
            fc.frozen_layers.reset();
        } else if (a.frozen == "none") {
            fc.frozen_layers = std::set<std::size_t>{};
        } else {
            std::set<std::size_t> idx;
            std::stringstream ss(a.frozen);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    idx.insert(std::stoul(item));
                } catch (const std::exception&) {
                    throw wc::ConfigError("--frozen expects 'default', 'none', or "
                                          "a comma-separated index list");
                }
            }
            fc.frozen_layers = std::move(idx);
        }
    }
    fc.validate();
    return fc;
}

int cmd_finetune(const FinetuneArgs& a) {
    if (a.models.empty()) throw wc::ConfigError("--models is required");
    if (a.prepared.empty()) throw wc::ConfigError("--prepared is required");
    if (a.out.empty()) throw wc::ConfigError("--out is required");
    const json cfg = load_config_file(a.config);
    const auto fc = resolve_finetune_config(cfg, a);

    const fs::path pdir(a.prepared);
    const auto prepared = art::load_prepared(pdir);
    const fs::path mdir(a.models);

    art::RunManifest m;
    m.command = "finetune";
    m.seed = a.seed;
    if (!a.config.empty()) add_input(m, a.config, a.config);
    add_prepared_inputs(m, pdir, prepared);

    const fs::path out(a.out);
    ensure_outdir(out);
    std::vector<std::string> files;
    json per_turbine = json::object();
    wc::models::ModelConfig mc;
    for (std::size_t i = 0; i < prepared.turbine_ids.size(); ++i) {
        const auto& id = prepared.turbine_ids[i];
        auto original = art::load_model(mdir, id);
        mc = art::load_model_config(mdir, id);
        add_model_inputs(m, mdir, id);
        const auto& samples = prepared.samples.at(id);
        const auto split = art::split_with(samples, prepared.assignment);
        auto fci = fc;
        fci.rng_seed = wc::derive_seed(a.seed, i);
        auto tuned = wc::continual::finetune(original, art::select(samples, split.train),
                                             art::select(samples, split.validation), fci);
        art::save_model(out, id, tuned, mc);
        files.push_back(art::model_json_name(id));
        files.push_back(art::params_bin_name(id));
        per_turbine[id] =
            json{{"epochs", tuned.train_history.history.size()},
                 {"best_epoch", tuned.train_history.best_epoch},
                 {"best_val_loss", wc::double_to_hex(tuned.train_history.best_val_loss)}};
    }

    m.config = json{{"model", mc.to_json()}, {"finetune", fc.to_json()}};
    m.notes = json{{"turbines", per_turbine}};
    art::write_manifest(out, m, files);
    std::cout << "finetune: " << prepared.turbine_ids.size() << " turbines in " << out.string()
              << "\n";
    return 0;
}

// ------------------------------------------------------- compare-strategies

struct CompareArgs {
    FinetuneArgs ft;  // reuses the finetune flag set
    int retrain_max_epochs = 0;
    int retrain_batch_size = 0;
    int retrain_patience = 0;
    CLI::Option* o_retrain_max_epochs = nullptr;
    CLI::Option* o_retrain_batch_size = nullptr;
    CLI::Option* o_retrain_patience = nullptr;
};

int cmd_compare_strategies(const CompareArgs& a) {
    if (a.ft.models.empty()) throw wc::ConfigError("--models is required");
    if (a.ft.prepared.empty()) throw wc::ConfigError("--prepared is required");
    if (a.ft.out.empty()) throw wc::ConfigError("--out is required");
    const json cfg = load_config_file(a.ft.config);
    const auto fc = resolve_finetune_config(cfg, a.ft);
    wc::nnet::TrainConfig rt;
    if (cfg.contains("train")) train_config_apply_json(rt, cfg.at("train"));
    if (a.o_retrain_max_epochs->count()) rt.max_epochs = a.retrain_max_epochs;
    if (a.o_retrain_batch_size->count()) rt.batch_size = a.retrain_batch_size;
    if (a.o_retrain_patience->count()) rt.patience = a.retrain_patience;
    rt.validate();

    const fs::path pdir(a.ft.prepared);
    const auto prepared = art::load_prepared(pdir);
    const fs::path mdir(a.ft.models);

    art::RunManifest m;
    m.command = "compare-strategies";
    m.seed = a.ft.seed;
    if (!a.ft.config.empty()) add_input(m, a.ft.config, a.ft.config);
    add_prepared_inputs(m, pdir, prepared);

    std::string csv = "turbine,model,strategy,mb_kw,mae_kw,rmse_kw,nrmse_pct\n";
    const auto csv_row = [&](const std::string& id, const std::string& model,
                             const char* strategy, const wc::eval::MetricsReport& r) {
        csv += id + "," + model + "," + strategy + "," + fmt17(r.mb) + "," + fmt17(r.mae) + "," +
               fmt17(r.rmse) + "," + fmt17(r.nrmse_pct) + "\n";
    };
    json jturbines = json::object();
    wc::models::ModelConfig mc;
    for (std::size_t i = 0; i < prepared.turbine_ids.size(); ++i) {
        const auto& id = prepared.turbine_ids[i];
        auto original = art::load_model(mdir, id);
        mc = art::load_model_config(mdir, id);
        add_model_inputs(m, mdir, id);
        const auto& samples = prepared.samples.at(id);
        const auto split = art::split_with(samples, prepared.assignment);
        wc::continual::NewDataSplit nds;
        nds.train = art::select(samples, split.train);
        nds.val = art::select(samples, split.validation);
        nds.test = art::select(samples, split.test);
        auto fci = fc;
        fci.rng_seed = wc::derive_seed(a.ft.seed, 100 + i);
        wc::models::TrainOptions ropts;
        ropts.train = rt;
        ropts.train.rng_seed = wc::derive_seed(a.ft.seed, 200 + i);
        const auto rep = wc::continual::run_strategies(original, mc, nds, fci, ropts);
        csv_row(id, rep.model, "baseline", rep.baseline);
        csv_row(id, rep.model, "original", rep.original);
        csv_row(id, rep.model, "retrain", rep.retrain);
        csv_row(id, rep.model, "continual", rep.continual);
        jturbines[id] = rep.to_json();
    }

    const fs::path out(a.ft.out);
    ensure_outdir(out);
    art::write_file(out / "strategies.csv", csv);
    art::write_file(out / "strategies.json",
                    json{{"turbines", jturbines}}.dump(2) + "\n");
    m.config = json{{"model", mc.to_json()},
                    {"finetune", fc.to_json()},
                    {"train", train_config_to_json(rt)}};
    art::write_manifest(out, m, {"strategies.csv", "strategies.json"});
    std::cout << "compare-strategies: " << prepared.turbine_ids.size() << " turbines in "
              << out.string() << "\n";
    return 0;
}

void add_finetune_flags(CLI::App* sub, FinetuneArgs& a) {
    sub->add_option("--models", a.models, "directory with the original model artifacts");
    sub->add_option("--prepared", a.prepared, "prepared dataset with the new data");
    sub->add_option("--config", a.config, "JSON config file");
    sub->add_option("--out", a.out, "output directory");
    sub->add_option("--seed", a.seed, "base RNG seed");
    a.o_frozen = sub->add_option("--frozen", a.frozen,
                                 "'default', 'none', or comma-separated layer indices");
    a.o_lr_scale = sub->add_option("--lr-scale", a.lr_scale, "learning-rate scale in (0, 1]");
    a.o_max_epochs = sub->add_option("--max-epochs", a.max_epochs, "fine-tuning epoch cap");
    a.o_patience = sub->add_option("--patience", a.patience, "early-stopping patience");
    a.o_batch_size = sub->add_option("--batch-size", a.batch_size, "mini-batch size");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wind power forecast bias correction toolkit"};
    app.require_subcommand(1);

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "generate a synthetic farm dataset");
    gen->add_option("--config", ga.config, "JSON config file with farm/bias/wind sections");
    gen->add_option("--out", ga.out, "output directory (default: $WINDCAST_DATA_DIR)");
    ga.o_turbines = gen->add_option("--turbines", ga.turbines, "number of turbines");
    ga.o_days = gen->add_option("--days", ga.days, "duration in days");
    ga.o_start = gen->add_option("--start", ga.start, "start time, ISO 8601 UTC");
    ga.o_capacity = gen->add_option("--capacity", ga.capacity, "turbine capacity in kW");
    ga.o_diurnal = gen->add_option("--diurnal", ga.diurnal, "diurnal NWP bias amplitude, m/s");
    ga.o_seasonal = gen->add_option("--seasonal", ga.seasonal, "seasonal NWP bias amplitude, m/s");
    ga.o_offset_std =
        gen->add_option("--offset-std", ga.offset_std, "per-turbine wind offset std, m/s");
    ga.o_noise = gen->add_option("--noise", ga.noise, "NWP noise std, m/s");
    ga.o_seed = gen->add_option("--seed", ga.seed, "RNG seed");

    PrepareArgs pa;
    auto* prep = app.add_subcommand("prepare", "build matched forecast samples and a split");
    prep->add_option("--data", pa.data, "input directory (default: $WINDCAST_DATA_DIR)");
    prep->add_option("--scada", pa.scada, "explicit SCADA csv files");
    prep->add_option("--nwp", pa.nwp, "explicit NWP csv file");
    prep->add_option("--out", pa.out, "output directory");
    prep->add_option("--seed", pa.seed, "day-split RNG seed");
    pa.o_capacity = prep->add_option("--capacity", pa.capacity, "turbine capacity in kW");
    pa.o_hub = prep->add_option("--hub-height", pa.hub_height, "hub height in m");
    pa.o_ref = prep->add_option("--ref-height", pa.ref_height, "NWP reference height in m");
    pa.o_tz = prep->add_option("--tz-offset", pa.tz_offset, "local clock offset in hours");
    pa.o_nwp_interval =
        prep->add_option("--nwp-interval", pa.nwp_interval, "NWP record interval in minutes");
    pa.o_scada_interval = prep->add_option("--scada-interval", pa.scada_interval,
                                           "SCADA record interval in minutes");

    TrainArgs ta;
    auto* tr = app.add_subcommand("train", "train one model kind for every turbine");
    tr->add_option("--prepared", ta.prepared, "prepared dataset directory");
    tr->add_option("--config", ta.config, "JSON config file with model/train sections");
    ta.o_kind = tr->add_option("--kind", ta.kind, "baseline|gb|nn|cnn|lstm");
    tr->add_option("--out", ta.out, "output directory");
    tr->add_option("--seed", ta.seed, "base RNG seed");
    tr->add_option("--parallel", ta.parallel, "worker threads across turbines");
    ta.o_max_epochs = tr->add_option("--max-epochs", ta.max_epochs, "epoch cap");
    ta.o_batch_size = tr->add_option("--batch-size", ta.batch_size, "mini-batch size");
    ta.o_patience = tr->add_option("--patience", ta.patience, "early-stopping patience");

    SearchArgs sa;
    auto* se = app.add_subcommand("search", "random hyperparameter search on one turbine");
    se->add_option("--prepared", sa.prepared, "prepared dataset directory");
    se->add_option("--config", sa.config, "JSON config file with a train section");
    se->add_option("--space", sa.space, "search-space JSON file");
    se->add_option("--kind", sa.kind, "baseline|gb|nn|cnn|lstm")->required();
    se->add_option("--turbine", sa.turbine, "turbine id to search on")->required();
    se->add_option("--out", sa.out, "output directory");
    se->add_option("--n", sa.n_configs, "number of trials");
    se->add_option("--seed", sa.seed, "search RNG seed");
    sa.o_max_epochs = se->add_option("--max-epochs", sa.max_epochs, "per-trial epoch cap");
    sa.o_batch_size = se->add_option("--batch-size", sa.batch_size, "mini-batch size");
    sa.o_patience = se->add_option("--patience", sa.patience, "early-stopping patience");

    EvaluateArgs ea;
    auto* ev = app.add_subcommand("evaluate", "score model artifacts on the test partition");
    ev->add_option("--models", ea.models, "model artifact directories (repeatable)");
    ev->add_option("--prepared", ea.prepared, "prepared dataset directory");
    ev->add_option("--out", ea.out, "output directory");
    ev->add_option("--seed", ea.seed, "recorded in the manifest; evaluation is deterministic");

    FinetuneArgs fa;
    auto* ft = app.add_subcommand("finetune", "fine-tune neural models on new data");
    add_finetune_flags(ft, fa);

    CompareArgs ca;
    auto* cs = app.add_subcommand("compare-strategies",
                                  "score original vs retrained vs fine-tuned on new data");
    add_finetune_flags(cs, ca.ft);
    ca.o_retrain_max_epochs =
        cs->add_option("--retrain-max-epochs", ca.retrain_max_epochs, "retraining epoch cap");
    ca.o_retrain_batch_size =
        cs->add_option("--retrain-batch-size", ca.retrain_batch_size, "retraining batch size");
    ca.o_retrain_patience =
        cs->add_option("--retrain-patience", ca.retrain_patience, "retraining patience");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) return cmd_generate(ga);
        if (prep->parsed()) return cmd_prepare(pa);
        if (tr->parsed()) return cmd_train(ta);
        if (se->parsed()) return cmd_search(sa);
        if (ev->parsed()) return cmd_evaluate(ea);
        if (ft->parsed()) return cmd_finetune(fa);
        if (cs->parsed()) return cmd_compare_strategies(ca);
        throw wc::ConfigError("no command given");
    } catch (const wc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const wc::MissingArtifactError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const wc::IntegrityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const wc::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const wc::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
