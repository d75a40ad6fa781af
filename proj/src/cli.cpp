#include "neurochaos/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "neurochaos/errors.hpp"
#include "neurochaos/experiment.hpp"
#include "neurochaos/parallel.hpp"

#ifndef NL_DEFAULT_PRESET_DIR
#define NL_DEFAULT_PRESET_DIR "presets"
#endif

namespace nl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string dataset;
    std::string schema;
    std::string model = "chaosnet";
    std::string params;  // file path or inline key=value list
    std::string grid = "default";
    std::string svm_grid = "hybrid";
    std::string regime;
    std::uint64_t seed_split = 0;
    std::uint64_t seed_placement = 0;
    std::uint64_t seed_trials = 0;
    std::uint64_t seed_cv = 0;
    std::size_t folds = 5;
    std::size_t trials = 100;
    std::size_t k_max = 10;
    std::string out = "results";
    unsigned threads = 0;
    bool lenient = false;
};

json config_echo(const RunConfig& c) {
    return {{"dataset", c.dataset},       {"schema", c.schema},       {"model", c.model},
            {"params", c.params},         {"grid", c.grid},           {"svm_grid", c.svm_grid},
            {"regime", c.regime},         {"seed_split", c.seed_split}, {"seed_placement", c.seed_placement},
            {"seed_trials", c.seed_trials}, {"seed_cv", c.seed_cv},    {"folds", c.folds},
            {"trials", c.trials},         {"k_max", c.k_max},         {"lenient", c.lenient}};
}

json read_json_file(const fs::path& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw InputError(std::string("cannot open ") + what + " file " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(std::string(what) + " file " + path.string() + ": " + e.what());
    }
}

// Fills fields absent from the command line from a RunConfig JSON file.
void merge_config_file(RunConfig& c, const fs::path& path, const CLI::App& app) {
    const json j = read_json_file(path, "config");
    auto set = [&](const char* key, const char* flag, auto& field) {
        if (j.contains(key) && app.count(flag) == 0) field = j[key].get<std::remove_reference_t<decltype(field)>>();
    };
    set("dataset", "--dataset", c.dataset);
    set("schema", "--schema", c.schema);
    set("model", "--model", c.model);
    set("grid", "--grid", c.grid);
    set("svm_grid", "--svm-grid", c.svm_grid);
    set("regime", "--regime", c.regime);
    set("seed_split", "--seed-split", c.seed_split);
    set("seed_placement", "--seed-placement", c.seed_placement);
    set("seed_trials", "--seed-trials", c.seed_trials);
    set("seed_cv", "--seed-cv", c.seed_cv);
    set("folds", "--folds", c.folds);
    set("trials", "--trials", c.trials);
    set("k_max", "--k-max", c.k_max);
    set("out", "--out", c.out);
    set("threads", "--threads", c.threads);
    set("lenient", "--lenient", c.lenient);
    if (j.contains("params") && app.count("--params") == 0) {
        if (j["params"].is_string())
            c.params = j["params"].get<std::string>();
        else
            c.params = j["params"].dump();
    }
}

ModelSpec parse_params(const std::string& params, ModelSpec spec) {
    if (params.empty()) return spec;
    json j;
    if (!params.empty() && params.front() == '{') {
        try {
            j = json::parse(params);
        } catch (const json::exception& e) {
            throw InputError(std::string("--params: ") + e.what());
        }
    } else if (params.find('=') != std::string::npos && !fs::exists(params)) {
        // q=0.93,b=0.49,epsilon=0.166[,C=10,kernel=linear,gamma=scale]
        std::stringstream ss(params);
        std::string item;
        json neuron = spec.neuron, svm = spec.svm;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw InputError("--params: malformed entry '" + item + "'");
            const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
            try {
                if (key == "q" || key == "b" || key == "epsilon" || key == "eps")
                    neuron[key == "eps" ? "epsilon" : key] = std::stod(value);
                else if (key == "max_iters")
                    neuron[key] = std::stoul(value);
                else if (key == "C" || key == "coef0" || key == "tol")
                    svm[key] = std::stod(value);
                else if (key == "degree")
                    svm[key] = std::stoi(value);
                else if (key == "kernel")
                    svm[key] = value;
                else if (key == "gamma")
                    svm[key] = value == "scale" ? json("scale") : json(std::stod(value));
                else
                    throw InputError("--params: unknown key '" + key + "'");
            } catch (const std::logic_error&) {
                throw InputError("--params: bad value for '" + key + "'");
            }
        }
        j = {{"neuron", neuron}, {"svm", svm}};
    } else {
        j = read_json_file(params, "params");
        if (j.contains("best")) j = j["best"];
    }
    const std::string keep_name = spec.name();
    if (j.contains("neuron")) spec.neuron = j["neuron"].get<NeuronConfig>();
    if (j.contains("svm")) spec.svm = j["svm"].get<SVMConfig>();
    if (j.contains("rescale_firing_time")) spec.rescale_firing_time = j["rescale_firing_time"].get<bool>();
    if (j.contains("name") && j["name"].get<std::string>() != keep_name)
        throw InputError("--params describes model '" + j["name"].get<std::string>() + "' but --model is '" +
                         keep_name + "'");
    return spec;
}

Dataset load_dataset(const RunConfig& c) {
    if (c.dataset.empty()) throw InputError("--dataset is required");
    if (c.schema.empty()) throw InputError("--schema is required");
    if (!fs::exists(c.dataset)) throw InputError("dataset file not found: " + c.dataset);
    const DatasetSchema schema = load_schema(resolve_schema(c.schema));
    LoadReport rep;
    Dataset ds = load_csv(c.dataset, schema, LoadOptions{c.lenient}, &rep);
    for (const auto& r : rep.rejected)
        std::cerr << json{{"warning", "row rejected"}, {"line", r.line}, {"reason", r.reason}}.dump() << "\n";
    return ds;
}

ModelSpec model_from_config(const RunConfig& c) {
    ModelSpec spec = ModelSpec::from_name(c.model);
    spec.placement_seed = c.seed_placement;
    return parse_params(c.params, spec);
}

NLGrid grid_from_config(const RunConfig& c, LayerKind kind) {
    if (c.grid == "default") return NLGrid::default_for(kind);
    if (c.grid == "toy") return NLGrid::toy();
    return read_json_file(c.grid, "grid").get<NLGrid>();
}

fs::path prepare_out(const RunConfig& c) {
    fs::path out(c.out);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw InputError("cannot create output directory " + out.string() + ": " + ec.message());
    return out;
}

int cmd_tune(const RunConfig& c) {
    const Dataset ds = load_dataset(c);
    const ModelSpec base = model_from_config(c);
    const unsigned threads = resolve_threads(c.threads);
    const TuningResult r = tune_on_split(ds, c.seed_split, base, grid_from_config(c, base.layer),
                                         SvmGrid::from_name(c.svm_grid), c.folds, c.seed_cv, threads);
    const fs::path out = prepare_out(c);
    json best = r.best;
    best["best_score"] = r.best_score;
    write_file_atomic(out / "best_params.json", best.dump(2) + "\n");
    write_file_atomic(out / "grid.csv", grid_csv(r));
    json summary = r;
    summary["config"] = config_echo(c);
    summary["dataset_hash"] = ds.content_hash;
    write_file_atomic(out / "tuning.json", summary.dump(2) + "\n");
    std::cout << "best " << r.best.name() << " mean macro-F1 " << r.best_score << " (" << r.rows.size()
              << " grid rows) -> " << (out / "best_params.json").string() << "\n";
    return kExitOk;
}

int cmd_run(const RunConfig& c) {
    const Dataset ds = load_dataset(c);
    const ModelSpec spec = model_from_config(c);
    const unsigned threads = resolve_threads(c.threads);
    const std::string regime = c.regime.empty() ? "hstr" : c.regime;
    const fs::path out = prepare_out(c);
    if (regime == "hstr") {
        const ExperimentResult r = run_hstr(ds, c.seed_split, spec, threads);
        json j = r;
        j["config"] = config_echo(c);
        write_file_atomic(out / "metrics.json", j.dump(2) + "\n");
        write_file_atomic(out / "confusion.csv", confusion_csv(r.confusion));
        write_file_atomic(out / "metrics.csv", csv_header() + "\n" + csv_row(r.metrics) + "\n");
        std::cout << spec.name() << ": macro-F1 " << r.metrics.macro_f1 << " accuracy " << r.metrics.accuracy
                  << " precision " << r.metrics.macro_precision << " recall " << r.metrics.macro_recall << "\n";
    } else if (regime == "lstr") {
        const LstrCurve curve = run_lstr(ds, c.seed_split, spec, c.seed_trials, 1, c.k_max, c.trials, threads);
        json j = curve;
        j["config"] = config_echo(c);
        write_file_atomic(out / "metrics.json", j.dump(2) + "\n");
        write_file_atomic(out / "curve.csv", curve_csv(curve));
        std::cout << curve_csv(curve);
    } else {
        throw InputError("unknown regime '" + regime + "' (expected hstr|lstr)");
    }
    return kExitOk;
}

struct ReportRow {
    std::string model;
    std::string source;
    MetricReport metrics;
};

int cmd_report(const std::vector<std::string>& files, const std::string& out_dir) {
    if (files.empty()) throw InputError("report: at least one result file is required");
    std::vector<ReportRow> rows;
    for (const auto& f : files) {
        const json j = read_json_file(f, "result");
        if (j.value("regime", "") != "hstr" || !j.contains("metrics") || !j.contains("model"))
            throw InputError("report: " + f + " is not an HSTR metrics file");
        try {
            rows.push_back({j["model"].value("name", "model"), f, j["metrics"].get<MetricReport>()});
        } catch (const json::exception& e) {
            throw InputError("report: " + f + ": " + e.what());
        }
    }
    auto column = [](const MetricReport& m, int c) {
        switch (c) {
            case 0: return m.macro_f1;
            case 1: return m.accuracy;
            case 2: return m.macro_precision;
            default: return m.macro_recall;
        }
    };
    const char* names[] = {"f1", "accuracy", "precision", "recall"};
    double best[4];
    for (int c = 0; c < 4; ++c) {
        best[c] = column(rows.front().metrics, c);
        for (const auto& r : rows) best[c] = std::max(best[c], column(r.metrics, c));
    }
    std::string csv = "model,source,f1,accuracy,precision,recall,best\n";
    std::string md = "| Model | F1 Score | Accuracy | Precision | Recall |\n|---|---|---|---|---|\n";
    char buf[32];
    for (const auto& r : rows) {
        std::string flags;
        csv += r.model + "," + r.source;
        md += "| " + r.model;
        for (int c = 0; c < 4; ++c) {
            const double v = column(r.metrics, c);
            std::snprintf(buf, sizeof buf, "%.4f", v);
            csv += std::string(",") + buf;
            const bool is_best = v == best[c];
            md += is_best ? std::string(" | **") + buf + "**" : std::string(" | ") + buf;
            if (is_best) flags += (flags.empty() ? "" : ";") + std::string(names[c]);
        }
        csv += "," + flags + "\n";
        md += " |\n";
    }
    if (out_dir.empty()) {
        std::cout << md;
    } else {
        fs::create_directories(out_dir);
        write_file_atomic(fs::path(out_dir) / "report.csv", csv);
        write_file_atomic(fs::path(out_dir) / "report.md", md);
        std::cout << md;
    }
    return kExitOk;
}

void print_error(const char* kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw InputError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw InputError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

fs::path resolve_schema(const std::string& name_or_path) {
    if (fs::exists(name_or_path) && fs::is_regular_file(name_or_path)) return name_or_path;
    fs::path dir = NL_DEFAULT_PRESET_DIR;
    if (const char* env = std::getenv("NL_PRESETS")) dir = env;
    const fs::path preset = dir / (name_or_path + ".json");
    if (fs::exists(preset)) return preset;
    throw InputError("schema '" + name_or_path + "' is neither a file nor a preset in " + dir.string());
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"nlchaos: neurochaos learning experiments (tune | run | report)"};
    app.require_subcommand(1);
    RunConfig c;
    std::string config_file;
    std::vector<std::string> report_files;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "RunConfig JSON; flags override its fields");
        sub->add_option("--dataset", c.dataset, "CSV dataset file");
        sub->add_option("--schema", c.schema, "schema preset (aff|cff|pff) or schema JSON path");
        sub->add_option("--model", c.model, "chaosnet|rhnl25|rhnl50|rhnl75[+svm]|svm");
        sub->add_option("--params", c.params, "params JSON file, inline JSON, or q=..,b=..,epsilon=..");
        sub->add_option("--regime", c.regime, "hstr|lstr (run) or tune");
        sub->add_option("--seed-split", c.seed_split, "train/test split seed");
        sub->add_option("--seed-placement", c.seed_placement, "RHNL neuron placement seed");
        sub->add_option("--seed-trials", c.seed_trials, "LSTR trial seed base");
        sub->add_option("--seed-cv", c.seed_cv, "cross-validation fold seed");
        sub->add_option("--out", c.out, "output directory");
        sub->add_option("--threads", c.threads, "worker threads (0: NL_THREADS or hardware)");
        sub->add_flag("--lenient", c.lenient, "skip malformed rows instead of failing");
    };

    auto* tune = app.add_subcommand("tune", "grid search with stratified k-fold CV on the training split");
    add_common(tune);
    tune->add_option("--grid", c.grid, "default|toy|grid JSON path");
    tune->add_option("--svm-grid", c.svm_grid, "hybrid|full");
    tune->add_option("--folds", c.folds, "number of CV folds");

    auto* run_cmd = app.add_subcommand("run", "HSTR or LSTR experiment");
    add_common(run_cmd);
    run_cmd->add_option("--trials", c.trials, "LSTR trials per k");
    run_cmd->add_option("--k-max", c.k_max, "LSTR largest samples-per-class");

    auto* report_cmd = app.add_subcommand("report", "merge HSTR metrics files into a comparison table");
    report_cmd->add_option("files", report_files, "metrics.json files")->required();
    report_cmd->add_option("--out", c.out, "output directory for report.csv / report.md");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return kExitInput;
    }

    try {
        if (*report_cmd) return cmd_report(report_files, report_cmd->count("--out") ? c.out : std::string());
        CLI::App* active = *tune ? tune : run_cmd;
        if (!config_file.empty()) merge_config_file(c, config_file, *active);
        if (*tune) {
            if (!c.regime.empty() && c.regime != "tune") throw InputError("tune: --regime must be 'tune'");
            return cmd_tune(c);
        }
        return cmd_run(c);
    } catch (const InputError& e) {
        print_error("input", e.what());
        return kExitInput;
    } catch (const DomainError& e) {
        print_error("input", e.what());
        return kExitInput;
    } catch (const json::exception& e) {
        print_error("input", e.what());
        return kExitInput;
    } catch (const NumericError& e) {
        print_error("numeric", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        print_error("numeric", e.what());
        return kExitNumeric;
    }
}

}  // namespace nl::cli
