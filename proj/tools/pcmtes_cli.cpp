#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pcmtes/engine/scenario.hpp"
#include "pcmtes/io/config.hpp"
#include "pcmtes/io/output.hpp"

namespace fs = std::filesystem;
using namespace pcmtes;

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> model;
    std::optional<int> layers;
    std::optional<double> dt;
    std::optional<std::string> out;
    bool compare = false;
    std::optional<std::string> run_id;
};

void add_flags(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "JSON configuration file (defaults apply when omitted)");
    app->add_option("--model", f.model, "continuous or discrete")->check(CLI::IsMember({"continuous", "discrete"}));
    app->add_option("--layers", f.layers, "layer count of the discrete model")->check(CLI::PositiveNumber);
    app->add_option("--dt", f.dt, "output and integration step, s")->check(CLI::PositiveNumber);
    app->add_option("--out", f.out, "output directory");
    app->add_flag("--compare", f.compare, "run the continuous/discrete comparison");
    app->add_option("--seed-run-id", f.run_id, "run identifier used for output file names");
}

// flag > file > default
RunConfig resolve(const Flags& f, bool comparing) {
    RunConfig cfg = f.config.empty() ? parse_config("") : load_config(f.config);
    if (f.model) cfg.model = model_kind_from_string(*f.model);
    if (f.layers) {
        cfg.n_lay = *f.layers;
        if (comparing) cfg.compare.layers = {*f.layers};
    }
    if (f.dt) cfg.dt = *f.dt;
    if (f.out) cfg.out_dir = *f.out;
    if (f.run_id) cfg.run_id = *f.run_id;
    if (f.compare || comparing) cfg.compare.enabled = true;
    cfg.validate();
    return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& suffix) {
    return (fs::path(cfg.out_dir) / (cfg.run_id + suffix)).string();
}

void write_echo(const RunConfig& cfg) {
    write_json_file(config_to_json(cfg), out_path(cfg, ".config.json"));
}

int do_run(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    write_echo(cfg);
    RunResult res;
    if (cfg.model == ModelKind::continuous) {
        ContinuousModel m(cfg.plant, cfg.initial, cfg.T_int0);
        res = run_scenario(m, cfg.scenario, cfg.run_options());
    } else {
        DiscreteModel m(cfg.plant, cfg.n_lay, cfg.initial, cfg.T_int0);
        res = run_scenario(m, cfg.scenario, cfg.run_options());
    }
    emit_timeseries(res, out_path(cfg, ".csv"));
    nlohmann::json summary = summary_json(res);
    summary["run_id"] = cfg.run_id;
    write_json_file(summary, out_path(cfg, ".summary.json"));
    std::ofstream log(out_path(cfg, ".log"), std::ios::binary);
    log << "run " << cfg.run_id << '\n';
    write_run_log(res, log);
    std::cout << res.model << ": " << res.records.size() << " records, final gamma "
              << format_field(res.summary.final_gamma) << ", outputs in " << cfg.out_dir << '\n';
    return 0;
}

int do_compare(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    write_echo(cfg);
    const ComparisonReport rep = compare_models(cfg.plant, cfg.scenario, cfg.compare.layers, cfg.run_options());
    emit_timeseries(rep.continuous, out_path(cfg, ".continuous.csv"));
    for (const RunResult& d : rep.discrete)
        emit_timeseries(d, out_path(cfg, ".discrete_n" + std::to_string(d.n_layers) + ".csv"));
    {
        std::ofstream f(out_path(cfg, ".compare.csv"), std::ios::binary);
        write_comparison_series(rep, f);
    }
    nlohmann::json summary = comparison_json(rep);
    summary["run_id"] = cfg.run_id;
    write_json_file(summary, out_path(cfg, ".summary.json"));
    std::ofstream log(out_path(cfg, ".log"), std::ios::binary);
    log << "compare " << cfg.run_id << " horizon " << format_field(rep.horizon) << " s\n";
    write_run_log(rep.continuous, log);
    for (const RunResult& d : rep.discrete) write_run_log(d, log);
    for (const ComparisonEntry& e : rep.entries) {
        log << "n_layers " << e.n_layers << " max_rel_error " << format_field(e.max_rel_error) << " at "
            << format_field(e.t_at_max) << " s\n";
        std::cout << "n_layers " << e.n_layers << ": max relative error " << format_field(e.max_rel_error)
                  << " at t = " << format_field(e.t_at_max) << " s\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cold thermal storage tank simulator with PCM capsules"};
    app.require_subcommand(1);
    Flags flags;
    CLI::App* run = app.add_subcommand("run", "simulate the configured scenario");
    CLI::App* compare = app.add_subcommand("compare", "compare the continuous model with the discrete model");
    CLI::App* validate = app.add_subcommand("validate-config", "check a configuration and print it fully resolved");
    for (CLI::App* sub : {run, compare, validate}) add_flags(sub, flags);
    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            const RunConfig cfg = resolve(flags, false);
            std::cout << config_to_json(cfg).dump(2) << '\n';
            return 0;
        }
        const bool comparing = compare->parsed();
        const RunConfig cfg = resolve(flags, comparing);
        if (comparing || cfg.compare.enabled) return do_compare(cfg);
        return do_run(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const UnsupportedOperation& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
