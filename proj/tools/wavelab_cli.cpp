// wavelab: ensemble experiments for the 1-D stochastic wave equation.
//
//   wavelab simulate  --equation wave --out-dir out
//   wavelab qv        --config configs/qv_time_const.json --workers 4
//   wavelab report    --from out
//
// Exit codes: 0 pass, 1 acceptance fail, 2 configuration error, 3 runtime error.

#include "wavelab/config.hpp"
#include "wavelab/error.hpp"
#include "wavelab/experiment.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace wavelab;

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kRuntime = 3 };

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicates;
    std::optional<int> workers;
    std::string out_dir;
    std::vector<std::string> overrides;
    bool dry_run = false;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("-c,--config", c.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "base seed; replicate i uses seed + i");
    sub->add_option("--replicates", c.replicates, "number of replicates");
    sub->add_option("--workers", c.workers, "OpenMP worker threads (0 = default)");
    sub->add_option("--out-dir", c.out_dir, "directory for CSV/JSON output");
    sub->add_option("--set", c.overrides, "override a config key: key=value")->take_all();
    sub->add_flag("--validate-only", c.dry_run, "check the config and print admissible ladders");
}

ExperimentConfig resolve(const Common& c, ExperimentKind fallback)
{
    ExperimentConfig cfg;
    if (!c.config.empty())
        cfg = load_config(c.config);
    else {
        cfg.kind = fallback;
        cfg.name = to_string(fallback);
    }
    for (const auto& o : c.overrides)
        apply_override(cfg, o);
    if (c.seed)
        cfg.seed = *c.seed;
    if (c.replicates)
        cfg.replicates = *c.replicates;
    if (c.workers)
        cfg.workers = *c.workers;
    if (!c.out_dir.empty())
        cfg.out_dir = c.out_dir;
    return cfg;
}

int print_validation(const ExperimentConfig& cfg)
{
    const auto v = validate(cfg);
    if (!v.admissible_partitions.empty()) {
        std::cout << "admissible N:";
        for (int n : v.admissible_partitions)
            std::cout << ' ' << n;
        std::cout << '\n';
    }
    for (const auto& i : v.issues)
        std::cerr << "[" << i.rule << "] " << i.message << (i.suggestion.empty() ? "" : " -- " + i.suggestion) << '\n';
    if (v.ok())
        std::cout << cfg.name << ": config valid\n";
    return v.ok() ? kPass : kConfig;
}

int execute(const ExperimentConfig& cfg, bool dry_run)
{
    if (dry_run)
        return print_validation(cfg);
    const EnsembleSummary s = run(cfg);
    for (const auto& w : s.warnings)
        std::cerr << "warning: " << w << '\n';
    const auto paths = write_artifacts(s, cfg.out_dir);
    for (const auto& m : s.metrics)
        std::cout << m.name << " = " << format_number(m.value)
                  << (m.std_error > 0 ? " +/- " + format_number(m.std_error) : "") << '\n';
    for (const auto& c : s.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.threshold.metric << " = " << format_number(c.value)
                  << (c.threshold.min ? " min " + format_number(*c.threshold.min) : "")
                  << (c.threshold.max ? " max " + format_number(*c.threshold.max) : "") << '\n';
    for (const auto& p : paths)
        std::cout << "wrote " << p.string() << '\n';
    return s.passed() ? kPass : kFail;
}

int summarize(const std::string& from, const std::string& out_dir)
{
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(from))
        if (e.path().extension() == ".json")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw ConfigError("report: no JSON summaries in " + from);
    bool all = true;
    std::ostringstream csv;
    csv << "name,experiment,metric,value,min,max,pass\n";
    for (const auto& f : files) {
        std::ifstream in(f);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw Error("report: " + f.string() + ": " + e.what());
        }
        if (!j.contains("config") || !j.contains("checks"))
            continue;
        const std::string name = j["config"].value("name", f.stem().string());
        const std::string kind = j["config"].value("experiment", "");
        const bool passed = j.value("passed", false);
        all = all && passed;
        std::cout << (passed ? "PASS " : "FAIL ") << name << " (" << kind << ")\n";
        for (const auto& c : j["checks"]) {
            csv << name << ',' << kind << ',' << c.value("metric", "") << ',' << format_number(c.value("value", 0.0))
                << ',' << (c.contains("min") ? format_number(c["min"].get<double>()) : "") << ','
                << (c.contains("max") ? format_number(c["max"].get<double>()) : "") << ','
                << (c.value("pass", false) ? 1 : 0) << '\n';
        }
    }
    const fs::path dir = out_dir.empty() ? fs::path(from) : fs::path(out_dir);
    fs::create_directories(dir);
    const auto path = dir / "report.csv";
    std::ofstream out(path);
    if (!(out << csv.str()))
        throw Error("cannot write " + path.string());
    std::cout << "wrote " << path.string() << '\n';
    return all ? kPass : kFail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Stochastic wave equation lab: quadratic variation, CLT, LIL and linearization studies"};
    app.set_version_flag("--version", std::string(WAVELAB_VERSION));
    app.require_subcommand(1);

    Common common;
    std::string equation;
    bool space = false;
    std::string from;

    auto* simulate = app.add_subcommand("simulate", "solve fields and write snapshots");
    add_common(simulate, common);
    simulate->add_option("--equation", equation, "wave or heat")->check(CLI::IsMember({"wave", "heat"}));

    auto* qv = app.add_subcommand("qv", "temporal or spatial quadratic variation study");
    add_common(qv, common);
    qv->add_flag("--space", space, "spatial partitions instead of temporal");

    auto* clt = app.add_subcommand("clt", "KS test of standardized temporal increments");
    add_common(clt, common);
    auto* lil = app.add_subcommand("lil", "iterated-logarithm statistic against a Brownian control");
    add_common(lil, common);
    auto* mart = app.add_subcommand("mart", "martingale/remainder decomposition of increments");
    add_common(mart, common);

    auto* linearize = app.add_subcommand("linearize", "local linearization defect");
    add_common(linearize, common);
    linearize->add_option("--equation", equation, "wave or heat")->check(CLI::IsMember({"wave", "heat"}));

    auto* report = app.add_subcommand("report", "run any config, or summarize a directory of results");
    add_common(report, common);
    report->add_option("--from", from, "directory of JSON summaries")->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kConfig;
    }

    try {
        if (*report && !from.empty())
            return summarize(from, common.out_dir);

        ExperimentKind fallback = ExperimentKind::QvTime;
        if (*simulate)
            fallback = ExperimentKind::Simulate;
        else if (*qv)
            fallback = space ? ExperimentKind::QvSpace : ExperimentKind::QvTime;
        else if (*clt)
            fallback = ExperimentKind::Clt;
        else if (*lil)
            fallback = ExperimentKind::Lil;
        else if (*mart)
            fallback = ExperimentKind::Mart;
        else if (*linearize)
            fallback = ExperimentKind::Linearize;
        else if (*report && common.config.empty())
            throw ConfigError("report needs --config or --from");

        ExperimentConfig cfg = resolve(common, fallback);
        if (!equation.empty())
            cfg.equation = equation == "heat" ? Equation::Heat : Equation::Wave;
        if (*simulate && common.config.empty())
            cfg.snapshots = true;
        if (*qv && space)
            cfg.kind = ExperimentKind::QvSpace;
        if (!*report) {
            const bool compatible = cfg.kind == fallback ||
                                    (*qv && (cfg.kind == ExperimentKind::QvTime || cfg.kind == ExperimentKind::QvSpace));
            if (!compatible)
                throw ConfigError("config declares experiment '" + to_string(cfg.kind) + "'; use the matching subcommand or 'report'");
        }
        return execute(cfg, common.dry_run);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const AlignmentError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const ReplicateFailure& e) {
        std::cerr << "replicate failure: " << e.what() << " -- rerun with --seed " << e.seed() << " --replicates 1\n";
        return kRuntime;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kRuntime;
    }
}
