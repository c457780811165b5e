// clonesim: run, sweep, compare, optimize and montecarlo over JSON experiment configs.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "clonesim/experiment.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<unsigned> workers;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "RNG seed (overrides the config)");
    cmd->add_option("--out", o.out, "Output path; '-' for stdout");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", o.workers, "Counting threads")->check(CLI::Range(1u, 1024u));
}

clonesim::ExperimentConfig load(const std::string& path, const Overrides& o) {
    auto c = clonesim::load_config(path);
    if (o.seed) c.seed = *o.seed;
    if (o.out) c.output.path = *o.out;
    if (o.format) c.output.format = clonesim::parse_format(*o.format);
    if (o.workers) c.workers = *o.workers;
    return c;
}

void emit(const clonesim::ExperimentConfig& c, const std::string& csv, const std::string& json) {
    clonesim::write_output(c.output.path, c.output.format == clonesim::OutputFormat::csv ? csv : json);
}

void emit_rows(const clonesim::ExperimentConfig& c, const std::vector<clonesim::ResultRow>& rows) {
    clonesim::write_output(c.output.path, clonesim::emit_rows(rows, c.output.format));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-covariant cloner simulator"};
    app.require_subcommand(1);

    Overrides o;
    std::string config;
    std::vector<std::string> configs;

    auto* run = app.add_subcommand("run", "One row per configured input");
    auto* sweep = app.add_subcommand("sweep", "Rows over the configured theta/phi grid");
    auto* montecarlo = app.add_subcommand("montecarlo", "Rows with simulated coincidence counts");
    auto* optimize = app.add_subcommand("optimize", "Symmetrize the model over its free parameters");
    for (auto* cmd : {run, sweep, montecarlo, optimize}) {
        cmd->add_option("--config", config, "Experiment config (JSON)")->required();
        add_common(cmd, o);
    }
    auto* cmp = app.add_subcommand("compare", "Summary table over several configs");
    cmp->add_option("--config", configs, "Experiment configs (repeat the flag)")->required();
    add_common(cmp, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    try {
        if (*run) {
            auto c = load(config, o);
            emit_rows(c, clonesim::run_experiment(c));
        } else if (*sweep) {
            auto c = load(config, o);
            emit_rows(c, clonesim::sweep_phase(c));
        } else if (*montecarlo) {
            auto c = load(config, o);
            emit_rows(c, clonesim::run_montecarlo(c));
        } else if (*optimize) {
            auto c = load(config, o);
            auto r = clonesim::run_optimize(c);
            emit(c, clonesim::optimization_to_csv(r), clonesim::optimization_to_json(r));
        } else if (*cmp) {
            std::vector<clonesim::ExperimentConfig> all;
            for (const auto& p : configs) all.push_back(load(p, o));
            auto rows = clonesim::compare(all);
            emit(all.front(), clonesim::compare_to_csv(rows), clonesim::compare_to_json(rows));
        }
    } catch (const clonesim::IoError& e) {
        std::cerr << "clonesim: " << e.what() << "\n";
        return kExitIo;
    } catch (const clonesim::ConfigError& e) {
        std::cerr << "clonesim: invalid config: " << e.what() << "\n";
        return kExitValidation;
    } catch (const clonesim::ParameterError& e) {
        std::cerr << "clonesim: invalid parameter: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "clonesim: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
