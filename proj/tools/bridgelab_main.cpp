// bridgelab: simulate, analyse and verify infinite-horizon Brownian bridges.
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bridgelab/commands.hpp"
#include "bridgelab/config.hpp"
#include "bridgelab/errors.hpp"
#include "bridgelab/presets.hpp"
#include "bridgelab/verify.hpp"

namespace {

enum ExitCode { kOk = 0, kChecksFailed = 1, kUsage = 2, kRuntime = 3 };

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required) {
    auto* opt = cmd->add_option("--config", f.config_path, "key = value experiment file");
    if (config_required) opt->required();
    cmd->add_option("--seed", f.seed, "override the config seed");
    cmd->add_option("--out", f.out, "output directory (default $BRIDGELAB_OUT or ./bridgelab_out)");
    cmd->add_option("--threads", f.threads, "worker threads, 0 = all cores")->capture_default_str();
}

bridgelab::ExperimentConfig resolve(const CommonFlags& f, bridgelab::ExperimentConfig config) {
    if (f.seed) config.seed = *f.seed;
    if (f.out) config.outputs = *f.out;
    bridgelab::validate_config(config);
    return config;
}

int report_outcome(const bridgelab::report::ReportSummary& s) {
    std::cout << bridgelab::report::summary_json(s);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Infinite-horizon Brownian bridge laboratory"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto* simulate = app.add_subcommand("simulate", "simulate sample paths");
    auto* law = app.add_subcommand("law", "exact variance, covariance and determinant");
    auto* localtime = app.add_subcommand("localtime", "local-time estimates along paths");
    auto* holder = app.add_subcommand("holder", "time and space moduli of the local time");
    auto* figures = app.add_subcommand("figures", "draw the preset path figures");
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    for (auto* cmd : {simulate, law, localtime, holder}) add_common(cmd, flags, true);
    add_common(figures, flags, false);
    add_common(verify, flags, false);

    std::string preset = "figure1";
    figures->add_option("preset", preset, "figure1 or figure2")
        ->check(CLI::IsMember({"figure1", "figure2"}))
        ->capture_default_str();

    std::vector<int> only;
    double variance_scale = 1.0;
    verify->add_option("--only", only, "criteria to run (1-12)")->check(CLI::Range(1, 12))->delimiter(',');
    verify->add_option("--variance-scale", variance_scale,
                       "multiply the reference variance of criterion 1 (sensitivity check)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    namespace bl = bridgelab;
    try {
        const auto from_file = [&] { return resolve(flags, bl::load_config(flags.config_path)); };
        if (*simulate) return report_outcome(bl::commands::simulate(from_file(), flags.threads));
        if (*law) return report_outcome(bl::commands::law(from_file(), flags.threads));
        if (*localtime) return report_outcome(bl::commands::localtime(from_file(), flags.threads));
        if (*holder) return report_outcome(bl::commands::holder(from_file(), flags.threads));
        if (*figures) {
            bl::ExperimentConfig base =
                flags.config_path.empty()
                    ? bl::figure_config(bl::figure_preset_from_string(preset), 0, bl::default_output_dir())
                    : bl::load_config(flags.config_path);
            const bl::ExperimentConfig config = resolve(flags, base);
            const auto s = bl::run_figures_config(config, preset, flags.threads);
            std::cout << bl::report::summary_json(s);
            return s.all_pass() ? kOk : kChecksFailed;
        }
        if (*verify) {
            const bl::ExperimentConfig config =
                resolve(flags, flags.config_path.empty() ? bl::verify::default_verify_config(bl::default_output_dir())
                                                         : bl::load_config(flags.config_path));
            bl::verify::VerifyOptions options;
            options.variance_scale = variance_scale;
            options.threads = flags.threads;
            options.only = only;
            options.on_result = [](const bl::verify::CheckResult& r) {
                std::printf("[%s] %2d %s\n", r.pass ? "PASS" : "FAIL", r.criterion, r.name.c_str());
                std::fflush(stdout);
            };
            const auto s = bl::verify::run_verify_suite(config, options);
            std::printf("verify: %s (%.1f s), report in %s/verify_summary.json\n",
                        s.all_pass() ? "all checks passed" : "some checks FAILED", s.wall_time,
                        config.outputs.c_str());
            return s.all_pass() ? kOk : kChecksFailed;
        }
    } catch (const bl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const bl::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
