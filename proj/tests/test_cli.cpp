#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "bridgelab/commands.hpp"
#include "bridgelab/config.hpp"
#include "bridgelab/csv.hpp"
#include "bridgelab/errors.hpp"
#include "bridgelab/presets.hpp"
#include "bridgelab/report.hpp"
#include "bridgelab/verify.hpp"

namespace fs = std::filesystem;
using namespace bridgelab;

namespace {

const std::string kMinimal = "drift.family = power\ndrift.beta = 1\nT = 2\nh = 0.01\n";

std::string scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("bridgelab_test_" + name);
    fs::remove_all(p);
    return p.string();
}

std::string source_path(const std::string& rel) { return std::string(BRIDGELAB_SOURCE_DIR) + "/" + rel; }

int run_cli(const std::string& args) {
    const int status = std::system((std::string(BRIDGELAB_CLI) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_error_key(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "";
}

}  // namespace

TEST(Config, MinimalGetsDefaults) {
    const ExperimentConfig c = parse_config(kMinimal);
    EXPECT_EQ(c.drift.family, DriftFamily::power);
    EXPECT_EQ(c.drift.beta, 1.0);
    EXPECT_EQ(c.T, 2.0);
    EXPECT_EQ(c.h, 0.01);
    EXPECT_EQ(c.scheme, Scheme::euler);
    EXPECT_EQ(c.n_paths, 1u);
    EXPECT_EQ(c.seed, 0u);
    EXPECT_EQ(c.localtime.estimator, Estimator::kernel);
    EXPECT_EQ(c.holder.levels, 257u);
    EXPECT_FALSE(c.outputs.empty());
    EXPECT_EQ(c.drift_variants().size(), 1u);
}

TEST(Config, CommentsAndLists) {
    const ExperimentConfig c = parse_config("# header\n" + kMinimal + "sweep.beta = 1, 2.5 # two panels\n" +
                                            "localtime.eps_ladder = 0.1,0.01\n");
    EXPECT_EQ(c.beta_sweep, (std::vector<double>{1.0, 2.5}));
    EXPECT_EQ(c.localtime.eps_ladder, (std::vector<double>{0.1, 0.01}));
    EXPECT_EQ(c.drift_variants().size(), 2u);
}

TEST(Config, ErrorsNameTheKey) {
    EXPECT_EQ(config_error_key("drift.family = power\ndrift.beta = 1\nT = 2\nh = 0\n"), "h");
    EXPECT_EQ(config_error_key("drift.family = power\ndrift.beta = 1\nT = 2\n"), "h");
    EXPECT_EQ(config_error_key("drift.family = power\ndrift.beta = 1\nh = 0.1\n"), "T");
    EXPECT_EQ(config_error_key(kMinimal + "n_paths = many\n"), "n_paths");
    EXPECT_EQ(config_error_key(kMinimal + "bogus = 1\n"), "bogus");
    EXPECT_EQ(config_error_key(kMinimal + "T = 3\n"), "T");
    EXPECT_EQ(config_error_key(kMinimal + "scheme = midpoint\n"), "scheme");
    EXPECT_EQ(config_error_key(kMinimal + "localtime.eps_ladder = 0.01, 0.1\n"), "localtime.eps_ladder");
    EXPECT_EQ(config_error_key("drift.family = power\nT = 2\nh = 0.01\n").rfind("drift", 0), 0u);
    EXPECT_THROW(parse_config("just some words\n"), ConfigError);
}

TEST(Config, SerializeRoundTrip) {
    ExperimentConfig c = parse_config(kMinimal);
    c.beta_sweep = {1.0, 3.0};
    c.scheme = Scheme::exact;
    c.n_paths = 17;
    c.seed = 123456789012345ull;
    c.outputs = "some/dir";
    c.localtime.x = -0.25;
    c.localtime.estimator = Estimator::binned;
    c.localtime.eps_ladder = {0.1, 0.001};
    c.localtime.checkpoints = {0.5, 1.0, 2.0};
    c.holder.scales = {0.25, 0.125, 0.0625};
    c.holder.R = 2.0;
    c.law.times = {0.1, 0.2};
    const ExperimentConfig back = parse_config(serialize_config(c));
    EXPECT_EQ(back, c);
    EXPECT_EQ(config_digest(back), config_digest(c));
    EXPECT_EQ(config_digest(c).size(), 16u);
}

TEST(Config, DigestTracksEveryField) {
    const ExperimentConfig base = parse_config(kMinimal);
    const std::string d = config_digest(base);
    auto changed = [&](auto mutate) {
        ExperimentConfig c = base;
        mutate(c);
        return config_digest(c) != d;
    };
    EXPECT_TRUE(changed([](ExperimentConfig& c) { c.seed = 1; }));
    EXPECT_TRUE(changed([](ExperimentConfig& c) { c.h = 0.02; }));
    EXPECT_TRUE(changed([](ExperimentConfig& c) { c.T = 3; }));
    EXPECT_TRUE(changed([](ExperimentConfig& c) { c.drift.beta = 1.5; }));
    EXPECT_TRUE(changed([](ExperimentConfig& c) { c.scheme = Scheme::exact; }));
    EXPECT_TRUE(changed([](ExperimentConfig& c) { c.localtime.delta = 0.1; }));
    EXPECT_TRUE(changed([](ExperimentConfig& c) { c.holder.levels = 129; }));
    EXPECT_TRUE(changed([](ExperimentConfig& c) { c.law.times = {1.0}; }));
    EXPECT_FALSE(changed([](ExperimentConfig& c) { c.outputs = "elsewhere"; }));
}

TEST(Config, ShippedConfigsParse) {
    const ExperimentConfig f1 = load_config(source_path("configs/figure1.cfg"));
    EXPECT_EQ(f1.h, 0.01);
    const auto variants = f1.drift_variants();
    ASSERT_EQ(variants.size(), 2u);
    EXPECT_EQ(variants[0].beta, 0.8);
    EXPECT_EQ(variants[1].beta, 2.0);
    for (const char* name : {"figure2", "simulate", "law", "localtime", "holder", "verify"}) {
        EXPECT_NO_THROW(validate_config(load_config(source_path(std::string("configs/") + name + ".cfg")))) << name;
    }
    EXPECT_THROW(load_config("/nonexistent/file.cfg"), std::runtime_error);
}

TEST(Config, ShippedFigureConfigsMatchPresets) {
    for (FigurePreset p : {FigurePreset::figure1, FigurePreset::figure2}) {
        ExperimentConfig file = load_config(source_path("configs/" + to_string(p) + ".cfg"));
        const ExperimentConfig preset = figure_config(p, 0, file.outputs);
        EXPECT_EQ(file, preset) << to_string(p);
    }
}

TEST(Config, OutputDirFromEnvironment) {
    ::setenv(kOutputDirEnv, "/tmp/from_env", 1);
    EXPECT_EQ(default_output_dir(), "/tmp/from_env");
    EXPECT_EQ(parse_config(kMinimal).outputs, "/tmp/from_env");
    ::unsetenv(kOutputDirEnv);
    EXPECT_EQ(default_output_dir(), kDefaultOutputDir);
}

TEST(Csv, EmitExamples) {
    const std::string dir = scratch("csv");
    fs::create_directories(dir);
    const std::string path = dir + "/a.csv";
    csv::emit_csv({{"t", "x"}, {{1.0, 0.5}}}, path);
    EXPECT_EQ(csv::read_text_file(path), "t,x\n1,0.5\n");
    csv::emit_csv({{"t", "x"}, {}}, path);
    EXPECT_EQ(csv::read_text_file(path), "t,x\n");

    const csv::Table t{{"a", "b", "c"}, {{0.1, -1e-300, 123456789.125}, {1.0 / 3.0, 2e10, -0.0}}};
    std::vector<std::string> comments;
    csv::emit_csv(t, path, {"level=0"});
    EXPECT_EQ(csv::read_csv(path, &comments), t);
    EXPECT_EQ(comments, (std::vector<std::string>{"level=0"}));
    EXPECT_THROW(csv::emit_csv({{"t", "x"}, {{1.0}}}, path), std::invalid_argument);
    EXPECT_THROW(csv::emit_csv(t, "/nonexistent_dir/x/y.csv"), std::runtime_error);
}

TEST(Figures, ThreadCountDoesNotChangeBytes) {
    const std::string a = scratch("fig_a"), b = scratch("fig_b");
    const auto sa = run_figures_preset(FigurePreset::figure2, 4, a, 1);
    const auto sb = run_figures_preset(FigurePreset::figure2, 4, b, 3);
    for (double beta : {0.5, 1.5}) {
        const std::string name = figure_csv_name(FigurePreset::figure2, beta);
        EXPECT_EQ(csv::read_text_file(a + "/" + name), csv::read_text_file(b + "/" + name)) << name;
    }
    EXPECT_EQ(report::summary_json(sa, false), report::summary_json(sb, false));
    EXPECT_TRUE(sa.all_pass());
    EXPECT_EQ(figure_csv_name(FigurePreset::figure1, 0.8), "figure1_beta0.8.csv");
}

TEST(Commands, WriteSummaries) {
    ExperimentConfig c = parse_config(kMinimal + "n_paths = 3\nlaw.times = 0.5, 1, 2\n");
    c.outputs = scratch("commands");
    EXPECT_TRUE(commands::simulate(c, 0).all_pass());
    EXPECT_TRUE(commands::law(c, 0).all_pass());
    commands::localtime(c, 0);
    for (const char* f : {"simulate_summary.json", "law_summary.json", "localtime_summary.json", "law.csv",
                          "law_covariance.csv", "simulate_beta1_path2.csv", "localtime_path0.csv"}) {
        EXPECT_TRUE(fs::exists(c.outputs + "/" + f)) << f;
    }
    const csv::Table path = csv::read_csv(c.outputs + "/simulate_beta1_path0.csv");
    EXPECT_EQ(path.columns, (std::vector<std::string>{"t", "x", "dw"}));
    EXPECT_EQ(path.rows.size(), 201u);
    EXPECT_EQ(path.rows[0][1], 0.0);
}

TEST(Commands, UnwritableOutputIsRuntimeError) {
    ExperimentConfig c = parse_config(kMinimal);
    const std::string file = scratch("blocker");
    csv::write_text_file(file, "x");
    c.outputs = file + "/sub";
    EXPECT_THROW(commands::law(c, 0), std::runtime_error);
}

TEST(Verify, VarianceSabotageIsCaught) {
    verify::VerifyOptions opt;
    opt.only = {1};
    opt.variance_scale = 1.1;
    const ExperimentConfig c = verify::default_verify_config(scratch("verify_sabotage"));
    const report::ReportSummary s = verify::run_verify_suite(c, opt);
    EXPECT_FALSE(s.all_pass());
    EXPECT_FALSE(s.pass_flags.at("law_agreement"));
    EXPECT_TRUE(fs::exists(c.outputs + "/verify_summary.json"));

    opt.variance_scale = 1.0;
    EXPECT_TRUE(verify::run_verify_suite(c, opt).pass_flags.at("law_agreement"));
}

TEST(Verify, CriterionNames) {
    EXPECT_EQ(verify::criterion_name(1), "law_agreement");
    EXPECT_EQ(verify::criterion_name(12), "figures_reproduction");
    EXPECT_THROW(verify::criterion_name(13), std::out_of_range);
}

TEST(Cli, ExitCodes) {
    const std::string out = scratch("cli");
    EXPECT_EQ(run_cli("verify --only 1 --out " + out), 0);
    EXPECT_EQ(run_cli("verify --only 1 --variance-scale 1.1 --out " + out), 1);
    EXPECT_EQ(run_cli("verify --only 13"), 2);
    EXPECT_EQ(run_cli("nonsense"), 2);
    EXPECT_EQ(run_cli("law"), 2);

    const std::string bad = scratch("bad.cfg");
    csv::write_text_file(bad, "drift.family = power\ndrift.beta = 1\nT = 1\nh = 0\n");
    EXPECT_EQ(run_cli("law --config " + bad + " --out " + out), 2);
    EXPECT_EQ(run_cli("law --config /nonexistent.cfg"), 3);
    EXPECT_EQ(run_cli("law --config " + source_path("configs/law.cfg") + " --out " + out), 0);
    EXPECT_TRUE(fs::exists(out + "/law_summary.json"));
}

TEST(Cli, FiguresConfigMatchesPreset) {
    const std::string a = scratch("cli_fig_a"), b = scratch("cli_fig_b");
    ASSERT_EQ(run_cli("figures figure1 --out " + a), 0);
    ASSERT_EQ(run_cli("figures figure1 --config " + source_path("configs/figure1.cfg") + " --out " + b), 0);
    for (const char* f : {"figure1_beta0.8.csv", "figure1_beta2.csv"})
        EXPECT_EQ(csv::read_text_file(a + "/" + f), csv::read_text_file(b + "/" + f)) << f;
}
