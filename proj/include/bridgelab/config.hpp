#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bridgelab/drift.hpp"
#include "bridgelab/local_time.hpp"
#include "bridgelab/simulate.hpp"

namespace bridgelab {

struct LocalTimeBlock {
    double x = 0.0;
    Estimator estimator = Estimator::kernel;
    /// Kernel variance; 0 means eps = h.
    double eps = 0.0;
    /// Half-width of the binned estimator.
    double delta = 0.05;
    /// Strictly decreasing; empty skips the Cauchy diagnostic.
    std::vector<double> eps_ladder;
    /// Empty means the horizon T only.
    std::vector<double> checkpoints;

    bool operator==(const LocalTimeBlock&) const = default;
};

struct HolderBlock {
    /// Time-modulus scales; empty means 2^-6 .. 2^-14.
    std::vector<double> scales;
    double R = 1.0;
    std::size_t levels = 257;

    bool operator==(const HolderBlock&) const = default;
};

struct LawBlock {
    std::vector<double> times;

    bool operator==(const LawBlock&) const = default;
};

/// Parsed key = value experiment description. Lines are `key = value`,
/// `#` starts a comment, lists are comma separated.
///
/// Required: drift.family (plus drift.beta for power / exponential), T, h.
struct ExperimentConfig {
    DriftSpec drift;
    /// Extra beta values run with the same family, e.g. one figure panel each.
    std::vector<double> beta_sweep;
    Scheme scheme = Scheme::euler;
    double T = 0.0;
    double h = 0.0;
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
    std::string outputs;
    LocalTimeBlock localtime;
    HolderBlock holder;
    LawBlock law;

    /// drift.beta followed by sweep.beta, without duplicates.
    std::vector<DriftSpec> drift_variants() const;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Environment variable consulted for the default `outputs` directory.
inline constexpr const char* kOutputDirEnv = "BRIDGELAB_OUT";
inline constexpr const char* kDefaultOutputDir = "bridgelab_out";

std::string default_output_dir();

/// Throws ConfigError naming the offending key.
ExperimentConfig parse_config(std::string_view source);
ExperimentConfig load_config(const std::string& path);

void validate_config(const ExperimentConfig& config);

/// Canonical text: every field, fixed key order, shortest round-trip numbers.
/// parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// 64-bit FNV-1a of the canonical text, as 16 hex digits. The output
/// directory is not part of it.
std::string config_digest(const ExperimentConfig& config);

}  // namespace bridgelab
