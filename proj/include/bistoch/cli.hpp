#pragma once

// Command-line front end.
//
//   bistoch <command> [--key value ...] [--config FILE]
//
// FILE holds one `key = value` per line with the same keys as the flags
// (without the leading dashes); flags override file values and unknown keys
// are rejected. Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bistoch/experiments.hpp"

namespace bistoch {

enum class Command { Generate, Sweep, Pointwise, Embed, SkDiag, Moments };

std::string to_string(Command c);

class UsageError : public std::invalid_argument {
public:
    UsageError(const std::string& key, const std::string& message)
        : std::invalid_argument(key.empty() ? message : "--" + key + ": " + message), key_(key) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct RunConfig {
    Command command = Command::Pointwise;

    std::size_t n = 3000;
    std::optional<std::size_t> m;  // ambient dimension; unset means native (clean) or 2000 (noisy)
    double epsilon = 5e-4;
    std::vector<double> epsilons;  // sweep grid
    DensityKind density = DensityKind::Sinusoidal1D;
    std::optional<NoiseModel> noise;

    SkConfig sk{};
    LaplacianKind laplacian = LaplacianKind::BistochUn;
    Convention convention = Convention::Normalized;
    int intrinsic_dim = 1;
    std::optional<int> moment_dim;  // moments: all of 1..3 when unset

    std::size_t replicas = 20;
    std::uint64_t seed = 1;
    std::size_t slope_points = 3;

    std::string output = "-";
    std::optional<std::string> fixture;       // skdiag: matrix CSV instead of generated data
    std::optional<std::string> matrix_dump;   // affinity CSV (generate, pointwise, skdiag)
    std::optional<std::string> slope_output;  // sweep: slope JSON
    std::optional<std::string> eigen_output;  // embed: eigenpairs of replica 0 (bistochastic)
};

// `start:stop:Klog` (K log-spaced values), `start:stop:Klin`, or a
// comma-separated list.
std::vector<double> parse_grid(const std::string& text);

// args excludes the program name. Throws UsageError.
RunConfig parse_config(const std::vector<std::string>& args);

// Writes the command's CSV/JSON output (to `out` when cfg.output is "-")
// and a one-line summary on `log`. Errors propagate as exceptions.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& log);

// parse_config + run with error reporting and exit-code mapping.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string usage_text();

}  // namespace bistoch
