//! Command-line front end: simulate, classify, verify.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "curvedmag/dynamics.hpp"
#include "curvedmag/geometry.hpp"

namespace curvedmag::cli {

inline constexpr const char* kOutputDirEnv = "CURVEDMAG_OUTPUT_DIR";

enum ExitCode : int { kOk = 0, kParseError = 1, kAborted = 2, kVerifyFailed = 3 };

struct SimConfig {
    SpaceModel model = SpaceModel::Hyperbolic;
    double b_field = 0;
    std::optional<double> lambda;  // relativistic mode when set
    CylState initial;
    double t_end = 1.0;
    StepControl step;
    std::size_t stride = 1;
    std::string output = "trajectory.csv";

    //! B entering the equations: lambda * B in relativistic mode.
    double effective_b() const;
};

//! `key = value` lines with `#` comments. Throws Error(ConfigError).
SimConfig parse_config(std::istream& in);
SimConfig load_config(const std::filesystem::path& path);

//! Relative paths resolve against $CURVEDMAG_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output(const std::string& output);

void write_csv(std::ostream& out, SpaceModel m, double B, const Trajectory& tr);
void write_summary(std::ostream& out, const SimConfig& cfg, const Trajectory& tr);

int cmd_simulate(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
int cmd_classify(const std::string& model, double B, double I, double A, double epsilon,
                 std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& suite, std::uint64_t seed, std::size_t n_cases, std::ostream& out,
               std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace curvedmag::cli
