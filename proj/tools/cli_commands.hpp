#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pvem/study.hpp"

namespace pvem::cli {

enum ExitCode : int { kSuccess = 0, kNumericalFailure = 1, kConfigError = 2 };

/// Environment variable that supplies the output directory when --output-dir is absent.
inline constexpr const char* kOutputDirEnv = "PVEM_OUTPUT_DIR";

/// Writes <family>_<resolution>.mesh and the matching regularity report.
void cmd_mesh_gen(const RunConfig& config, std::ostream& out);

/// Writes errors.csv and summary.txt, plus snapshots.txt, local_matrices.txt
/// and solution_t<time>.csv when requested.
void cmd_run(const RunConfig& config, std::ostream& out);

/// Writes convergence_<axis>.csv and prints the fitted slope.
void cmd_convergence(const StudyConfig& study, std::ostream& out);

/// Parses "key=value" lines ('#' comments, blank lines ignored) into
/// "--key=value" arguments. Throws ConfigError on a malformed line.
std::vector<std::string> read_config_file(const std::string& path);

/// Full command-line entry point; returns the process exit code.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace pvem::cli
