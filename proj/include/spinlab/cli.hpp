#pragma once

// Command-line orchestration: run a configured experiment into an output
// directory and write its manifest.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinlab/config.hpp"

namespace spinlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitRuntime = 3;

inline constexpr const char* kVersion = "0.1.0";

/// Worker count: SPINLAB_THREADS, else the config's `threads`, else the
/// OpenMP default. Applies it and returns the value in effect.
int apply_thread_setting(const Config& cfg);

/// Executes the experiment and writes its result files into `out_dir`
/// (created if missing). Returns the file names written, in order.
std::vector<std::string> run_experiment(const Config& cfg, const std::filesystem::path& out_dir);

/// `run`: validate, execute, write manifest.json. Messages go to `out`/`err`.
/// Returns kExitOk, kExitInvalid (parse or validation errors, caps) or
/// kExitRuntime.
int cli_run(const std::string& config_path, const std::optional<std::string>& output_dir, std::ostream& out,
            std::ostream& err);

/// `validate`: prints one line per violation, or "ok". Returns kExitOk when
/// the list is empty, kExitInvalid otherwise.
int cli_validate(const std::string& config_path, std::ostream& out);

}  // namespace spinlab
