#pragma once

#include <string>
#include <vector>

#include "nlsym/config.hpp"

namespace nlsym {

enum class ExitStatus : int {
  Ok = 0,
  ContractFailure = 1,  ///< some asserted inequality or contract failed
  ConfigRejected = 2,   ///< validation failed, nothing was computed
  IoFailure = 3,
  ComputeFailure = 4,  ///< a solver or kernel construction threw
};

struct RunOptions {
  std::string out_dir;
  unsigned threads = 1;
};

struct RunResult {
  ExitStatus status = ExitStatus::Ok;
  std::size_t rows = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;
};

/// Column header of report.csv for compare-stationary, compare-evolution and corollary.
extern const char* const kComparisonHeader;
extern const char* const kSweepHeader;
extern const char* const kDecayHeader;
extern const char* const kInequalityHeader;

/// Runs one experiment and writes into out_dir:
///
///   report.csv      one row per instance (or per epsilon / per k)
///   summary.txt     aggregate key = value lines, deterministic
///   metadata.txt    timestamps and thread count, the only non-reproducible file
///   fields/         solution tables of single-instance comparisons
///   failures/       manifest.csv and one replay config per failing instance
///
/// Data files depend only on the config, never on the thread count.
RunResult run(const ExperimentConfig& config, const RunOptions& options);

}  // namespace nlsym
