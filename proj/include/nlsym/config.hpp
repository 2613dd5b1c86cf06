#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlsym/analysis.hpp"
#include "nlsym/grid.hpp"
#include "nlsym/suite.hpp"

namespace nlsym {

/// A config file could not be read or an output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { CompareStationary, CompareEvolution, Sweep, Corollary, CltDecay, CheckInequalities };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command command);

/// Geometry of Omega.
///
///   interval   lo, hi (scalars, N = 1)
///   rectangle  lo, hi (one value per axis)
///   boxes      union of boxes, "lo0 .. hi0 ..; lo0 .. hi0 .." (2N numbers each)
///   ball       center, radius (open disc / interval)
///   file       mask of a field table written by write_field_table
struct DomainSpec {
  std::string shape = "interval";
  Point lo{-1.0, -1.0};
  Point hi{1.0, 1.0};
  std::vector<std::pair<Point, Point>> boxes;
  Point center{0.0, 0.0};
  double radius = 1.0;
  std::string file;
};

/// Data profile on Omega: zero, constant, bump (value * exp(-|x-center|^2 / 2 width^2)),
/// paraboloid (value * max(0, 1 - |x-center|^2 / width^2)) or file.
struct ProfileSpec {
  std::string profile = "zero";
  double value = 1.0;
  Point center{0.0, 0.0};
  double width = 0.5;
  std::string file;
};

inline ProfileSpec constant_profile() {
  ProfileSpec spec;
  spec.profile = "constant";
  return spec;
}

/// Parsed experiment description. Every key lives in a `[section]` of an INI
/// file; `entries` keeps the flattened "section.key" text so that a run can be
/// written back out as a replay config.
struct ExperimentConfig {
  Command command = Command::CompareStationary;
  std::uint64_t seed = 0;
  bool strict = false;

  int dimension = 1;
  double half_extent = 2.0;
  int cells = 257;

  KernelChoice kernel{};
  double epsilon = 0.5;
  std::vector<double> epsilons{0.4, 0.2, 0.1};

  double c = 0.0;
  double p = 2.0;
  double horizon = 0.0;
  double tau = 0.0;
  SolverSettings solver{};
  double diffusivity = 1.0;

  DomainSpec domain{};
  ProfileSpec forcing = constant_profile();
  ProfileSpec initial{};

  /// Randomized suite: instances > 0 replaces domain/forcing/parameters by
  /// instances first_index .. first_index + instances - 1.
  std::size_t instances = 0;
  std::size_t first_index = 0;
  SuiteOptions suite{};
  double tau_fraction = 0.9;

  int k_max = 256;
  double mass_radius = 1.0;
  int monotone_from = 4;
  double mass_threshold = 0.05;
  std::vector<int> gaussian_ks{4, 16, 64, 256};
  double gaussian_threshold = 0.02;
  double clt_h = 1.0 / 64.0;

  /// "literal" checks riesz_gap(f1, f2, f3) on three random fields, "kernel"
  /// replaces the middle factor by its rearrangement.
  std::string riesz_form = "literal";

  std::map<std::string, std::string> entries;
  std::vector<std::string> syntax_errors;  ///< from reading the text itself
  std::vector<std::string> parse_errors;   ///< syntax errors plus unknown keys and malformed values
};

/// Parses INI text. Syntax errors, unknown keys and malformed values are
/// collected in parse_errors rather than thrown.
ExperimentConfig parse_config_text(const std::string& text);
/// Throws IoError if the file cannot be read.
ExperimentConfig load_config(const std::string& path);

/// Re-parses the config with one entry replaced.
ExperimentConfig with_entry(const ExperimentConfig& config, const std::string& key, const std::string& value);

/// INI text of the entries, sections and keys in sorted order.
std::string render_config(const ExperimentConfig& config);

/// Every reason the config cannot run, empty iff run would start computing.
std::vector<std::string> validate(const ExperimentConfig& config);

GridSpec config_grid(const ExperimentConfig& config);
DomainMask build_domain(const ExperimentConfig& config, const GridSpec& grid);
GridField build_profile(const ProfileSpec& spec, const DomainMask& domain);

}  // namespace nlsym
