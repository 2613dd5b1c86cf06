#include "nlsym/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "nlsym/error.hpp"
#include "nlsym/field_io.hpp"
#include "nlsym/kernel.hpp"
#include "nlsym/rearrange.hpp"

namespace nlsym {

const char* const kComparisonHeader =
    "index,seed,dimension,cells,epsilon,c,p,norm_original,norm_symmetrized,gap,slack,radial_violation,radial_tol,"
    "radial_verdict,failing_steps,iterations_original,iterations_symmetrized,status";
const char* const kSweepHeader = "epsilon,error_original,error_symmetrized,iterations_original,iterations_symmetrized,status";
const char* const kDecayHeader = "k,mass";
const char* const kInequalityHeader =
    "index,seed,dimension,cells,equimeasurable,norm1_error,norm2_error,norminf_error,hardy_littlewood_gap,riesz_gap,"
    "status";

namespace {

namespace fs = std::filesystem;

// Tolerance for identities that hold up to floating-point summation.
constexpr double kSummationTol = 1e-12;
// Per-step growth allowed along a convergence sweep.
constexpr double kSweepSlack = 0.10;

/// Thrown while building inputs; maps to the config-rejected or I/O status.
struct SetupError {
  ExitStatus status;
  std::string message;
};

struct Outcome {
  std::string row;
  bool failed = false;
  bool error = false;
  std::string reason;
  std::uint64_t seed = 0;
  double gap = kInfinity;
  bool radial_ok = true;
};

struct Collected {
  std::string header;
  std::vector<Outcome> outcomes;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::pair<std::string, std::string>> extra_files;  ///< relative path, content
  std::vector<std::pair<std::string, GridField>> fields;
};

std::string fmt(double v) { return format_double(v); }

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream s;
  s << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::jthread> pool;
  const unsigned extra = std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)) - 1;
  for (unsigned t = 0; t < extra; ++t) pool.emplace_back(worker);
  worker();
}

/// Runs f, turning library exceptions into an error outcome.
template <typename F>
Outcome guarded(std::size_t index, std::uint64_t seed, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    Outcome o;
    o.error = true;
    o.failed = true;
    o.seed = seed;
    o.reason = std::string("error: ") + e.what();
    o.row = std::to_string(index) + "," + std::to_string(seed) + ",error";
    return o;
  }
}

Outcome comparison_outcome(std::size_t index, std::uint64_t seed, const ComparisonReport& r, bool has_epsilon,
                           bool strict) {
  Outcome o;
  o.seed = seed;
  o.gap = r.gap;
  o.radial_ok = r.radial_verdict;
  o.failed = !r.holds(strict);
  if (o.failed) {
    std::vector<std::string> why;
    if (r.gap < -(strict ? 0.0 : r.slack)) why.push_back("gap " + fmt(r.gap) + " below -slack " + fmt(-r.slack));
    if (r.failing_steps > 0 || (strict && r.min_step_gap < 0.0))
      why.push_back("per-step gap " + fmt(r.min_step_gap) + " in " + std::to_string(r.failing_steps) + " steps");
    if (!r.radial_verdict)
      why.push_back("radial violation " + fmt(r.radial_violation) + " above " + fmt(r.radial_tol));
    for (std::size_t i = 0; i < why.size(); ++i) o.reason += (i ? "; " : "") + why[i];
  }
  std::ostringstream row;
  row << index << ',' << seed << ',' << r.dimension << ',' << r.domain_cells << ','
      << (has_epsilon ? fmt(r.epsilon) : "") << ',' << fmt(r.c) << ',' << fmt(r.p) << ',' << fmt(r.norm_original)
      << ',' << fmt(r.norm_symmetrized) << ',' << fmt(r.gap) << ',' << fmt(r.slack) << ','
      << fmt(r.radial_violation) << ',' << fmt(r.radial_tol) << ',' << (r.radial_verdict ? "true" : "false") << ','
      << r.failing_steps << ',' << r.original_report.iterations << ',' << r.symmetrized_report.iterations << ','
      << (o.failed ? "fail" : "pass");
  o.row = row.str();
  return o;
}

DomainMask setup_domain(const ExperimentConfig& config, const GridSpec& grid) {
  try {
    return build_domain(config, grid);
  } catch (const std::ios_base::failure& e) {
    throw SetupError{ExitStatus::IoFailure, e.what()};
  } catch (const InvalidArgument& e) {
    const bool io = config.domain.shape == "file" && !fs::exists(config.domain.file);
    throw SetupError{io ? ExitStatus::IoFailure : ExitStatus::ConfigRejected, e.what()};
  }
}

GridField setup_profile(const ProfileSpec& spec, const DomainMask& domain) {
  if (spec.profile == "file" && !fs::exists(spec.file))
    throw SetupError{ExitStatus::IoFailure, "cannot read field '" + spec.file + "'"};
  try {
    return build_profile(spec, domain);
  } catch (const std::ios_base::failure& e) {
    throw SetupError{ExitStatus::IoFailure, e.what()};
  } catch (const InvalidArgument& e) {
    throw SetupError{ExitStatus::ConfigRejected, e.what()};
  }
}

void add_comparison_summary(Collected& out) {
  double min_gap = kInfinity;
  std::size_t radial_failures = 0;
  for (const Outcome& o : out.outcomes) {
    if (!o.error) min_gap = std::min(min_gap, o.gap);
    if (!o.error && !o.radial_ok) ++radial_failures;
  }
  out.summary.emplace_back("min_gap", fmt(min_gap));
  out.summary.emplace_back("radial_failures", std::to_string(radial_failures));
}

Collected run_compare(const ExperimentConfig& config, unsigned threads) {
  Collected out;
  out.header = kComparisonHeader;
  const bool evolution = config.command == Command::CompareEvolution;
  if (config.instances > 0) {
    out.outcomes.resize(config.instances);
    parallel_for(config.instances, threads, [&](std::size_t k) {
      const std::size_t index = config.first_index + k;
      const std::uint64_t seed = instance_seed(config.seed, index);
      out.outcomes[k] = guarded(index, seed, [&] {
        if (evolution) {
          const EvolutionInstance in = make_evolution_instance(config.seed, index, config.suite, config.tau_fraction);
          const ComparisonReport r = compare_evolution(in.domain, in.forcing, in.initial, in.epsilon, in.c, in.horizon,
                                                       in.tau, in.p, in.kernel);
          return comparison_outcome(index, seed, r, true, config.strict);
        }
        const StationaryInstance in = make_stationary_instance(config.dimension, config.seed, index, config.suite);
        const ComparisonReport r =
            compare_stationary(in.domain, in.forcing, in.epsilon, in.c, in.p, in.kernel, config.solver);
        return comparison_outcome(index, seed, r, true, config.strict);
      });
    });
    add_comparison_summary(out);
    return out;
  }

  const GridSpec grid = config_grid(config);
  const DomainMask domain = setup_domain(config, grid);
  const GridField forcing = setup_profile(config.forcing, domain);
  const GridField initial = evolution ? setup_profile(config.initial, domain) : GridField(domain);
  out.outcomes.push_back(guarded(0, config.seed, [&] {
    ComparisonReport r;
    if (evolution) {
      r = compare_evolution(domain, {forcing}, initial, config.epsilon, config.c, config.horizon, config.tau, config.p,
                            config.kernel);
      std::ostringstream steps;
      steps << "n,t,norm_original,norm_symmetrized\n";
      for (std::size_t n = 0; n < r.step_norms_original.size(); ++n)
        steps << n << ',' << fmt(static_cast<double>(n) * config.tau) << ',' << fmt(r.step_norms_original[n]) << ','
              << fmt(r.step_norms_symmetrized[n]) << '\n';
      out.extra_files.emplace_back("steps.csv", steps.str());
    } else {
      r = compare_stationary(domain, forcing, config.epsilon, config.c, config.p, config.kernel, config.solver);
    }
    out.fields.emplace_back("fields/original.csv", *r.original_solution);
    out.fields.emplace_back("fields/symmetrized.csv", *r.symmetrized_solution);
    return comparison_outcome(0, config.seed, r, true, config.strict);
  }));
  add_comparison_summary(out);
  return out;
}

Collected run_corollary(const ExperimentConfig& config) {
  Collected out;
  out.header = kComparisonHeader;
  const GridSpec grid = config_grid(config);
  const DomainMask domain = setup_domain(config, grid);
  const GridField forcing = setup_profile(config.forcing, domain);
  out.outcomes.push_back(guarded(0, config.seed, [&] {
    const ComparisonReport r = corollary_check(domain, forcing, config.c, config.p, config.solver.tol,
                                               config.diffusivity);
    out.fields.emplace_back("fields/original.csv", *r.original_solution);
    out.fields.emplace_back("fields/symmetrized.csv", *r.symmetrized_solution);
    return comparison_outcome(0, config.seed, r, false, config.strict);
  }));
  add_comparison_summary(out);
  return out;
}

Collected run_sweep(const ExperimentConfig& config) {
  Collected out;
  out.header = kSweepHeader;
  const GridSpec grid = config_grid(config);
  const DomainMask domain = setup_domain(config, grid);
  const GridField forcing = setup_profile(config.forcing, domain);
  std::vector<SweepRow> rows;
  try {
    rows = convergence_sweep(domain, forcing, config.c, config.p, config.kernel, config.epsilons, config.solver);
  } catch (const std::exception& e) {
    Outcome o;
    o.error = o.failed = true;
    o.reason = std::string("error: ") + e.what();
    o.row = ",,,,,error";
    out.outcomes.push_back(o);
    return out;
  }
  const double growth = config.strict ? 1.0 : 1.0 + kSweepSlack;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& s = rows[i];
    Outcome o;
    o.seed = config.seed;
    if (i > 0) {
      const SweepRow& prev = rows[i - 1];
      if (s.error_original > growth * prev.error_original) {
        o.failed = true;
        o.reason = "original error grew from " + fmt(prev.error_original) + " to " + fmt(s.error_original);
      }
      if (s.error_symmetrized > growth * prev.error_symmetrized) {
        o.failed = true;
        o.reason += (o.reason.empty() ? "" : "; ") + std::string("symmetrized error grew from ") +
                    fmt(prev.error_symmetrized) + " to " + fmt(s.error_symmetrized);
      }
    }
    std::ostringstream row;
    row << fmt(s.epsilon) << ',' << fmt(s.error_original) << ',' << fmt(s.error_symmetrized) << ','
        << s.iterations_original << ',' << s.iterations_symmetrized << ',' << (o.failed ? "fail" : "pass");
    o.row = row.str();
    out.outcomes.push_back(o);
  }
  out.summary.emplace_back("diffusivity", fmt(nonlocal_limit_diffusivity(grid.dimension())));
  if (!rows.empty()) {
    out.summary.emplace_back("final_error_original", fmt(rows.back().error_original));
    out.summary.emplace_back("final_error_symmetrized", fmt(rows.back().error_symmetrized));
  }
  return out;
}

Collected run_clt(const ExperimentConfig& config) {
  Collected out;
  out.header = kDecayHeader;
  const int k_reach = std::max(config.k_max, config.gaussian_ks.empty() ? 1 : config.gaussian_ks.back());
  const double support = config.epsilon * config.kernel.support_radius;
  std::vector<double> masses;
  std::vector<double> deviations;
  try {
    const int n = cells_for_convolution_power(support, k_reach, config.clt_h);
    const GridSpec grid(config.dimension, 0.5 * n * config.clt_h, n);
    const RescaledKernel rk = rescale(make_kernel(config.kernel.profile, config.kernel.support_radius, grid),
                                      config.epsilon);
    masses = ball_mass_decay(rk, config.mass_radius, config.k_max);
    if (!config.gaussian_ks.empty()) deviations = gaussian_deviations(rk, config.gaussian_ks);
    out.summary.emplace_back("cells_per_axis", std::to_string(n));
  } catch (const std::exception& e) {
    Outcome o;
    o.error = o.failed = true;
    o.reason = std::string("error: ") + e.what();
    o.row = ",error";
    out.outcomes.push_back(o);
    return out;
  }

  for (std::size_t i = 0; i < masses.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    Outcome o;
    o.seed = config.seed;
    if (k > config.monotone_from && masses[i] > masses[i - 1]) {
      o.failed = true;
      o.reason = "mass increased at k = " + std::to_string(k);
    }
    if (k == config.k_max && !(masses[i] < config.mass_threshold)) {
      o.failed = true;
      o.reason += (o.reason.empty() ? "" : "; ") + std::string("mass ") + fmt(masses[i]) + " at k_max is not below " +
                  fmt(config.mass_threshold);
    }
    o.row = std::to_string(k) + ',' + fmt(masses[i]);
    out.outcomes.push_back(o);
  }
  out.summary.emplace_back("final_mass", fmt(masses.back()));
  if (config.k_max >= 64) out.summary.emplace_back("ratio_m64_m16", fmt(masses[63] / masses[15]));

  if (!deviations.empty()) {
    std::ostringstream g;
    g << "k,deviation\n";
    bool decreasing = true;
    for (std::size_t i = 0; i < deviations.size(); ++i) {
      g << config.gaussian_ks[i] << ',' << fmt(deviations[i]) << '\n';
      if (i > 0 && !(deviations[i] < deviations[i - 1])) decreasing = false;
    }
    out.extra_files.emplace_back("gaussian.csv", g.str());
    out.summary.emplace_back("gaussian_deviation_decreasing", decreasing ? "true" : "false");
    out.summary.emplace_back("final_gaussian_deviation", fmt(deviations.back()));
    const bool small = deviations.back() < config.gaussian_threshold;
    if (!decreasing || !small) {
      Outcome o;
      o.failed = true;
      o.reason = !decreasing ? "gaussian deviation is not strictly decreasing"
                             : "gaussian deviation " + fmt(deviations.back()) + " is not below " +
                                   fmt(config.gaussian_threshold);
      out.outcomes.push_back(o);
    }
  }
  return out;
}

GridField random_inequality_field(const GridSpec& grid, Rng& rng) {
  const double density = rng.uniform(0.2, 1.0);
  const bool quantized = rng.uniform() < 0.3;
  std::vector<CellIndex> cells;
  std::vector<double> values;
  for (CellIndex c = 0; c < grid.cell_count(); ++c) {
    if (rng.uniform() >= density) continue;
    double v = rng.uniform();
    if (quantized) v = std::floor(8.0 * v) / 8.0;
    cells.push_back(c);
    values.push_back(v);
  }
  if (cells.empty()) {
    cells.push_back(rng.index(grid.cell_count()));
    values.push_back(1.0);
  }
  return GridField(DomainMask(grid, std::move(cells)), values);
}

Collected run_inequalities(const ExperimentConfig& config, unsigned threads) {
  Collected out;
  out.header = kInequalityHeader;
  const GridSpec grid = config_grid(config);
  out.outcomes.resize(config.instances);
  parallel_for(config.instances, threads, [&](std::size_t k) {
    const std::size_t index = config.first_index + k;
    const std::uint64_t seed = instance_seed(config.seed, index);
    out.outcomes[k] = guarded(index, seed, [&] {
      Rng rng(seed);
      const GridField f1 = random_inequality_field(grid, rng);
      GridField f2 = random_inequality_field(grid, rng);
      const GridField f3 = random_inequality_field(grid, rng);
      if (config.riesz_form == "kernel") f2 = schwarz_rearrange(f2);
      const GridField s1 = schwarz_rearrange(f1);
      const bool equi = check_equimeasurable(f1, s1);
      double norm_errors[3];
      const double ps[3] = {1.0, 2.0, kInfinity};
      for (int i = 0; i < 3; ++i) {
        const double a = lp_norm(f1, ps[i]);
        norm_errors[i] = a == 0.0 ? 0.0 : std::abs(lp_norm(s1, ps[i]) - a) / a;
      }
      const double hl = hardy_littlewood_gap(f1, f2);
      const double hl_scale = std::max(1.0, inner_product(schwarz_rearrange(f1), schwarz_rearrange(f2)));
      const double riesz = riesz_gap(f1, f2, f3);
      const double riesz_scale = std::max(1.0, lp_norm(f1, 1.0) * lp_norm(f2, 1.0) * lp_norm(f3, kInfinity));

      Outcome o;
      o.seed = seed;
      o.gap = grid.dimension() == 1 ? std::min(hl, riesz) : hl;
      std::vector<std::string> why;
      if (!equi) why.push_back("not equimeasurable");
      for (int i = 0; i < 3; ++i)
        if (norm_errors[i] > kSummationTol) why.push_back("norm p=" + fmt(ps[i]) + " differs by " + fmt(norm_errors[i]));
      if (hl < -kSummationTol * hl_scale) why.push_back("Hardy-Littlewood gap " + fmt(hl));
      if (grid.dimension() == 1 && riesz < -kSummationTol * riesz_scale) why.push_back("Riesz gap " + fmt(riesz));
      o.failed = !why.empty();
      for (std::size_t i = 0; i < why.size(); ++i) o.reason += (i ? "; " : "") + why[i];
      std::ostringstream row;
      row << index << ',' << seed << ',' << grid.dimension() << ',' << f1.mask().count() << ','
          << (equi ? "true" : "false") << ',' << fmt(norm_errors[0]) << ',' << fmt(norm_errors[1]) << ','
          << fmt(norm_errors[2]) << ',' << fmt(hl) << ',' << fmt(riesz) << ',' << (o.failed ? "fail" : "pass");
      o.row = row.str();
      return o;
    });
  });
  std::size_t riesz_negative = 0;
  for (const Outcome& o : out.outcomes)
    if (!o.error && o.reason.find("Riesz") != std::string::npos) ++riesz_negative;
  out.summary.emplace_back("riesz_form", config.riesz_form);
  out.summary.emplace_back("riesz_failures", std::to_string(riesz_negative));
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << content;
  f.close();
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

ExperimentConfig replay_config(const ExperimentConfig& config, std::size_t index) {
  ExperimentConfig replay = with_entry(config, "run.seed", std::to_string(config.seed));
  if (config.instances > 0) {
    replay = with_entry(replay, "suite.first_index", std::to_string(index));
    replay = with_entry(replay, "suite.instances", "1");
  }
  return replay;
}

}  // namespace

RunResult run(const ExperimentConfig& config, const RunOptions& options) {
  RunResult result;
  const std::vector<std::string> violations = validate(config);
  if (!violations.empty()) {
    result.status = ExitStatus::ConfigRejected;
    result.messages = violations;
    return result;
  }
  const fs::path out_dir = options.out_dir.empty() ? fs::path(".") : fs::path(options.out_dir);
  const unsigned threads = std::max(1u, options.threads);
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = timestamp();

  Collected collected;
  try {
    switch (config.command) {
      case Command::CompareStationary:
      case Command::CompareEvolution:
        collected = run_compare(config, threads);
        break;
      case Command::Corollary:
        collected = run_corollary(config);
        break;
      case Command::Sweep:
        collected = run_sweep(config);
        break;
      case Command::CltDecay:
        collected = run_clt(config);
        break;
      case Command::CheckInequalities:
        collected = run_inequalities(config, threads);
        break;
    }
  } catch (const SetupError& e) {
    result.status = e.status;
    result.messages.push_back(e.message);
    return result;
  }

  std::size_t errors = 0;
  std::ostringstream report;
  report << collected.header << '\n';
  std::ostringstream manifest;
  manifest << "index,seed,reason,replay\n";
  std::vector<std::pair<std::string, std::string>> replays;
  for (std::size_t i = 0; i < collected.outcomes.size(); ++i) {
    const Outcome& o = collected.outcomes[i];
    if (!o.row.empty()) {
      report << o.row << '\n';
      ++result.rows;
    }
    if (!o.failed) continue;
    ++result.failures;
    if (o.error) ++errors;
    const std::size_t index = config.first_index + i;
    std::string replay_name;
    if (config.instances > 0 || replays.empty()) {
      replay_name = "instance_" + std::to_string(index) + ".ini";
      replays.emplace_back(replay_name, render_config(replay_config(config, index)));
    }
    std::string reason = o.reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    manifest << index << ',' << o.seed << ',' << reason << ',' << replay_name << '\n';
    result.messages.push_back((config.instances > 0 ? "instance " : "row ") + std::to_string(index) + ": " + o.reason);
  }

  if (errors > 0)
    result.status = ExitStatus::ComputeFailure;
  else if (result.failures > 0)
    result.status = ExitStatus::ContractFailure;

  std::ostringstream summary;
  summary << "command = " << to_string(config.command) << '\n'
          << "seed = " << config.seed << '\n'
          << "strict = " << (config.strict ? "true" : "false") << '\n'
          << "rows = " << result.rows << '\n'
          << "failures = " << result.failures << '\n'
          << "errors = " << errors << '\n';
  for (const auto& [k, v] : collected.summary) summary << k << " = " << v << '\n';
  summary << "status = " << (result.status == ExitStatus::Ok ? "pass" : "fail") << '\n';

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::ostringstream metadata;
  metadata << "started = " << started_at << '\n'
           << "finished = " << timestamp() << '\n'
           << "elapsed_seconds = " << fmt(elapsed) << '\n'
           << "threads = " << threads << '\n';

  try {
    fs::create_directories(out_dir);
    fs::remove_all(out_dir / "failures");
    fs::remove_all(out_dir / "fields");
    write_file(out_dir / "report.csv", report.str());
    write_file(out_dir / "summary.txt", summary.str());
    write_file(out_dir / "metadata.txt", metadata.str());
    for (const auto& [name, content] : collected.extra_files) write_file(out_dir / name, content);
    for (const auto& [name, field] : collected.fields) {
      std::ostringstream table;
      write_field_table(table, field);
      write_file(out_dir / name, table.str());
    }
    if (result.failures > 0) {
      write_file(out_dir / "failures" / "manifest.csv", manifest.str());
      for (const auto& [name, content] : replays) write_file(out_dir / "failures" / name, content);
    }
  } catch (const std::exception& e) {
    result.status = ExitStatus::IoFailure;
    result.messages.push_back(e.what());
  }
  return result;
}

}  // namespace nlsym
