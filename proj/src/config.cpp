#include "nlsym/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "nlsym/error.hpp"
#include "nlsym/field_io.hpp"
#include "nlsym/kernel.hpp"
#include "nlsym/nonlocal_solver.hpp"

namespace nlsym {

namespace {

constexpr std::pair<Command, std::string_view> kCommandNames[] = {
    {Command::CompareStationary, "compare-stationary"}, {Command::CompareEvolution, "compare-evolution"},
    {Command::Sweep, "sweep"},
    {Command::Corollary, "corollary"},
    {Command::CltDecay, "clt-decay"},
    {Command::CheckInequalities, "check-inequalities"},
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, std::string_view separators) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find_first_of(separators, start);
    const std::string piece = trim(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (!piece.empty()) out.push_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity" || t == "Inf") return kInfinity;
  return parse_double(t);
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const std::string& piece : split(text, ", \t")) out.push_back(parse_real(piece));
  return out;
}

template <typename Int>
Int parse_integer(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw InvalidArgument("'" + t + "' is not a non-negative integer");
  const unsigned long long v = std::stoull(t);
  if (v > static_cast<unsigned long long>(std::numeric_limits<Int>::max()))
    throw InvalidArgument("'" + t + "' is out of range");
  return static_cast<Int>(v);
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw InvalidArgument("'" + t + "' is not a boolean");
}

Point parse_point(const std::string& text) {
  const std::vector<double> v = parse_reals(text);
  if (v.empty() || v.size() > 2) throw InvalidArgument("expected one or two coordinates, got '" + text + "'");
  return {v[0], v.size() > 1 ? v[1] : 0.0};
}

std::vector<std::pair<Point, Point>> parse_boxes(const std::string& text) {
  std::vector<std::pair<Point, Point>> out;
  for (const std::string& box : split(text, "|")) {
    const std::vector<double> v = parse_reals(box);
    if (v.size() == 2)
      out.push_back({{v[0], 0.0}, {v[1], 0.0}});
    else if (v.size() == 4)
      out.push_back({{v[0], v[1]}, {v[2], v[3]}});
    else
      throw InvalidArgument("a box needs 2 (N=1) or 4 (N=2) numbers: '" + box + "'");
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

void apply_profile_key(ProfileSpec& spec, const std::string& key, const std::string& v) {
  if (key == "profile") spec.profile = trim(v);
  else if (key == "value") spec.value = parse_real(v);
  else if (key == "center") spec.center = parse_point(v);
  else if (key == "width") spec.width = parse_real(v);
  else if (key == "file") spec.file = trim(v);
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["run.command"] = [](ExperimentConfig& c, const std::string& v) {
      const auto cmd = parse_command(trim(v));
      if (!cmd) throw InvalidArgument("unknown command '" + trim(v) + "'");
      c.command = *cmd;
    };
    t["run.seed"] = [](ExperimentConfig& c, const std::string& v) { c.seed = parse_integer<std::uint64_t>(v); };
    t["run.strict"] = [](ExperimentConfig& c, const std::string& v) { c.strict = parse_bool(v); };
    t["grid.dimension"] = [](ExperimentConfig& c, const std::string& v) { c.dimension = parse_integer<int>(v); };
    t["grid.half_extent"] = [](ExperimentConfig& c, const std::string& v) { c.half_extent = parse_real(v); };
    t["grid.cells"] = [](ExperimentConfig& c, const std::string& v) { c.cells = parse_integer<int>(v); };
    t["kernel.profile"] = [](ExperimentConfig& c, const std::string& v) {
      c.kernel.profile = parse_kernel_profile(trim(v));
    };
    t["kernel.support"] = [](ExperimentConfig& c, const std::string& v) { c.kernel.support_radius = parse_real(v); };
    t["kernel.epsilon"] = [](ExperimentConfig& c, const std::string& v) { c.epsilon = parse_real(v); };
    t["kernel.epsilons"] = [](ExperimentConfig& c, const std::string& v) { c.epsilons = parse_reals(v); };
    t["problem.c"] = [](ExperimentConfig& c, const std::string& v) { c.c = parse_real(v); };
    t["problem.p"] = [](ExperimentConfig& c, const std::string& v) { c.p = parse_real(v); };
    t["problem.horizon"] = [](ExperimentConfig& c, const std::string& v) { c.horizon = parse_real(v); };
    t["problem.tau"] = [](ExperimentConfig& c, const std::string& v) { c.tau = parse_real(v); };
    t["problem.tol"] = [](ExperimentConfig& c, const std::string& v) { c.solver.tol = parse_real(v); };
    t["problem.max_iterations"] = [](ExperimentConfig& c, const std::string& v) {
      c.solver.max_iterations = parse_integer<std::size_t>(v);
    };
    t["problem.diffusivity"] = [](ExperimentConfig& c, const std::string& v) { c.diffusivity = parse_real(v); };
    t["domain.shape"] = [](ExperimentConfig& c, const std::string& v) { c.domain.shape = trim(v); };
    t["domain.lo"] = [](ExperimentConfig& c, const std::string& v) { c.domain.lo = parse_point(v); };
    t["domain.hi"] = [](ExperimentConfig& c, const std::string& v) { c.domain.hi = parse_point(v); };
    t["domain.boxes"] = [](ExperimentConfig& c, const std::string& v) { c.domain.boxes = parse_boxes(v); };
    t["domain.center"] = [](ExperimentConfig& c, const std::string& v) { c.domain.center = parse_point(v); };
    t["domain.radius"] = [](ExperimentConfig& c, const std::string& v) { c.domain.radius = parse_real(v); };
    t["domain.file"] = [](ExperimentConfig& c, const std::string& v) { c.domain.file = trim(v); };
    for (const char* key : {"profile", "value", "center", "width", "file"}) {
      const std::string k = key;
      t["forcing." + k] = [k](ExperimentConfig& c, const std::string& v) { apply_profile_key(c.forcing, k, v); };
      t["initial." + k] = [k](ExperimentConfig& c, const std::string& v) { apply_profile_key(c.initial, k, v); };
    }
    t["suite.instances"] = [](ExperimentConfig& c, const std::string& v) {
      c.instances = parse_integer<std::size_t>(v);
    };
    t["suite.first_index"] = [](ExperimentConfig& c, const std::string& v) {
      c.first_index = parse_integer<std::size_t>(v);
    };
    t["suite.realizable"] = [](ExperimentConfig& c, const std::string& v) { c.suite.realizable = parse_bool(v); };
    t["suite.epsilons"] = [](ExperimentConfig& c, const std::string& v) { c.suite.epsilons = parse_reals(v); };
    t["suite.absorptions"] = [](ExperimentConfig& c, const std::string& v) { c.suite.absorptions = parse_reals(v); };
    t["suite.exponents"] = [](ExperimentConfig& c, const std::string& v) { c.suite.exponents = parse_reals(v); };
    t["suite.tau_fraction"] = [](ExperimentConfig& c, const std::string& v) { c.tau_fraction = parse_real(v); };
    t["clt.k_max"] = [](ExperimentConfig& c, const std::string& v) { c.k_max = parse_integer<int>(v); };
    t["clt.radius"] = [](ExperimentConfig& c, const std::string& v) { c.mass_radius = parse_real(v); };
    t["clt.monotone_from"] = [](ExperimentConfig& c, const std::string& v) { c.monotone_from = parse_integer<int>(v); };
    t["clt.threshold"] = [](ExperimentConfig& c, const std::string& v) { c.mass_threshold = parse_real(v); };
    t["clt.gaussian_ks"] = [](ExperimentConfig& c, const std::string& v) {
      c.gaussian_ks.clear();
      for (const std::string& piece : split(v, ", \t")) c.gaussian_ks.push_back(parse_integer<int>(piece));
    };
    t["clt.gaussian_threshold"] = [](ExperimentConfig& c, const std::string& v) {
      c.gaussian_threshold = parse_real(v);
    };
    t["clt.h"] = [](ExperimentConfig& c, const std::string& v) { c.clt_h = parse_real(v); };
    t["inequalities.riesz"] = [](ExperimentConfig& c, const std::string& v) { c.riesz_form = trim(v); };
    return t;
  }();
  return table;
}

ExperimentConfig from_entries(const std::map<std::string, std::string>& entries,
                              const std::vector<std::string>& syntax_errors) {
  ExperimentConfig config;
  config.entries = entries;
  config.syntax_errors = syntax_errors;
  std::vector<std::string> errors = syntax_errors;
  // Grid defaults follow the dimension unless given explicitly.
  if (const auto it = entries.find("grid.dimension"); it != entries.end()) {
    try {
      config.dimension = parse_integer<int>(it->second);
    } catch (const std::exception&) {
    }
  }
  if (config.dimension == 2) {
    config.cells = config.suite.cells_2d;
    config.half_extent = config.suite.half_extent_2d;
  }
  for (const auto& [key, value] : entries) {
    const auto it = setters().find(key);
    if (it == setters().end()) {
      errors.push_back("unknown key '" + key + "'");
      continue;
    }
    try {
      it->second(config, value);
    } catch (const std::exception& e) {
      errors.push_back(key + ": " + e.what());
    }
  }
  config.suite.kernel = config.kernel;
  if (config.dimension == 2) {
    config.suite.cells_2d = config.cells;
    config.suite.half_extent_2d = config.half_extent;
  } else {
    config.suite.cells_1d = config.cells;
    config.suite.half_extent_1d = config.half_extent;
  }
  config.parse_errors = std::move(errors);
  return config;
}

void check_profile(const ProfileSpec& spec, const char* name, std::vector<std::string>& out) {
  static const std::set<std::string> known{"zero", "constant", "bump", "paraboloid", "file"};
  if (!known.contains(spec.profile)) {
    out.push_back(std::string(name) + ".profile: unknown profile '" + spec.profile + "'");
    return;
  }
  if (spec.profile == "file" && spec.file.empty()) out.push_back(std::string(name) + ".file: missing path");
  if (spec.profile != "zero" && spec.profile != "file" && !(spec.value >= 0.0 && std::isfinite(spec.value)))
    out.push_back(std::string(name) + ".value: data must be finite and >= 0");
  if ((spec.profile == "bump" || spec.profile == "paraboloid") && !(spec.width > 0.0))
    out.push_back(std::string(name) + ".width: must be positive");
}

// Resolution and fit of the rescaled kernel support eps * R on the grid.
void check_epsilon(double epsilon, const ExperimentConfig& config, double h, double half_extent,
                   std::vector<std::string>& out) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    out.push_back("epsilon must be positive, got " + format_double(epsilon));
    return;
  }
  const double support = epsilon * config.kernel.support_radius;
  if (support < 2.0 * h)
    out.push_back("resolution: epsilon * support = " + format_double(support) + " is below 2h = " +
                  format_double(2.0 * h));
  if (support > half_extent)
    out.push_back("epsilon * support = " + format_double(support) + " exceeds the half extent " +
                  format_double(half_extent));
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [cmd, text] : kCommandNames)
    if (text == name) return cmd;
  return std::nullopt;
}

std::string_view to_string(Command command) {
  for (const auto& [cmd, text] : kCommandNames)
    if (cmd == command) return text;
  return "unknown";
}

ExperimentConfig parse_config_text(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    return from_entries({}, {std::string("config syntax: ") + e.message() + " (line " + std::to_string(e.line()) + ")"});
  }
  std::map<std::string, std::string> entries;
  std::vector<std::string> errors;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      errors.push_back("key '" + section + "' outside a section");
      continue;
    }
    for (const auto& [key, value] : body) entries[section + "." + key] = value.data();
  }
  return from_entries(entries, errors);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

ExperimentConfig with_entry(const ExperimentConfig& config, const std::string& key, const std::string& value) {
  std::map<std::string, std::string> entries = config.entries;
  entries[key] = value;
  return from_entries(entries, config.syntax_errors);
}

std::string render_config(const ExperimentConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& [key, value] : config.entries) {
    const std::string s = key.substr(0, key.find('.'));
    if (s != section) {
      if (!section.empty()) out << '\n';
      out << '[' << s << "]\n";
      section = s;
    }
    out << key.substr(key.find('.') + 1) << " = " << value << '\n';
  }
  return out.str();
}

GridSpec config_grid(const ExperimentConfig& config) { return GridSpec(config.dimension, config.half_extent, config.cells); }

DomainMask build_domain(const ExperimentConfig& config, const GridSpec& grid) {
  const DomainSpec& d = config.domain;
  if (d.shape == "interval" || d.shape == "rectangle") return box_mask(grid, d.lo, d.hi);
  if (d.shape == "boxes") {
    if (d.boxes.empty()) throw InvalidArgument("domain.boxes is empty");
    DomainMask out = box_mask(grid, d.boxes.front().first, d.boxes.front().second);
    for (std::size_t i = 1; i < d.boxes.size(); ++i)
      out = mask_union(out, box_mask(grid, d.boxes[i].first, d.boxes[i].second));
    return out;
  }
  if (d.shape == "ball") {
    const Point c = d.center;
    const double r2 = d.radius * d.radius;
    const int dim = grid.dimension();
    return DomainMask::from_predicate(grid, [=](const Point& x) {
      double s = 0.0;
      for (int a = 0; a < dim; ++a) s += (x[a] - c[a]) * (x[a] - c[a]);
      return s < r2;
    });
  }
  if (d.shape == "file") return load_field(d.file, grid).mask();
  throw InvalidArgument("unknown domain shape '" + d.shape + "'");
}

GridField build_profile(const ProfileSpec& spec, const DomainMask& domain) {
  const int dim = domain.grid().dimension();
  const auto dist2 = [&](const Point& x) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += (x[a] - spec.center[a]) * (x[a] - spec.center[a]);
    return s;
  };
  if (spec.profile == "zero") return GridField(domain);
  if (spec.profile == "constant") return GridField::from_function(domain, [&](const Point&) { return spec.value; });
  if (spec.profile == "bump")
    return GridField::from_function(
        domain, [&](const Point& x) { return spec.value * std::exp(-dist2(x) / (2.0 * spec.width * spec.width)); });
  if (spec.profile == "paraboloid")
    return GridField::from_function(
        domain, [&](const Point& x) { return spec.value * std::max(0.0, 1.0 - dist2(x) / (spec.width * spec.width)); });
  if (spec.profile == "file") {
    const GridField f = load_field(spec.file, domain.grid());
    if (!f.mask().is_subset_of(domain)) throw InvalidArgument("field '" + spec.file + "' is not supported in the domain");
    for (CellIndex c : f.mask().cells())
      if (!(f.value(c) >= 0.0)) throw InvalidArgument("field '" + spec.file + "' has negative or non-finite values");
    return f.extended_to(domain);
  }
  throw InvalidArgument("unknown profile '" + spec.profile + "'");
}

std::vector<std::string> validate(const ExperimentConfig& config) {
  std::vector<std::string> out = config.parse_errors;
  if (!out.empty()) return out;

  const Command cmd = config.command;
  const bool suite = config.instances > 0;
  if (config.dimension != 1 && config.dimension != 2) out.push_back("grid.dimension must be 1 or 2");
  if (config.cells < 3 || config.cells % 2 == 0) out.push_back("grid.cells must be odd and >= 3");
  if (!(config.half_extent > 0.0) || !std::isfinite(config.half_extent))
    out.push_back("grid.half_extent must be positive");
  if (!(config.kernel.support_radius > 0.0)) out.push_back("kernel.support must be positive");
  if (!(config.solver.tol > 0.0)) out.push_back("problem.tol must be positive");
  if (!out.empty()) return out;

  const GridSpec grid = config_grid(config);
  const double h = grid.h();
  const auto check_p = [&](double p) {
    if (!(p >= 1.0)) out.push_back("norm exponent p = " + format_double(p) + " must lie in [1, inf]");
  };
  const auto check_c = [&](double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) out.push_back("absorption c = " + format_double(c) + " must be >= 0");
  };

  switch (cmd) {
    case Command::CompareStationary:
    case Command::CompareEvolution:
      if (suite) {
        if (cmd == Command::CompareEvolution && config.dimension != 1)
          out.push_back("evolution suites are one-dimensional");
        if (config.suite.epsilons.empty() || config.suite.absorptions.empty() || config.suite.exponents.empty())
          out.push_back("suite parameter lists must be non-empty");
        for (double e : config.suite.epsilons) check_epsilon(e, config, h, config.half_extent, out);
        for (double c : config.suite.absorptions) check_c(c);
        for (double p : config.suite.exponents) check_p(p);
        if (cmd == Command::CompareEvolution && !(config.tau_fraction > 0.0 && config.tau_fraction < 1.0))
          out.push_back("suite.tau_fraction must lie in (0, 1)");
        break;
      }
      check_epsilon(config.epsilon, config, h, config.half_extent, out);
      check_c(config.c);
      check_p(config.p);
      check_profile(config.forcing, "forcing", out);
      if (cmd == Command::CompareEvolution) {
        check_profile(config.initial, "initial", out);
        if (!(config.tau > 0.0) || !(config.horizon > 0.0)) {
          out.push_back("problem.tau and problem.horizon must be positive");
        } else {
          const double steps = std::round(config.horizon / config.tau);
          if (steps < 1.0 || std::abs(config.horizon / config.tau - steps) > 1e-9 * std::max(1.0, steps))
            out.push_back("problem.horizon must be a whole number of steps tau");
          if (out.empty()) {
            const RescaledKernel rk =
                rescale(make_kernel(config.kernel.profile, config.kernel.support_radius, grid), config.epsilon);
            const double tau_max = stability_max_tau(config.c, rk);
            if (!(config.tau < tau_max))
              out.push_back("stability: tau = " + format_double(config.tau) + " must be below tau_max = " +
                            format_double(tau_max));
          }
        }
      }
      break;
    case Command::Sweep:
      check_c(config.c);
      check_p(config.p);
      check_profile(config.forcing, "forcing", out);
      if (config.epsilons.empty()) out.push_back("kernel.epsilons must be non-empty");
      for (std::size_t i = 1; i < config.epsilons.size(); ++i)
        if (!(config.epsilons[i] < config.epsilons[i - 1])) out.push_back("kernel.epsilons must be decreasing");
      for (double e : config.epsilons) check_epsilon(e, config, h, config.half_extent, out);
      break;
    case Command::Corollary:
      check_c(config.c);
      check_p(config.p);
      check_profile(config.forcing, "forcing", out);
      if (!(config.diffusivity > 0.0)) out.push_back("problem.diffusivity must be positive");
      break;
    case Command::CltDecay: {
      if (config.k_max < 2) out.push_back("clt.k_max must be >= 2");
      if (!(config.mass_radius > 0.0)) out.push_back("clt.radius must be positive");
      if (config.monotone_from < 1) out.push_back("clt.monotone_from must be >= 1");
      if (!(config.clt_h > 0.0)) {
        out.push_back("clt.h must be positive");
        break;
      }
      for (std::size_t i = 0; i < config.gaussian_ks.size(); ++i)
        if (config.gaussian_ks[i] < 1 || (i > 0 && config.gaussian_ks[i] <= config.gaussian_ks[i - 1]))
          out.push_back("clt.gaussian_ks must be positive and increasing");
      if (!(config.epsilon > 0.0)) {
        out.push_back("epsilon must be positive");
      } else if (config.epsilon * config.kernel.support_radius < 2.0 * config.clt_h) {
        out.push_back("resolution: epsilon * support = " + format_double(config.epsilon * config.kernel.support_radius) +
                      " is below 2h = " + format_double(2.0 * config.clt_h));
      }
      break;
    }
    case Command::CheckInequalities:
      if (!suite) out.push_back("check-inequalities needs suite.instances >= 1");
      if (config.riesz_form != "literal" && config.riesz_form != "kernel")
        out.push_back("inequalities.riesz must be 'literal' or 'kernel'");
      break;
  }

  const bool uses_domain = !suite && (cmd == Command::CompareStationary || cmd == Command::CompareEvolution ||
                                      cmd == Command::Sweep || cmd == Command::Corollary);
  if (uses_domain) {
    static const std::set<std::string> shapes{"interval", "rectangle", "boxes", "ball", "file"};
    const DomainSpec& d = config.domain;
    if (!shapes.contains(d.shape)) {
      out.push_back("domain.shape: unknown shape '" + d.shape + "'");
    } else if (d.shape == "file") {
      if (d.file.empty()) out.push_back("domain.file: missing path");
    } else {
      if (d.shape == "interval" && config.dimension != 1) out.push_back("domain.shape interval needs dimension 1");
      if (d.shape == "ball" && !(d.radius > 0.0)) out.push_back("domain.radius must be positive");
      try {
        (void)build_domain(config, grid);
      } catch (const std::exception& e) {
        out.push_back(std::string("domain: ") + e.what());
      }
    }
  }
  return out;
}

}  // namespace nlsym
