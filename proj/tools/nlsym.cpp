// nlsym: run one comparison experiment from an INI config.
//
//   nlsym --config suite.ini --out results/ [--seed 7] [--threads 4] [--strict]
//   nlsym --config suite.ini --validate
//
// Exit status: 0 all contracts hold, 1 contract failure, 2 config rejected,
// 3 I/O error, 4 compute error.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nlsym/config.hpp"
#include "nlsym/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Symmetrization comparison experiments for nonlocal diffusion problems"};
  std::string config_path;
  std::string out_dir = "nlsym_out";
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool strict = false;
  bool validate_only = false;
  app.add_option("--config", config_path, "INI experiment config")->required();
  auto* seed_opt = app.add_option("--seed", seed, "override run.seed");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", threads, "worker threads for suite instances")->check(CLI::Range(1u, 256u));
  app.add_flag("--strict", strict, "treat slack-level violations as failures");
  app.add_flag("--validate", validate_only, "check the config and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(nlsym::ExitStatus::ConfigRejected);
  }

  nlsym::ExperimentConfig config;
  try {
    config = nlsym::load_config(config_path);
  } catch (const nlsym::IoError& e) {
    std::cerr << "nlsym: " << e.what() << '\n';
    return static_cast<int>(nlsym::ExitStatus::IoFailure);
  }
  if (*seed_opt) config = nlsym::with_entry(config, "run.seed", std::to_string(seed));
  if (strict) config = nlsym::with_entry(config, "run.strict", "true");

  if (validate_only) {
    const auto violations = nlsym::validate(config);
    for (const auto& v : violations) std::cout << v << '\n';
    return static_cast<int>(violations.empty() ? nlsym::ExitStatus::Ok : nlsym::ExitStatus::ConfigRejected);
  }

  const nlsym::RunResult result = nlsym::run(config, {out_dir, threads});
  for (const auto& m : result.messages) std::cerr << "nlsym: " << m << '\n';
  std::cout << nlsym::to_string(config.command) << ": " << result.rows << " rows, " << result.failures
            << " failures, exit " << static_cast<int>(result.status) << '\n';
  return static_cast<int>(result.status);
}
