// semilab scenario runner.
//
//   semilab run <scenario> [--config path] [--seed u64] [--out path] [--format csv|json]
//   semilab scan <scenario> --param V0|V --values a,b,c [...]
//   semilab trials <scenario> --n N [...]
//
// Exit status: 0 all flags pass, 1 some flag failed, 2 config or usage error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "semilab/semilab.hpp"

namespace {

struct Common {
  std::string scenario;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("scenario", c.scenario, "Scenario name")->required();
  cmd->add_option("--config", c.config_path, "JSON scenario config");
  cmd->add_option("--seed", c.seed, "Master RNG seed (overrides the config)");
  cmd->add_option("--out", c.out, "Output path (stdout when omitted)");
  cmd->add_option("--format", c.format, "csv or json (overrides the config)")->check(CLI::IsMember({"csv", "json"}));
}

semilab::ScenarioConfig load(const Common& c) {
  semilab::ScenarioConfig cfg;
  if (c.config_path.empty()) {
    cfg = semilab::parse_config(semilab::default_config(c.scenario));
  } else {
    std::ifstream f(c.config_path);
    if (!f) throw semilab::ConfigError("config", "cannot read '" + c.config_path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    cfg = semilab::parse_config_text(ss.str());
    if (cfg.scenario != c.scenario)
      throw semilab::ConfigError("scenario", "config is for \"" + cfg.scenario + "\", not \"" + c.scenario + "\"");
  }
  if (c.seed) cfg = semilab::with_seed(cfg, *c.seed);
  return cfg;
}

int finish(const semilab::RunReport& r, const semilab::ScenarioConfig& cfg, const Common& c) {
  const auto format = c.format.empty() ? cfg.format : semilab::parse_format(c.format);
  if (c.out.empty())
    semilab::emit(r, format, std::cout);
  else
    semilab::emit(r, format, std::filesystem::path(c.out));
  std::cerr << r.scenario << ": wall time " << r.wall_time_seconds << " s\n";
  for (const auto& f : r.flags)
    if (!f.passed) std::cerr << "FAILED " << f.name << ": " << f.detail << "\n";
  return r.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical gravity scenario runner"};
  app.require_subcommand(1);

  Common run_opts, scan_opts, trial_opts;
  auto* run = app.add_subcommand("run", "Run a scenario");
  add_common(run, run_opts);

  auto* scan = app.add_subcommand("scan", "Scaling study over one parameter");
  add_common(scan, scan_opts);
  std::string param;
  std::vector<double> values;
  scan->add_option("--param", param, "V0 (eds_cosmology) or V (minkowski_particle)")->required();
  scan->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');

  auto* trials = app.add_subcommand("trials", "Run a trial-based scenario with an overridden trial count");
  add_common(trials, trial_opts);
  std::size_t n = 0;
  trials->add_option("--n", n, "Number of trials")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const auto cfg = load(run_opts);
      return finish(semilab::run_scenario(cfg), cfg, run_opts);
    }
    if (*scan) {
      const auto cfg = load(scan_opts);
      return finish(semilab::run_scan(cfg, param, values), cfg, scan_opts);
    }
    const auto cfg = semilab::with_trials(load(trial_opts), n);
    return finish(semilab::run_scenario(cfg), cfg, trial_opts);
  } catch (const semilab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const semilab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
