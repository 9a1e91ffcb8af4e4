// Command-line front end: run one scenario, sweep protocols over seeds,
// lint a config, or print the annotated reference scenario.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "efcm/efcm.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw efcm::IoError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

efcm::Scenario build_scenario(const std::string& config_path,
                              const std::vector<std::string>& sets) {
  efcm::Scenario s;
  if (!config_path.empty()) s = efcm::parse_scenario(read_file(config_path));
  for (const std::string& kv : sets) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw efcm::ConfigError("--set expects key=value, got '" + kv + "'");
    std::string key = kv.substr(0, eq);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    std::string value = kv.substr(eq + 1);
    while (!value.empty() && value.front() == ' ') value.erase(value.begin());
    efcm::apply_key(s, key, value);
  }
  efcm::validate(s);
  return s;
}

std::string resolve_output(const std::string& path) {
  const char* dir = std::getenv("EFCM_OUTPUT_DIR");
  if (dir && *dir && !path.empty() && path != "-" && path.front() != '/')
    return std::string(dir) + "/" + path;
  return path;
}

template <typename T>
void write_output(const T& value, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << efcm::to_csv(value);
  } else {
    efcm::write_csv_file(value, resolve_output(path));
  }
}

void print_run_summary(const efcm::MetricsSeries& series, std::ostream& out) {
  if (series.checkpoints.empty()) {
    out << "# no checkpoints (duration 0)\n";
    return;
  }
  const efcm::Checkpoint& last = series.checkpoints.back();
  out << "# " << efcm::protocol_name(series.protocol) << " seed "
      << series.seed << ": t=" << last.time << " pdr=" << last.pdr
      << " throughput_bps=" << last.throughput_bps
      << " mean_residual_energy_j=" << last.mean_residual_energy
      << " ch_failures=" << last.ch_failures << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustered WSN simulator: EFCM with LEACH and HEED baselines"};
  app.require_subcommand(1);

  std::string config_path, output_path;
  std::vector<std::string> sets;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "Scenario file (key = value)");
    cmd->add_option("-s,--set", sets,
                    "Override a scenario key, e.g. --set node_count=50");
    cmd->add_option("-o,--output", output_path,
                    "Output CSV path ('-' = stdout)");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "Run one scenario, emit CSV");
  add_common(cmd_run);
  std::string run_protocol;
  std::int64_t run_seed = -1;
  cmd_run->add_option("-p,--protocol", run_protocol, "efcm | leach | heed");
  cmd_run->add_option("--seed", run_seed, "RNG seed");

  CLI::App* cmd_compare =
      app.add_subcommand("compare", "Protocol sweep over seeds, aggregate CSV");
  add_common(cmd_compare);
  std::string protocols_csv = "efcm,leach,heed";
  unsigned n_seeds = 20;
  std::uint64_t seed_base = 1;
  bool serial = false;
  cmd_compare->add_option("-p,--protocols", protocols_csv,
                          "Comma-separated protocol list");
  cmd_compare->add_option("-n,--seeds", n_seeds, "Number of seeds");
  cmd_compare->add_option("--seed-base", seed_base, "First seed value");
  cmd_compare->add_flag("--serial", serial, "Disable parallel runs");

  CLI::App* cmd_validate =
      app.add_subcommand("validate", "Parse and lint a scenario");
  add_common(cmd_validate);

  app.add_subcommand("defaults", "Print the annotated reference scenario");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("defaults")) {
      std::cout << efcm::serialize_scenario(efcm::Scenario{}, true);
      return 0;
    }
    if (app.got_subcommand("validate")) {
      efcm::Scenario s = build_scenario(config_path, sets);
      std::cout << "ok\n" << efcm::serialize_scenario(s);
      return 0;
    }
    if (app.got_subcommand("run")) {
      efcm::Scenario s = build_scenario(config_path, sets);
      if (!run_protocol.empty()) s.protocol = efcm::parse_protocol(run_protocol);
      if (run_seed >= 0) s.seed = static_cast<std::uint64_t>(run_seed);
      efcm::validate(s);
      efcm::MetricsSeries series = efcm::run(s);
      write_output(series, output_path);
      print_run_summary(series, output_path.empty() || output_path == "-"
                                    ? std::cerr
                                    : std::cout);
      return 0;
    }
    if (app.got_subcommand("compare")) {
      efcm::Scenario base = build_scenario(config_path, sets);
      std::vector<efcm::Scenario> scenarios;
      std::stringstream ss(protocols_csv);
      std::string name;
      while (std::getline(ss, name, ',')) {
        efcm::Scenario s = base;
        s.protocol = efcm::parse_protocol(name);
        scenarios.push_back(s);
      }
      if (scenarios.empty())
        throw efcm::ConfigError("compare: empty protocol list");
      if (n_seeds == 0) throw efcm::ConfigError("compare: need >= 1 seed");
      std::vector<std::uint64_t> seeds;
      for (unsigned i = 0; i < n_seeds; ++i) seeds.push_back(seed_base + i);
      efcm::ComparisonTable table = efcm::compare(scenarios, seeds, !serial);
      write_output(table, output_path);
      return 0;
    }
  } catch (const efcm::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
