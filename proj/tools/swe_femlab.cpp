// swe-femlab <command> --config <path> [--key value ...]

#include "swe/config.hpp"
#include "swe/errors.hpp"
#include "swe/experiments.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>

namespace {

std::string hyphenated(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"P1DG-P2 rotating shallow-water experiments"};
  app.set_help_all_flag("--help-all");

  std::string command;
  std::string config_path;
  bool deterministic = false;
  app.add_option("command", command, "balance | steady | kelvin-circular | kelvin-converge | spectrum")
      ->required()
      ->check(CLI::IsMember({"balance", "steady", "kelvin-circular", "kelvin-converge", "spectrum"}));
  app.add_option("--config", config_path, "config file (key = value lines)");
  app.add_flag("--deterministic", deterministic, "sequential, bit-reproducible execution");

  std::map<std::string, std::string> overrides;
  for (const auto& key : swe::config_keys()) {
    if (key == "experiment" || key == "deterministic") continue;
    std::string names = "--" + key;
    if (key.find('_') != std::string::npos) names += ",--" + hyphenated(key);
    app.add_option(names, overrides[key], "override config key '" + key + "'")->group("Config overrides");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? swe::exit_ok : swe::exit_config;
  }

  try {
    const swe::Experiment experiment = swe::parse_experiment(command);
    swe::RawConfig raw = config_path.empty() ? swe::RawConfig{} : swe::parse_config_file(config_path);
    for (const auto& [key, value] : overrides) {
      std::string names = "--" + key;
      if (app.count(names) > 0) raw[key] = value;
    }
    if (deterministic) {
      raw["deterministic"] = "true";
      raw["threads"] = "1";
    }
    const swe::ExperimentConfig config = swe::make_config(experiment, raw);
    return swe::run_experiment(config, std::cout);
  } catch (const swe::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return swe::exit_numerical;
  } catch (const swe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return swe::exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return swe::exit_numerical;
  }
}
