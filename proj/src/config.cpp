#include "swe/config.hpp"

#include "swe/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace swe {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool valid_key(const std::string& key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

double to_double(const std::string& key, const std::string& value) {
  if (value == "inf" || value == "infinity") return std::numeric_limits<double>::infinity();
  double x = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
  return x;
}

long to_integer(const std::string& key, const std::string& value) {
  long x = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + value + "'");
}

std::vector<double> to_list(const std::string& key, std::string value) {
  if (!value.empty() && value.front() == '[') {
    if (value.back() != ']') throw ConfigError("'" + key + "' has an unterminated list");
    value = value.substr(1, value.size() - 2);
  }
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

DomainKind to_domain(const std::string& value) {
  if (value == "disk") return DomainKind::disk;
  if (value == "rectangle") return DomainKind::rectangle;
  if (value == "file") return DomainKind::file;
  throw ConfigError("unknown domain '" + value + "' (disk, rectangle, file)");
}

}  // namespace

namespace {

RawConfig parse_lines(const std::string& text, const std::string& source) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ParseError(source + "expected 'key = value'", number);
    const std::string key = trim(stripped.substr(0, eq));
    if (!valid_key(key)) throw ParseError(source + "invalid key '" + key + "'", number);
    std::string rest = trim(stripped.substr(eq + 1));
    std::string value;
    if (!rest.empty() && rest[0] == '"') {
      const auto close = rest.find('"', 1);
      if (close == std::string::npos) throw ParseError(source + "unterminated string", number);
      value = rest.substr(1, close - 1);
      const std::string tail = trim(rest.substr(close + 1));
      if (!tail.empty() && tail[0] != '#') throw ParseError(source + "unexpected text after string", number);
    } else {
      value = trim(rest.substr(0, rest.find('#')));
    }
    if (value.empty()) throw ParseError(source + "missing value for '" + key + "'", number);
    if (!raw.emplace(key, value).second) throw ParseError(source + "duplicate key '" + key + "'", number);
  }
  return raw;
}

}  // namespace

RawConfig parse_config_text(const std::string& text) { return parse_lines(text, ""); }

RawConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_lines(ss.str(), path.string() + ": ");
}

Experiment parse_experiment(const std::string& name) {
  if (name == "balance") return Experiment::balance;
  if (name == "steady") return Experiment::steady;
  if (name == "kelvin-circular") return Experiment::kelvin_circular;
  if (name == "kelvin-converge") return Experiment::kelvin_converge;
  if (name == "spectrum") return Experiment::spectrum;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::balance: return "balance";
    case Experiment::steady: return "steady";
    case Experiment::kelvin_circular: return "kelvin-circular";
    case Experiment::kelvin_converge: return "kelvin-converge";
    case Experiment::spectrum: return "spectrum";
  }
  return "?";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "experiment", "domain", "radius", "x_min", "x_max", "y_min", "y_max", "pattern", "edge_length",
      "distortion", "seed", "mesh_file", "mesh_format", "ro", "fr", "dt", "t_end", "snapshot_interval",
      "diagnostic_interval", "output_dir", "psi_center_x", "psi_center_y", "psi_width", "zero_boundary",
      "smoothing", "unbalanced", "drift_tolerance", "edge_lengths", "courant", "min_slope",
      "near_zero_threshold", "threads", "deterministic"};
  return keys;
}

void ExperimentConfig::validate() const {
  auto positive = [](double x, const char* what) {
    if (!(x > 0.0)) throw ConfigError(std::string(what) + " must be positive");
  };
  if (domain == DomainKind::disk) positive(radius, "radius");
  if (domain == DomainKind::rectangle && (!(x_range.length() > 0.0) || !(y_range.length() > 0.0)))
    throw ConfigError("rectangle needs x_max > x_min and y_max > y_min");
  if (domain == DomainKind::file && mesh_file.empty()) throw ConfigError("domain = file needs mesh_file");
  if (domain != DomainKind::file) positive(edge_length, "edge_length");
  if (!(distortion >= 0.0 && distortion < 0.3)) throw ConfigError("distortion must lie in [0, 0.3)");
  positive(ro, "ro");
  positive(fr, "fr");
  positive(dt, "dt");
  if (!(t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  if (snapshot_interval < 0.0) throw ConfigError("snapshot_interval must be non-negative");
  positive(diagnostic_interval, "diagnostic_interval");
  if (psi_width) positive(*psi_width, "psi_width");
  if (smoothing < 0) throw ConfigError("smoothing must be non-negative");
  positive(drift_tolerance, "drift_tolerance");
  if (experiment == Experiment::kelvin_converge) {
    if (edge_lengths.size() < 3) throw ConfigError("kelvin-converge needs at least 3 edge_lengths");
    for (double h : edge_lengths) positive(h, "edge_lengths entries");
  }
  positive(courant, "courant");
  positive(near_zero_threshold, "near_zero_threshold");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

ExperimentConfig make_config(Experiment experiment, const RawConfig& raw) {
  ExperimentConfig c;
  c.experiment = experiment;
  switch (experiment) {
    case Experiment::balance:
      c.distortion = 0.2;
      break;
    case Experiment::steady:
      c.distortion = 0.2;
      c.t_end = 1.0;
      break;
    case Experiment::kelvin_circular:
      c.edge_length = 0.05;
      c.t_end = 100.0;
      c.snapshot_interval = 30.0;
      break;
    case Experiment::kelvin_converge:
      c.domain = DomainKind::rectangle;
      c.x_range = {-15.0, 15.0};
      c.y_range = {0.0, 3.0};
      c.t_end = 10.0;
      break;
    case Experiment::spectrum:
      c.edge_length = 0.125;
      c.distortion = 0.2;
      break;
  }

  const auto& keys = config_keys();
  for (const auto& [key, value] : raw) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown config key '" + key + "'");
    if (key == "experiment") {
      if (parse_experiment(value) != experiment)
        throw ConfigError("config is for experiment '" + value + "', not '" + experiment_name(experiment) + "'");
    } else if (key == "domain") {
      c.domain = to_domain(value);
    } else if (key == "radius") {
      c.radius = to_double(key, value);
    } else if (key == "x_min") {
      c.x_range.lo = to_double(key, value);
    } else if (key == "x_max") {
      c.x_range.hi = to_double(key, value);
    } else if (key == "y_min") {
      c.y_range.lo = to_double(key, value);
    } else if (key == "y_max") {
      c.y_range.hi = to_double(key, value);
    } else if (key == "pattern") {
      c.pattern = parse_rectangle_pattern(value);
    } else if (key == "edge_length") {
      c.edge_length = to_double(key, value);
    } else if (key == "distortion") {
      c.distortion = to_double(key, value);
    } else if (key == "seed") {
      const long s = to_integer(key, value);
      if (s < 0) throw ConfigError("seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "mesh_file") {
      c.mesh_file = value;
    } else if (key == "mesh_format") {
      c.mesh_format = parse_mesh_format(value);
    } else if (key == "ro") {
      c.ro = to_double(key, value);
    } else if (key == "fr") {
      c.fr = to_double(key, value);
    } else if (key == "dt") {
      c.dt = to_double(key, value);
    } else if (key == "t_end") {
      c.t_end = to_double(key, value);
    } else if (key == "snapshot_interval") {
      c.snapshot_interval = to_double(key, value);
    } else if (key == "diagnostic_interval") {
      c.diagnostic_interval = to_double(key, value);
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else if (key == "psi_center_x") {
      c.psi_center_x = to_double(key, value);
    } else if (key == "psi_center_y") {
      c.psi_center_y = to_double(key, value);
    } else if (key == "psi_width") {
      c.psi_width = to_double(key, value);
    } else if (key == "zero_boundary") {
      c.zero_boundary = to_bool(key, value);
    } else if (key == "smoothing") {
      c.smoothing = static_cast<int>(to_integer(key, value));
    } else if (key == "unbalanced") {
      c.unbalanced = to_bool(key, value);
    } else if (key == "drift_tolerance") {
      c.drift_tolerance = to_double(key, value);
    } else if (key == "edge_lengths") {
      c.edge_lengths = to_list(key, value);
    } else if (key == "courant") {
      c.courant = to_double(key, value);
    } else if (key == "min_slope") {
      c.min_slope = to_double(key, value);
    } else if (key == "near_zero_threshold") {
      c.near_zero_threshold = to_double(key, value);
    } else if (key == "threads") {
      c.threads = static_cast<int>(to_integer(key, value));
    } else if (key == "deterministic") {
      c.deterministic = to_bool(key, value);
    }
  }
  c.validate();
  return c;
}

}  // namespace swe
