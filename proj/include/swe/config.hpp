#pragma once

#include "swe/mesh.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace swe {

/*
 * Config file grammar (one entry per line, LF or CRLF):
 *
 *   line    := blank | comment | entry
 *   comment := '#' anything
 *   entry   := key ws* '=' ws* value ws* [comment]
 *   key     := [a-z0-9_]+
 *   value   := '"' chars-without-quote '"' | bare
 *   bare    := run of characters up to '#' or end of line, trimmed
 *
 * Lists are comma separated, optionally wrapped in [ ]. Booleans are
 * true/false. Numbers use '.' as decimal separator; "inf" is accepted for
 * ro. A key may appear once per file. Command-line flags --key value
 * override file entries.
 */
using RawConfig = std::map<std::string, std::string>;

/// Throws ParseError with the offending line.
RawConfig parse_config_text(const std::string& text);
RawConfig parse_config_file(const std::filesystem::path& path);

enum class Experiment { balance, steady, kelvin_circular, kelvin_converge, spectrum };

Experiment parse_experiment(const std::string& name);
std::string experiment_name(Experiment e);

enum class DomainKind { disk, rectangle, file };

struct ExperimentConfig {
  Experiment experiment = Experiment::balance;

  // mesh
  DomainKind domain = DomainKind::disk;
  double radius = 1.0;
  Interval x_range{-1.0, 1.0};
  Interval y_range{-1.0, 1.0};
  RectanglePattern pattern = RectanglePattern::isotropic;
  double edge_length = 0.1;
  double distortion = 0.0;
  std::uint64_t seed = 1;
  std::filesystem::path mesh_file;
  MeshFormat mesh_format = MeshFormat::gmsh22_ascii;

  // physics and time
  double ro = 0.1;
  double fr = 1.0;
  double dt = 0.01;
  double t_end = 1.0;
  double snapshot_interval = 0.0;  ///< 0 disables snapshots
  double diagnostic_interval = 1.0;

  std::filesystem::path output_dir = "output";

  // balance
  std::optional<double> psi_center_x, psi_center_y, psi_width;
  bool zero_boundary = false;

  // steady
  int smoothing = 2;
  bool unbalanced = false;
  double drift_tolerance = 1e-9;

  // kelvin-converge
  std::vector<double> edge_lengths{0.4, 0.2, 0.1};
  double courant = 0.1;
  double min_slope = 1.7;

  // spectrum
  double near_zero_threshold = 1e-8;

  int threads = 1;
  bool deterministic = true;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Experiment defaults overlaid with `raw`; unknown keys are rejected.
ExperimentConfig make_config(Experiment experiment, const RawConfig& raw);

/// Every key make_config understands.
const std::vector<std::string>& config_keys();

}  // namespace swe
