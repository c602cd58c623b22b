#pragma once

#include "swe/analysis.hpp"
#include "swe/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace swe {

/// Exit statuses shared by the CLI and the drivers.
enum ExitStatus : int { exit_ok = 0, exit_config = 1, exit_breach = 2, exit_numerical = 3 };

/// Mesh described by the config: built or loaded, then distorted when
/// distortion > 0.
std::shared_ptr<const Mesh> build_mesh(const ExperimentConfig& config);

SystemConfig system_config(const ExperimentConfig& config);

struct BalanceResult {
  double divergence_norm = 0.0;
  double max_boundary_psi = 0.0;  ///< max |psi| over boundary dofs
  std::filesystem::path vtk;
};

struct SteadyResult {
  double velocity_drift = 0.0;   ///< max_t |u(t) - u(0)|_inf / |u(0)|_inf
  double thickness_drift = 0.0;  ///< same for h
  double energy_drift = 0.0;     ///< max_t |E(t) - E(0)| / E(0)
  double divergence_norm = 0.0;  ///< of the initial velocity
  long steps = 0;
  bool passed = false;
};

struct KelvinCircularResult {
  double energy_drift = 0.0;
  double initial_extremum = 0.0;  ///< max |h| over P2 dofs
  double final_extremum = 0.0;
  double extremum_ratio = 0.0;
  long steps = 0;
  std::vector<std::filesystem::path> snapshots;
  std::filesystem::path diagnostics;
  bool passed = false;
};

/// Frozen pass bands of the circular Kelvin run.
inline constexpr double kelvin_energy_tolerance = 1e-8;
inline constexpr double kelvin_extremum_low = 0.8;
inline constexpr double kelvin_extremum_high = 1.2;

struct KelvinLevel {
  double edge_length = 0.0;
  double dt = 0.0;
  long steps = 0;
  int triangles = 0;
  double velocity_error = 0.0;
  double thickness_error = 0.0;
  double energy_drift = 0.0;
};

struct KelvinConvergeResult {
  std::vector<KelvinLevel> levels;  ///< decreasing edge length
  ConvergenceTable table;
  std::filesystem::path csv;
  bool passed = false;
};

struct SpectrumResult {
  SpectrumReport report;
  int dofs = 0;
  int components = 0;
  EigenMethod method = EigenMethod::dense;
  std::filesystem::path csv;
  bool passed = false;
};

/// Travelling Kelvin wave along the wall y = 0 (Ro, Fr from config):
/// h = exp(-y/Ro) exp(-(x - t/Fr + 5)^2), u = (h / Fr, 0).
double kelvin_channel_thickness(const Point& p, double t, double ro, double fr);

/// dt = t_end / n with n the smallest count giving (dt / Fr) / edge <= courant.
double kelvin_channel_dt(double t_end, double edge_length, double fr, double courant);

/// One ladder level; `dt` <= 0 picks kelvin_channel_dt.
KelvinLevel run_kelvin_level(const ExperimentConfig& config, double edge_length, double dt = 0.0);

/// Circular Kelvin initial state h = e^{(r - r0)/Ro} cos(theta),
/// u_theta = h / Fr, u_r = 0, r0 = disk radius.
State circular_kelvin_state(const OperatorSet& ops, const ExperimentConfig& config);

// Drivers. Output files go below config.output_dir; a report is printed on `out`.
BalanceResult cmd_balance(const ExperimentConfig& config, std::ostream& out);
SteadyResult cmd_steady(const ExperimentConfig& config, std::ostream& out);
KelvinCircularResult cmd_kelvin_circular(const ExperimentConfig& config, std::ostream& out);
KelvinConvergeResult cmd_kelvin_converge(const ExperimentConfig& config, std::ostream& out);
SpectrumResult cmd_spectrum(const ExperimentConfig& config, std::ostream& out);

/// Runs the experiment named in config; returns the exit status.
int run_experiment(const ExperimentConfig& config, std::ostream& out);

}  // namespace swe
