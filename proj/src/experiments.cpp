#include "swe/experiments.hpp"

#include "swe/errors.hpp"
#include "swe/io.hpp"
#include "swe/random.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>

namespace swe {

namespace {

std::string fmt(double x, int digits = 6) { return format_double(x, digits); }

Point area_centroid(const Mesh& mesh) {
  Point c = Point::Zero();
  double area = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const double a = mesh.signed_area(t);
    c += a * (mesh.vertices()[tri[0]] + mesh.vertices()[tri[1]] + mesh.vertices()[tri[2]]) / 3.0;
    area += a;
  }
  return c / area;
}

double boundary_diameter(const Mesh& mesh) {
  std::vector<int> b;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.is_boundary_vertex(v)) b.push_back(v);
  double d = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j)
      d = std::max(d, (mesh.vertices()[b[i]] - mesh.vertices()[b[j]]).norm());
  return d;
}

double max_abs(const Eigen::VectorXd& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

double relative_drift(const Eigen::VectorXd& now, const Eigen::VectorXd& start) {
  const double scale = max_abs(start);
  const double diff = max_abs(now - start);
  return scale > 0.0 ? diff / scale : diff;
}

long steps_for(double interval, double dt) { return std::max(1L, std::lround(interval / dt)); }

}  // namespace

std::shared_ptr<const Mesh> build_mesh(const ExperimentConfig& config) {
  std::shared_ptr<const Mesh> mesh;
  switch (config.domain) {
    case DomainKind::disk:
      mesh = std::make_shared<const Mesh>(build_disk_mesh(config.radius, config.edge_length));
      break;
    case DomainKind::rectangle:
      mesh = std::make_shared<const Mesh>(
          build_rectangle_mesh(config.x_range, config.y_range, config.edge_length, config.pattern));
      break;
    case DomainKind::file:
      mesh = std::make_shared<const Mesh>(load_mesh(config.mesh_file, config.mesh_format));
      break;
  }
  if (config.distortion > 0.0)
    mesh = std::make_shared<const Mesh>(distort_mesh(*mesh, config.distortion, config.seed));
  return mesh;
}

SystemConfig system_config(const ExperimentConfig& config) {
  SystemConfig s;
  s.rossby = config.ro;
  s.froude = config.fr;
  s.dt = config.dt;
  s.t_end = config.t_end;
  s.validate();
  return s;
}

BalanceResult cmd_balance(const ExperimentConfig& config, std::ostream& out) {
  const auto mesh = build_mesh(config);
  const auto ops = std::make_shared<const OperatorSet>(assemble_operators(mesh));
  const SystemConfig sys = system_config(config);

  const Point centroid = area_centroid(*mesh);
  const Point center(config.psi_center_x.value_or(centroid.x()), config.psi_center_y.value_or(centroid.y()));
  const double width = config.psi_width.value_or(0.25 * boundary_diameter(*mesh));
  ScalarField psi = interpolate_scalar(ops->scalar_space, [&](const Point& p) {
    return std::exp(-(p - center).squaredNorm() / (width * width));
  });
  BalanceResult r;
  for (int d = 0; d < ops->scalar_space->num_dofs(); ++d) {
    if (!ops->scalar_space->is_boundary_dof(d)) continue;
    if (config.zero_boundary) psi.coefficients()(d) = 0.0;
    r.max_boundary_psi = std::max(r.max_boundary_psi, std::abs(psi.coefficients()(d)));
  }
  const State state = balanced_state(psi, *ops, sys);
  r.divergence_norm = discrete_divergence_norm(state.u, *ops);
  r.vtk = config.output_dir / "balance.vtk";
  write_vtk(*mesh, {{"psi", &psi}, {"h", &state.h}}, {{"u", &state.u}}, r.vtk);

  out << "balance: " << mesh->num_triangles() << " triangles, psi width " << fmt(width) << "\n";
  out << "max boundary |psi| = " << fmt(r.max_boundary_psi) << "\n";
  out << "divergence norm = " << fmt(r.divergence_norm) << "\n";
  out << "wrote " << r.vtk.string() << "\n";
  return r;
}

SteadyResult cmd_steady(const ExperimentConfig& config, std::ostream& out) {
  const auto mesh = build_mesh(config);
  const auto ops = std::make_shared<const OperatorSet>(assemble_operators(mesh));
  const SystemConfig sys = system_config(config);

  const ScalarField psi = random_boundary_zero_streamfunction(ops->scalar_space, config.seed, config.smoothing);
  State initial = balanced_state(psi, *ops, sys);
  if (config.unbalanced) {
    Random rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    for (Eigen::Index i = 0; i < initial.u.coefficients().size(); ++i) initial.u.coefficients()(i) = rng.uniform(-1, 1);
  }

  SteadyResult r;
  r.divergence_norm = discrete_divergence_norm(initial.u, *ops);
  const double e0 = energy(initial, *ops, sys);
  const SchurSystem stepper = build_stepper(ops, sys);
  run(stepper, initial, config.t_end, [&](const State& s, long step) {
    r.velocity_drift = std::max(r.velocity_drift, relative_drift(s.u.coefficients(), initial.u.coefficients()));
    r.thickness_drift = std::max(r.thickness_drift, relative_drift(s.h.coefficients(), initial.h.coefficients()));
    if (e0 > 0.0) r.energy_drift = std::max(r.energy_drift, std::abs(energy(s, *ops, sys) - e0) / e0);
    r.steps = step;
  });
  r.passed = std::max(r.velocity_drift, r.thickness_drift) <= config.drift_tolerance;

  out << "steady: " << mesh->num_triangles() << " triangles, " << r.steps << " steps"
      << (config.unbalanced ? " (unbalanced initial velocity)" : "") << "\n";
  out << "initial divergence norm = " << fmt(r.divergence_norm) << "\n";
  out << "max relative drift u = " << fmt(r.velocity_drift) << ", h = " << fmt(r.thickness_drift) << "\n";
  out << "max relative energy drift = " << fmt(r.energy_drift) << "\n";
  out << (r.passed ? "PASS" : "FAIL") << ": drift tolerance " << fmt(config.drift_tolerance) << "\n";
  return r;
}

State circular_kelvin_state(const OperatorSet& ops, const ExperimentConfig& config) {
  const double r0 = config.radius;
  auto amplitude = [&](const Point& p) {
    const double r = p.norm();
    const double c = r > 0.0 ? p.x() / r : 1.0;
    return std::exp((r - r0) / config.ro) * c;
  };
  State s{interpolate_vector(ops.vector_space,
                             [&](const Point& p) {
                               const double r = p.norm();
                               if (r == 0.0) return Eigen::Vector2d(0.0, 0.0);
                               const double u_theta = amplitude(p) / config.fr;
                               return Eigen::Vector2d(-u_theta * p.y() / r, u_theta * p.x() / r);
                             }),
          interpolate_scalar(ops.scalar_space, amplitude), 0.0};
  return s;
}

KelvinCircularResult cmd_kelvin_circular(const ExperimentConfig& config, std::ostream& out) {
  const auto mesh = build_mesh(config);
  const auto ops = std::make_shared<const OperatorSet>(assemble_operators(mesh));
  const SystemConfig sys = system_config(config);
  const State initial = circular_kelvin_state(*ops, config);

  KelvinCircularResult r;
  r.initial_extremum = max_abs(initial.h.coefficients());
  const double e0 = energy(initial, *ops, sys);
  const long diag_every = steps_for(config.diagnostic_interval, sys.dt);
  const long snap_every = config.snapshot_interval > 0.0 ? steps_for(config.snapshot_interval, sys.dt) : 0;
  const long total = std::lround((config.t_end - initial.t) / sys.dt);

  SnapshotWriter snapshots(config.output_dir, "kelvin_circular");
  std::vector<std::vector<double>> rows;
  const SchurSystem stepper = build_stepper(ops, sys);
  const State final_state = run(stepper, initial, config.t_end, [&](const State& s, long step) {
    if (snap_every && step % snap_every == 0)
      r.snapshots.push_back(snapshots.write(*mesh, {{"h", &s.h}}, {{"u", &s.u}}));
    if (step % diag_every == 0 || step == total) {
      const double e = energy(s, *ops, sys);
      const double drift = e0 > 0.0 ? std::abs(e - e0) / e0 : std::abs(e - e0);
      r.energy_drift = std::max(r.energy_drift, drift);
      rows.push_back({s.t, e, drift, discrete_divergence_norm(s.u, *ops), max_abs(s.h.coefficients())});
    }
  });
  r.steps = total;
  r.final_extremum = max_abs(final_state.h.coefficients());
  r.extremum_ratio = r.initial_extremum > 0.0 ? r.final_extremum / r.initial_extremum : 1.0;
  r.diagnostics = config.output_dir / "kelvin_circular_diagnostics.csv";
  write_csv_timeseries({"t", "energy", "relative_energy_drift", "divergence_norm", "max_abs_h"}, rows, r.diagnostics);
  r.passed = r.energy_drift < kelvin_energy_tolerance && r.extremum_ratio >= kelvin_extremum_low &&
             r.extremum_ratio <= kelvin_extremum_high;

  out << "kelvin-circular: " << mesh->num_triangles() << " triangles, " << r.steps << " steps\n";
  out << "max relative energy drift = " << fmt(r.energy_drift) << "\n";
  out << "max |h|: t0 " << fmt(r.initial_extremum) << ", t_end " << fmt(r.final_extremum) << ", ratio "
      << fmt(r.extremum_ratio) << "\n";
  out << "wrote " << r.snapshots.size() << " snapshots and " << r.diagnostics.string() << "\n";
  out << (r.passed ? "PASS" : "FAIL") << ": energy drift < " << fmt(kelvin_energy_tolerance) << ", extremum ratio in ["
      << fmt(kelvin_extremum_low) << ", " << fmt(kelvin_extremum_high) << "]\n";
  return r;
}

double kelvin_channel_thickness(const Point& p, double t, double ro, double fr) {
  const double s = p.x() - t / fr + 5.0;
  return std::exp(-p.y() / ro) * std::exp(-s * s);
}

double kelvin_channel_dt(double t_end, double edge_length, double fr, double courant) {
  const double n = std::ceil(t_end / (courant * edge_length * fr) - 1e-9);
  return t_end / std::max(1.0, n);
}

KelvinLevel run_kelvin_level(const ExperimentConfig& config, double edge_length, double dt) {
  ExperimentConfig level = config;
  level.domain = config.domain == DomainKind::file ? DomainKind::rectangle : config.domain;
  level.edge_length = edge_length;
  level.dt = dt > 0.0 ? dt : kelvin_channel_dt(config.t_end, edge_length, config.fr, config.courant);
  const auto mesh = build_mesh(level);
  const auto ops = std::make_shared<const OperatorSet>(assemble_operators(mesh));
  const SystemConfig sys = system_config(level);
  const double ro = config.ro, fr = config.fr;

  auto exact_h = [&](double t) { return [=](const Point& p) { return kelvin_channel_thickness(p, t, ro, fr); }; };
  auto exact_u = [&](double t) {
    return [=](const Point& p) { return Eigen::Vector2d(kelvin_channel_thickness(p, t, ro, fr) / fr, 0.0); };
  };
  State s{interpolate_vector(ops->vector_space, exact_u(0.0)), interpolate_scalar(ops->scalar_space, exact_h(0.0)),
          0.0};
  const double e0 = energy(s, *ops, sys);
  const SchurSystem stepper = build_stepper(ops, sys);
  s = run(stepper, s, config.t_end);

  KelvinLevel r;
  r.edge_length = edge_length;
  r.dt = level.dt;
  r.steps = std::lround(config.t_end / level.dt);
  r.triangles = mesh->num_triangles();
  r.velocity_error = l2_error(s.u, exact_u(s.t));
  r.thickness_error = l2_error(s.h, exact_h(s.t));
  r.energy_drift = std::abs(energy(s, *ops, sys) - e0) / e0;
  return r;
}

KelvinConvergeResult cmd_kelvin_converge(const ExperimentConfig& config, std::ostream& out) {
  std::vector<double> lengths = config.edge_lengths;
  std::sort(lengths.begin(), lengths.end(), std::greater<>());
  KelvinConvergeResult r;
  if (config.threads > 1) {
    std::vector<std::future<KelvinLevel>> jobs;
    for (double h : lengths) jobs.push_back(std::async(std::launch::async, run_kelvin_level, config, h, 0.0));
    for (auto& j : jobs) r.levels.push_back(j.get());
  } else {
    for (double h : lengths) r.levels.push_back(run_kelvin_level(config, h));
  }
  std::vector<ConvergenceRow> rows;
  for (const auto& l : r.levels) rows.push_back({l.edge_length, l.velocity_error, l.thickness_error});
  r.table = fit_convergence(rows);
  r.csv = config.output_dir / "kelvin_convergence.csv";
  write_csv(r.table, r.csv);
  r.passed = r.table.velocity_slope >= config.min_slope && r.table.thickness_slope >= config.min_slope;

  out << "kelvin-converge: t_end " << fmt(config.t_end) << ", Ro " << fmt(config.ro) << ", Fr " << fmt(config.fr) << "\n";
  for (const auto& l : r.levels)
    out << "  dx " << fmt(l.edge_length) << ": " << l.triangles << " triangles, dt " << fmt(l.dt) << ", u error "
        << fmt(l.velocity_error) << ", h error " << fmt(l.thickness_error) << ", energy drift " << fmt(l.energy_drift, 3)
        << "\n";
  out << "slopes: velocity " << fmt(r.table.velocity_slope) << ", thickness " << fmt(r.table.thickness_slope) << "\n";
  out << "wrote " << r.csv.string() << "\n";
  out << (r.passed ? "PASS" : "FAIL") << ": both slopes >= " << fmt(config.min_slope) << "\n";
  return r;
}

SpectrumResult cmd_spectrum(const ExperimentConfig& config, std::ostream& out) {
  const auto mesh = build_mesh(config);
  const auto ops = std::make_shared<const OperatorSet>(assemble_operators(mesh));
  SpectrumResult r;
  r.dofs = ops->scalar_space->num_dofs();
  r.components = mesh->num_components();
  r.method = r.dofs <= dense_eigen_cap ? EigenMethod::dense : EigenMethod::shift_invert;
  r.report = laplacian_spectrum(*ops, config.near_zero_threshold, r.method);
  r.csv = config.output_dir / "spectrum.csv";
  write_csv(r.report, r.csv);
  r.passed = r.report.near_zero_count == 1;

  out << "spectrum: " << mesh->num_triangles() << " triangles, " << r.dofs << " P2 dofs, " << r.components
      << " component(s), " << (r.method == EigenMethod::dense ? "dense" : "shift-invert") << " solve\n";
  out << "lambda_max = " << fmt(r.report.lambda_max) << ", threshold = " << fmt(r.report.threshold) << "\n";
  out << "near-zero eigenvalues = " << r.report.near_zero_count << ", gap ratio = " << fmt(r.report.gap_ratio) << "\n";
  out << "wrote " << r.csv.string() << "\n";
  out << (r.passed ? "PASS" : "FAIL") << ": exactly one near-zero eigenvalue\n";
  return r;
}

int run_experiment(const ExperimentConfig& config, std::ostream& out) {
  switch (config.experiment) {
    case Experiment::balance:
      cmd_balance(config, out);
      return exit_ok;
    case Experiment::steady:
      return cmd_steady(config, out).passed ? exit_ok : exit_breach;
    case Experiment::kelvin_circular:
      return cmd_kelvin_circular(config, out).passed ? exit_ok : exit_breach;
    case Experiment::kelvin_converge:
      return cmd_kelvin_converge(config, out).passed ? exit_ok : exit_breach;
    case Experiment::spectrum:
      return cmd_spectrum(config, out).passed ? exit_ok : exit_breach;
  }
  return exit_config;
}

}  // namespace swe
