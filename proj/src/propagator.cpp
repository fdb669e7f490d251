#include "fwm/propagator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fwm/errors.hpp"

namespace fwm {

Grid::Grid(std::size_t n, double L) : n_points(n), length(L) {
  if (n < 2 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("grid size must be a power of two >= 2, got " +
                                std::to_string(n));
  }
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("grid length must be > 0");
}

double Grid::wavenumber(std::size_t j) const {
  const auto n = static_cast<long long>(n_points);
  const long long m = static_cast<long long>(j) < n / 2 ? static_cast<long long>(j)
                                                        : static_cast<long long>(j) - n;
  return 2.0 * std::numbers::pi * static_cast<double>(m) / length;
}

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> k(n_points);
  for (std::size_t j = 0; j < n_points; ++j) k[j] = wavenumber(j);
  return k;
}

double Grid::nyquist() const { return std::numbers::pi / dx(); }

SpectralField to_fourier(const SpinorField& field, const Fft& fft) {
  SpectralField s{field.psi1, field.psi2};
  fft.forward(s.phi1);
  fft.forward(s.phi2);
  return s;
}

SpectralField to_fourier(const SpinorField& field) {
  return to_fourier(field, Fft(field.grid.n_points));
}

Mat2 linear_propagator(double k, const SystemParams& p, double tau) {
  const double a = 0.5 * k * k;
  const double bx = 0.5 * omega_tilde(k, p);
  const double bz = 0.5 * p.omega_z;
  const double b = std::hypot(bx, bz);
  const double c = std::cos(b * tau);
  // sin(b tau) / b, finite as b -> 0
  const double s = b > 0.0 ? std::sin(b * tau) / b : tau;
  const cplx phase = std::polar(1.0, -a * tau);
  const cplx i{0.0, 1.0};
  return Mat2{phase * (c - i * s * bz), phase * (-i * s * bx), phase * (-i * s * bx),
              phase * (c + i * s * bz)};
}

StepPlan::StepPlan(const Grid& grid, const SystemParams& p, double dt)
    : grid_(grid), params_(p), dt_(dt), fft_(grid.n_points) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  half_.resize(grid.n_points);
  full_.resize(grid.n_points);
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    const double k = grid.wavenumber(j);
    half_[j] = linear_propagator(k, p, 0.5 * dt);
    full_[j] = linear_propagator(k, p, dt);
  }
}

bool StepPlan::matches(const Grid& grid, const SystemParams& p, double dt) const {
  return grid == grid_ && dt == dt_ && p.alpha == params_.alpha &&
         p.omega_x == params_.omega_x && p.omega_z == params_.omega_z;
}

void apply_linear(SpinorField& field, std::span<const Mat2> ops, const Fft& fft) {
  const std::size_t n = field.grid.n_points;
  if (ops.size() != n || fft.size() != n) throw PlanMismatch("operator/grid size mismatch");
  fft.forward(field.psi1);
  fft.forward(field.psi2);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx a = field.psi1[j];
    const cplx b = field.psi2[j];
    const Mat2& u = ops[j];
    field.psi1[j] = (u.a00 * a + u.a01 * b) * inv_n;
    field.psi2[j] = (u.a10 * a + u.a11 * b) * inv_n;
  }
  fft.backward(field.psi1);
  fft.backward(field.psi2);
}

void linear_half_step(SpinorField& field, const StepPlan& plan) {
  if (!(field.grid == plan.grid())) throw PlanMismatch("step plan built for a different grid");
  apply_linear(field, plan.half_step(), plan.fft());
}

void nonlinear_step(SpinorField& field, const SystemParams& p, double dt) {
  const std::size_t n = field.grid.n_points;
  const double h = 0.5 * dt;
  for (std::size_t j = 0; j < n; ++j) {
    const double n1 = std::norm(field.psi1[j]);
    const double n2 = std::norm(field.psi2[j]);
    field.psi1[j] *= std::polar(1.0, -h * (p.g1 * n1 + p.g * n2));
    field.psi2[j] *= std::polar(1.0, -h * (p.g * n1 + p.g2 * n2));
  }
}

namespace {

bool all_finite(const SpinorField& f) {
  double acc = 0.0;
  for (std::size_t j = 0; j < f.psi1.size(); ++j) acc += std::norm(f.psi1[j]) + std::norm(f.psi2[j]);
  return std::isfinite(acc);
}

std::size_t step_count(double t_final, double dt) {
  if (!(t_final > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("t_final and dt must be positive");
  }
  const double ratio = t_final / dt;
  const double steps = std::round(ratio);
  if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * ratio) {
    throw std::invalid_argument("t_final must be a whole number of time steps");
  }
  return static_cast<std::size_t>(steps);
}

}  // namespace

void propagate(SpinorField& field, const SystemParams& p, const PropagateOptions& opts,
               const SnapshotObserver& observer) {
  const StepPlan plan(field.grid, p, opts.dt);
  propagate(field, plan, opts, observer);
}

void propagate(SpinorField& field, const StepPlan& plan, const PropagateOptions& opts,
               const SnapshotObserver& observer) {
  if (!(field.grid == plan.grid()) || opts.dt != plan.dt()) {
    throw PlanMismatch("step plan does not match field grid or dt");
  }
  const SystemParams& p = plan.params();
  const std::size_t n_steps = step_count(opts.t_final, opts.dt);
  const double t0 = field.time;

  if (observer) observer(field, 0);

  // Consecutive trailing and leading half steps are merged into one full
  // linear step; the owed half step is flushed before every observation.
  bool owe_half = false;
  for (std::size_t step = 1; step <= n_steps; ++step) {
    apply_linear(field, owe_half ? plan.full_step() : plan.half_step(), plan.fft());
    nonlinear_step(field, p, opts.dt);
    owe_half = true;

    const bool last = step == n_steps;
    const bool snap = opts.snapshot_every > 0 && step % opts.snapshot_every == 0;
    if (last || snap) {
      apply_linear(field, plan.half_step(), plan.fft());
      owe_half = false;
    }
    field.time = t0 + static_cast<double>(step) * opts.dt;

    if ((opts.nan_check_every > 0 && step % opts.nan_check_every == 0) || last) {
      if (!all_finite(field)) throw NaNEncountered(step, field.time);
    }
    if ((last || snap) && observer) observer(field, step);
  }
}

double energy(const SpinorField& field, const SystemParams& p) {
  const Grid& grid = field.grid;
  const std::size_t n = grid.n_points;
  const SpectralField s = to_fourier(field);
  const double dx = grid.dx();

  double linear = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Mat2 h = hamiltonian_matrix(grid.wavenumber(j), p);
    const Spinor v{s.phi1[j], s.phi2[j]};
    const Spinor hv = h * v;
    linear += (std::conj(v[0]) * hv[0] + std::conj(v[1]) * hv[1]).real();
  }
  linear *= dx / static_cast<double>(n);

  double interaction = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double n1 = std::norm(field.psi1[j]);
    const double n2 = std::norm(field.psi2[j]);
    interaction += 0.25 * p.g1 * n1 * n1 + 0.25 * p.g2 * n2 * n2 + 0.5 * p.g * n1 * n2;
  }
  return linear + interaction * dx;
}

}  // namespace fwm
