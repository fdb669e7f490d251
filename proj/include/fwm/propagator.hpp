#pragma once

/**
 * Split-step spectral integrator for the coupled Gross-Pitaevskii equations
 *
 *   i d/dt Psi = H Psi + 1/2 G(Psi) Psi,
 *   G = diag(g1 |Psi1|^2 + g |Psi2|^2,  g |Psi1|^2 + g2 |Psi2|^2),
 *
 * on a uniform periodic grid. The linear part is applied exactly per Fourier
 * mode (2x2 matrix exponential), the nonlinear part as a pointwise phase
 * rotation; steps are composed as Strang L/2 - N - L/2.
 */

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fwm/dispersion.hpp"
#include "fwm/fft.hpp"

namespace fwm {

struct Grid {
  std::size_t n_points = 0;
  double length = 0.0;

  // Throws std::invalid_argument unless n_points is a power of two >= 2
  // and length > 0.
  Grid(std::size_t n, double L);
  Grid() = default;

  double dx() const { return length / static_cast<double>(n_points); }
  // Positions run from -L/2 in steps of dx; x = 0 is sample n/2.
  double x(std::size_t j) const { return -0.5 * length + static_cast<double>(j) * dx(); }
  // FFT ordering: 0, 1, ..., n/2 - 1, -n/2, ..., -1 (times 2 pi / L).
  double wavenumber(std::size_t j) const;
  std::vector<double> wavenumbers() const;
  double nyquist() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

struct SpinorField {
  Grid grid;
  std::vector<cplx> psi1;
  std::vector<cplx> psi2;
  double time = 0.0;

  explicit SpinorField(const Grid& g) : grid(g), psi1(g.n_points), psi2(g.n_points) {}
  SpinorField() = default;
};

/// Fourier transforms (unnormalized, FFT ordering) of both components.
struct SpectralField {
  std::vector<cplx> phi1;
  std::vector<cplx> phi2;
};
SpectralField to_fourier(const SpinorField& field, const Fft& fft);
SpectralField to_fourier(const SpinorField& field);

/// exp(-i H(k) tau) via the Pauli decomposition of H(k).
Mat2 linear_propagator(double k, const SystemParams& p, double tau);

/// Cached per-wavenumber linear propagators for one (grid, params, dt).
class StepPlan {
 public:
  StepPlan(const Grid& grid, const SystemParams& p, double dt);

  const Grid& grid() const { return grid_; }
  double dt() const { return dt_; }
  const SystemParams& params() const { return params_; }
  const Fft& fft() const { return fft_; }

  // exp(-i H(k_j) dt/2) and exp(-i H(k_j) dt).
  std::span<const Mat2> half_step() const { return half_; }
  std::span<const Mat2> full_step() const { return full_; }

  // True if the plan's linear operator is valid for this grid, params and dt.
  bool matches(const Grid& grid, const SystemParams& p, double dt) const;

 private:
  Grid grid_;
  SystemParams params_;
  double dt_;
  Fft fft_;
  std::vector<Mat2> half_;
  std::vector<Mat2> full_;
};

/// Apply a per-wavenumber 2x2 operator in Fourier space.
void apply_linear(SpinorField& field, std::span<const Mat2> ops, const Fft& fft);

/// Psi_hat(k) <- exp(-i H(k) dt/2) Psi_hat(k). Throws PlanMismatch if the
/// plan was built for another grid.
void linear_half_step(SpinorField& field, const StepPlan& plan);

/// Pointwise Psi_j <- Psi_j exp(-i dt G_jj / 2). Moduli are untouched.
void nonlinear_step(SpinorField& field, const SystemParams& p, double dt);

struct PropagateOptions {
  double t_final = 0.0;
  double dt = 5e-4;
  std::size_t snapshot_every = 0;  // in steps; 0 = only initial and final
  std::size_t nan_check_every = 1000;
};

/// Called with the field in position space and the number of completed steps.
using SnapshotObserver = std::function<void(const SpinorField&, std::size_t step)>;

/// Integrate to t_final. The observer sees step 0, every snapshot_every-th
/// step and the final step. Throws NaNEncountered on a non-finite field,
/// std::invalid_argument if t_final is not a whole number of steps.
void propagate(SpinorField& field, const SystemParams& p, const PropagateOptions& opts,
               const SnapshotObserver& observer = {});

/// Same, reusing a prebuilt plan (its params and dt must match).
void propagate(SpinorField& field, const StepPlan& plan, const PropagateOptions& opts,
               const SnapshotObserver& observer = {});

/// Gross-Pitaevskii energy
///   E = sum_k Psi_hat^+ H(k) Psi_hat dx/n
///     + int [g1 |Psi1|^4 / 4 + g2 |Psi2|^4 / 4 + g |Psi1|^2 |Psi2|^2 / 2] dx,
/// the functional whose variation yields the equation of motion above.
double energy(const SpinorField& field, const SystemParams& p);

}  // namespace fwm
