#pragma once

/**
 * Degenerate four-wave-mixing phase matching.
 *
 * Two pump quanta at k1 on branch s1 convert into probes at k2 = k1 + q
 * (branch s2) and k3 = k1 - q (branch s3). Momentum is conserved by
 * construction; frequency matching reduces to
 *
 *   r(q) = 2 q^2 - 2 s1 eps(k1) + s2 eps(k1 + q) + s3 eps(k1 - q) = 0.
 *
 * Squaring away the roots gives a monic cubic in Q = q^2 / alpha^2 whose
 * coefficients depend only on s1 and the scaled fields
 * w = omega_tilde(k1) / alpha^2, wz = omega_z / alpha^2. Its roots are a
 * superset of the physical ones; every candidate is checked against r(q)
 * under the original signs.
 */

#include <array>
#include <span>
#include <vector>

#include "fwm/dispersion.hpp"

namespace fwm {

struct Signs {
  int s1 = 1, s2 = 1, s3 = 1;
  friend bool operator==(const Signs&, const Signs&) = default;
};

struct Configuration {
  int id;
  Signs signs;
  int n_max;  // maximal number of q != 0 solutions (both signs of q)
};

inline constexpr std::array<Configuration, 4> kConfigurations{{
    {1, {1, -1, -1}, 2},
    {2, {1, 1, -1}, 2},
    {3, {1, -1, 1}, 2},
    {4, {-1, -1, -1}, 4},
}};

/// Sign patterns with no q != 0 solution.
inline constexpr std::array<Signs, 4> kExcludedSigns{{
    {-1, 1, 1},
    {-1, 1, -1},
    {-1, -1, 1},
    {1, 1, 1},
}};

/// Throws std::out_of_range for ids outside 1..4.
const Configuration& configuration(int id);

struct FwmSolution {
  Configuration config;
  double k1 = 0.0;
  double q = 0.0;
  double k2 = 0.0;  // k1 + q
  double k3 = 0.0;  // k1 - q
  double residual = 0.0;  // |r(q)|
};

struct CubicProblem {
  int s1 = 1;
  double omega_tilde_scaled = 0.0;
  double omega_z_scaled = 0.0;
  // Q^3 + c2 Q^2 + c1 Q + c0
  double c2 = 0.0, c1 = 0.0, c0 = 0.0;

  double operator()(double Q) const { return ((Q + c2) * Q + c1) * Q + c0; }
};

/// Throws AlphaZero when p.alpha == 0.
CubicProblem make_cubic(int s1, double k1, const SystemParams& p);
CubicProblem make_cubic_scaled(int s1, double omega_tilde_scaled, double omega_z_scaled);

/// Real roots of the cubic, ascending. Complex pairs are dropped when
/// |Im| > 1e-9 max(1, |Q|).
std::vector<double> real_roots(const CubicProblem& cubic);

/// Signed frequency mismatch r(q); zero iff phase matched.
double matching_residual(double k1, double q, const Signs& signs, const SystemParams& p);

/// Discriminant of the scaled cubic, normalized so that a positive value
/// means one real root and a negative value three distinct real roots:
///
///   w^2 [15 w^2 - 4 s1 r (r^2 + 3) - 12 wz^2 - 4],  r = sqrt(w^2 + wz^2).
///
/// Equals minus the classical cubic discriminant. For s1 = +1 it is never
/// positive.
double discriminant(int s1, double omega_tilde_scaled, double omega_z_scaled);

struct SolverOptions {
  double residual_tol = 1e-9;
  double dedup_tol = 1e-7;
};

/// All q != 0 solving r(q) = 0 for the configuration's signs, ascending in q.
/// Falls back to oracle_scan when alpha == 0.
std::vector<FwmSolution> solve_configuration(const Configuration& config, double k1,
                                             const SystemParams& p,
                                             const SolverOptions& opts = {});

/// Union of solve_configuration over the four configurations.
std::vector<FwmSolution> enumerate_all(double k1, const SystemParams& p,
                                       const SolverOptions& opts = {});

/// Upper bound on |q| for any root of r(q), any signs.
double q_bound(double k1, const SystemParams& p);

/// Brute-force validator: sign changes of r(q) on a uniform grid of n_grid
/// intervals over [-q_max, q_max], each refined by bisection to 1e-12.
/// Grid points where r vanishes exactly are reported as roots too.
std::vector<double> oracle_scan(const Signs& signs, double k1, const SystemParams& p,
                                double q_max, int n_grid);

}  // namespace fwm
