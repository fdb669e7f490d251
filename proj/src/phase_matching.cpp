#include "fwm/phase_matching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "fwm/errors.hpp"

namespace fwm {

namespace {

// dr/dq for Newton polishing; NaN where a gap closes.
double residual_derivative(double k1, double q, const Signs& s, const SystemParams& p) {
  const double e2 = epsilon(k1 + q, p);
  const double e3 = epsilon(k1 - q, p);
  if (e2 == 0.0 || e3 == 0.0) return std::nan("");
  return 4.0 * q + s.s2 * p.alpha * omega_tilde(k1 + q, p) / e2 -
         s.s3 * p.alpha * omega_tilde(k1 - q, p) / e3;
}

// Size of the terms in r(q), used to decide whether a squared-cubic root is
// a genuine root of r before polishing.
double residual_scale(double k1, double q, const SystemParams& p) {
  return 2.0 * q * q + 2.0 * epsilon(k1, p) + epsilon(k1 + q, p) + epsilon(k1 - q, p);
}

double polish(double k1, double q, const Signs& s, const SystemParams& p) {
  for (int it = 0; it < 30; ++it) {
    const double r = matching_residual(k1, q, s, p);
    const double d = residual_derivative(k1, q, s, p);
    if (!std::isfinite(d) || d == 0.0) break;
    const double step = r / d;
    q -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(q))) break;
  }
  return q;
}

std::vector<FwmSolution> accept_candidates(const Configuration& config, double k1,
                                           const SystemParams& p,
                                           const std::vector<double>& candidates,
                                           const SolverOptions& opts) {
  std::vector<double> qs;
  for (double q0 : candidates) {
    if (!std::isfinite(q0) || std::abs(q0) < opts.dedup_tol) continue;
    const double r0 = matching_residual(k1, q0, config.signs, p);
    if (std::abs(r0) > 1e-6 * residual_scale(k1, q0, p)) continue;  // spurious
    const double q = polish(k1, q0, config.signs, p);
    if (std::abs(q) < opts.dedup_tol) continue;
    if (std::abs(matching_residual(k1, q, config.signs, p)) >= opts.residual_tol) continue;
    qs.push_back(q);
  }
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end(),
                       [&](double a, double b) { return std::abs(a - b) < opts.dedup_tol; }),
           qs.end());

  std::vector<FwmSolution> out;
  out.reserve(qs.size());
  for (double q : qs) {
    out.push_back(FwmSolution{config, k1, q, k1 + q, k1 - q,
                              std::abs(matching_residual(k1, q, config.signs, p))});
  }
  return out;
}

}  // namespace

const Configuration& configuration(int id) {
  if (id < 1 || id > static_cast<int>(kConfigurations.size())) {
    throw std::out_of_range("configuration id must be 1..4, got " + std::to_string(id));
  }
  return kConfigurations[static_cast<std::size_t>(id - 1)];
}

CubicProblem make_cubic_scaled(int s1, double w, double wz) {
  const double r2 = w * w + wz * wz;
  const double r = std::sqrt(r2);
  CubicProblem c;
  c.s1 = s1;
  c.omega_tilde_scaled = w;
  c.omega_z_scaled = wz;
  c.c2 = -(1.0 + 4.0 * s1 * r);
  c.c1 = 2.0 * s1 * r + 5.0 * r2;
  c.c0 = -wz * wz - 2.0 * s1 * r * r2;
  return c;
}

CubicProblem make_cubic(int s1, double k1, const SystemParams& p) {
  if (p.alpha == 0.0) throw AlphaZero("scaled phase-matching cubic requires alpha != 0");
  const double a2 = p.alpha * p.alpha;
  return make_cubic_scaled(s1, omega_tilde(k1, p) / a2, p.omega_z / a2);
}

std::vector<double> real_roots(const CubicProblem& cubic) {
  Eigen::Matrix3d companion;
  companion << 0.0, 0.0, -cubic.c0,
               1.0, 0.0, -cubic.c1,
               0.0, 1.0, -cubic.c2;
  Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, /*computeEigenvectors=*/false);
  std::vector<double> roots;
  for (const auto& z : solver.eigenvalues()) {
    if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z))) continue;
    double x = z.real();
    // One or two Newton steps on the cubic tighten simple roots.
    for (int it = 0; it < 3; ++it) {
      const double d = (3.0 * x + 2.0 * cubic.c2) * x + cubic.c1;
      if (d == 0.0) break;
      const double nx = x - cubic(x) / d;
      if (!std::isfinite(nx) || std::abs(nx - x) > 1e-6 * std::max(1.0, std::abs(x))) break;
      x = nx;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double matching_residual(double k1, double q, const Signs& s, const SystemParams& p) {
  return 2.0 * q * q - 2.0 * s.s1 * epsilon(k1, p) + s.s2 * epsilon(k1 + q, p) +
         s.s3 * epsilon(k1 - q, p);
}

double discriminant(int s1, double w, double wz) {
  const double w2 = w * w;
  const double r2 = w2 + wz * wz;
  const double r = std::sqrt(r2);
  return w2 * (15.0 * w2 - 4.0 * s1 * r * (r2 + 3.0) - 12.0 * wz * wz - 4.0);
}

namespace {

// Real parts of all eigenvalues that are real up to a looser threshold. At a
// double root (discriminant zero, e.g. omega_tilde = 0) the companion matrix
// splits it into a pair with |Im| ~ sqrt(eps); back-substitution into the
// residual decides which candidates are genuine.
std::vector<double> candidate_roots(const CubicProblem& cubic) {
  Eigen::Matrix3d companion;
  companion << 0.0, 0.0, -cubic.c0,
               1.0, 0.0, -cubic.c1,
               0.0, 1.0, -cubic.c2;
  Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
  std::vector<double> roots;
  for (const auto& z : solver.eigenvalues()) {
    if (std::abs(z.imag()) <= 1e-6 * std::max(1.0, std::abs(z))) roots.push_back(z.real());
  }
  return roots;
}

}  // namespace

std::vector<FwmSolution> solve_configuration(const Configuration& config, double k1,
                                             const SystemParams& p,
                                             const SolverOptions& opts) {
  std::vector<double> candidates;
  if (p.alpha == 0.0) {
    candidates = oracle_scan(config.signs, k1, p, q_bound(k1, p), 20000);
  } else {
    const CubicProblem cubic = make_cubic(config.signs.s1, k1, p);
    for (double Q : candidate_roots(cubic)) {
      if (Q <= 0.0) continue;
      const double q = std::abs(p.alpha) * std::sqrt(Q);
      candidates.push_back(q);
      candidates.push_back(-q);
    }
  }
  return accept_candidates(config, k1, p, candidates, opts);
}

std::vector<FwmSolution> enumerate_all(double k1, const SystemParams& p,
                                       const SolverOptions& opts) {
  std::vector<FwmSolution> all;
  for (const auto& c : kConfigurations) {
    auto sols = solve_configuration(c, k1, p, opts);
    all.insert(all.end(), sols.begin(), sols.end());
  }

  const double q_max = q_bound(k1, p);
  for (const Signs& s : kExcludedSigns) {
    for (double q : oracle_scan(s, k1, p, q_max, 4000)) {
      if (std::abs(q) >= opts.dedup_tol) {
        throw Error("excluded sign pattern (" + std::to_string(s.s1) + "," +
                    std::to_string(s.s2) + "," + std::to_string(s.s3) +
                    ") has a root at q = " + std::to_string(q));
      }
    }
  }
  return all;
}

double q_bound(double k1, const SystemParams& p) {
  const double a = std::abs(p.alpha);
  const double c = 2.0 * epsilon(k1, p) + 2.0 * (p.omega_x + p.omega_z) + 2.0 * a * std::abs(k1);
  return (2.0 * a + std::sqrt(4.0 * a * a + 8.0 * c)) / 4.0 * 1.05 + 1.0;
}

std::vector<double> oracle_scan(const Signs& s, double k1, const SystemParams& p,
                                double q_max, int n_grid) {
  if (!(q_max > 0.0) || n_grid < 1) {
    throw std::invalid_argument("oracle_scan needs q_max > 0 and n_grid >= 1");
  }
  auto r = [&](double q) { return matching_residual(k1, q, s, p); };
  const double h = 2.0 * q_max / n_grid;
  auto grid_q = [&](int i) { return i == n_grid ? q_max : -q_max + i * h; };

  std::vector<double> roots;
  double q_prev = grid_q(0);
  double r_prev = r(q_prev);
  if (r_prev == 0.0) roots.push_back(q_prev);
  for (int i = 1; i <= n_grid; ++i) {
    // Keep the symmetric grid point exactly at q = 0 when n_grid is even.
    const double q = (2 * i == n_grid) ? 0.0 : grid_q(i);
    const double rq = r(q);
    if (rq == 0.0) {
      roots.push_back(q);
    } else if (r_prev != 0.0 && std::signbit(rq) != std::signbit(r_prev)) {
      double lo = q_prev, hi = q, r_lo = r_prev;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double rm = r(mid);
        if (rm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (std::signbit(rm) == std::signbit(r_lo)) {
          lo = mid;
          r_lo = rm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    q_prev = q;
    r_prev = rq;
  }
  return roots;
}

}  // namespace fwm
