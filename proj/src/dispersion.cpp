#include "fwm/dispersion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fwm/errors.hpp"

namespace fwm {

void SystemParams::validate() const {
  for (double v : {alpha, omega_x, omega_z, g, g1, g2}) {
    if (!std::isfinite(v)) throw ConfigError("system parameters must be finite");
  }
  if (omega_x < 0.0 || omega_z < 0.0) {
    throw ConfigError("omega_x and omega_z must be non-negative");
  }
}

Branch branch_from_sign(int s) {
  if (s == 1) return Branch::Upper;
  if (s == -1) return Branch::Lower;
  throw std::invalid_argument("branch sign must be +1 or -1, got " + std::to_string(s));
}

double omega_tilde(double k, const SystemParams& p) { return p.alpha * k + p.omega_x; }

double epsilon(double k, const SystemParams& p) {
  return std::hypot(p.omega_z, omega_tilde(k, p));
}

double mu(double k, Branch branch, const SystemParams& p) {
  return 0.5 * k * k + 0.5 * sign_of(branch) * epsilon(k, p);
}

Mode eigenspinor(double k, Branch branch, const SystemParams& p) {
  const double wt = omega_tilde(k, p);
  const double eps = epsilon(k, p);
  // (eps + omega_z, wt) and (wt, -(eps + omega_z)) are the closed-form
  // eigenvectors rescaled to avoid the eps - omega_z cancellation.
  const double a = eps + p.omega_z;
  const double norm = std::hypot(a, wt);

  Spinor v{};
  if (norm == 0.0) {
    // eps = omega_z = 0: H(k) is scalar, any orthonormal pair works.
    v = branch == Branch::Upper ? Spinor{1.0, 0.0} : Spinor{0.0, -1.0};
  } else if (branch == Branch::Upper) {
    v = {a / norm, wt / norm};
  } else {
    v = {wt / norm, -a / norm};
    if (wt < 0.0) v = {-v[0], -v[1]};
  }
  return Mode{k, branch, mu(k, branch, p), v};
}

Mat2 hamiltonian_matrix(double k, const SystemParams& p) {
  const double kin = 0.5 * k * k;
  const double hx = 0.5 * omega_tilde(k, p);
  const double hz = 0.5 * p.omega_z;
  return Mat2{kin + hz, hx, hx, kin - hz};
}

double group_velocity(double k, Branch branch, const SystemParams& p) {
  const double eps = epsilon(k, p);
  if (eps == 0.0) {
    throw DegenerateDispersion("group velocity undefined at k = " + std::to_string(k) +
                               " where the branches touch");
  }
  return k + sign_of(branch) * p.alpha * omega_tilde(k, p) / (2.0 * eps);
}

}  // namespace fwm
