#pragma once

/**
 * Linear spectrum of the 1D spin-orbit-coupled two-component condensate.
 *
 * Units: hbar = m = 1. The Zeeman field lies in the (x, z) plane,
 * Omega = (omega_x, 0, omega_z) with omega_x, omega_z >= 0.
 *
 * In Fourier space the linear Hamiltonian is the 2x2 matrix
 *
 *   H(k) = k^2/2 I + 1/2 (alpha k + omega_x) sigma_x + 1/2 omega_z sigma_z
 *
 * with eigenvalues mu_{+-}(k) = k^2/2 +- eps(k)/2,
 * eps(k) = sqrt(omega_z^2 + (alpha k + omega_x)^2).
 */

#include <array>
#include <complex>

namespace fwm {

using cplx = std::complex<double>;

struct SystemParams {
  double alpha = 0.0;    // SOC strength
  double omega_x = 0.0;  // in-plane Zeeman component, >= 0
  double omega_z = 0.0;  // Zeeman splitting, >= 0
  double g = 0.0;        // inter-component coupling
  double g1 = 0.0;       // intra-component, species 1
  double g2 = 0.0;       // intra-component, species 2

  // Throws ConfigError on negative Zeeman components or non-finite entries.
  void validate() const;

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

enum class Branch : int { Lower = -1, Upper = +1 };

constexpr int sign_of(Branch b) { return static_cast<int>(b); }
Branch branch_from_sign(int s);  // throws std::invalid_argument unless s = +-1

using Spinor = std::array<cplx, 2>;

// Row-major 2x2 complex matrix.
struct Mat2 {
  cplx a00, a01, a10, a11;

  Spinor operator*(const Spinor& v) const {
    return {a00 * v[0] + a01 * v[1], a10 * v[0] + a11 * v[1]};
  }
  Mat2 operator*(const Mat2& o) const {
    return {a00 * o.a00 + a01 * o.a10, a00 * o.a01 + a01 * o.a11,
            a10 * o.a00 + a11 * o.a10, a10 * o.a01 + a11 * o.a11};
  }
  Mat2 adjoint() const {
    return {std::conj(a00), std::conj(a10), std::conj(a01), std::conj(a11)};
  }
  cplx trace() const { return a00 + a11; }
};

namespace pauli {
inline constexpr Mat2 identity{1.0, 0.0, 0.0, 1.0};
inline constexpr Mat2 sigma_x{0.0, 1.0, 1.0, 0.0};
inline constexpr Mat2 sigma_y{0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0};
inline constexpr Mat2 sigma_z{1.0, 0.0, 0.0, -1.0};
}  // namespace pauli

struct Mode {
  double k = 0.0;
  Branch branch = Branch::Lower;
  double mu = 0.0;
  Spinor spinor{};
};

/// Effective in-plane field seen by a mode of wavenumber k: alpha k + omega_x.
double omega_tilde(double k, const SystemParams& p);

/// Gap between the branches, sqrt(omega_z^2 + omega_tilde(k)^2) >= omega_z.
double epsilon(double k, const SystemParams& p);

double mu(double k, Branch branch, const SystemParams& p);

/// Normalized eigenvector of H(k) on the given branch.
///
/// Phase convention: the first nonzero component is real and non-negative.
/// At omega_tilde(k) = 0 the closed form is 0/0 on the upper branch; the
/// continuity limit (1, 0) / (0, -1) is returned instead (for omega_z > 0).
Mode eigenspinor(double k, Branch branch, const SystemParams& p);

Mat2 hamiltonian_matrix(double k, const SystemParams& p);

/// d mu / dk = k +- alpha * omega_tilde / (2 eps).
/// Throws DegenerateDispersion where eps(k) == 0.
double group_velocity(double k, Branch branch, const SystemParams& p);

}  // namespace fwm
