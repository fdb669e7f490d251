#pragma once

#include <span>
#include <vector>

#include "fwm/dispersion.hpp"
#include "fwm/propagator.hpp"

namespace fwm {

// One Gaussian packet riding on the eigenspinor psi_branch(k_center).
struct WavepacketSpec {
  double amplitude = 0.0;
  double k_center = 0.0;
  Branch branch = Branch::Lower;

  friend bool operator==(const WavepacketSpec&, const WavepacketSpec&) = default;
};

/// Psi(x, 0) = exp(-x^2 / w^2) sum_j A_j psi_{s_j}(k_j) exp(i k_j x), all
/// packets centred at x = 0 with the common width w.
/// Throws GridTooCoarse if some |k_j| + 6/w reaches the Nyquist wavenumber.
SpinorField build_initial_state(std::span<const WavepacketSpec> packets, double width,
                                const Grid& grid, const SystemParams& p);

/// dx sum (|Psi1|^2 + |Psi2|^2)
double norm(const SpinorField& field);
/// Same, from the Fourier coefficients (dx / n sum |Phi|^2).
double norm_spectral(const SpinorField& field);

/// Generalized momentum int Psi^+ (-i d/dx + alpha/2 sigma_x) Psi dx; the
/// derivative term is evaluated spectrally.
double pi_momentum(const SpinorField& field, const SystemParams& p);

/// Canonical momentum int Psi^+ (-i d/dx) Psi dx (the generator of
/// translations, conserved for any Zeeman field and couplings).
double canonical_momentum(const SpinorField& field);

struct SpectralPeak {
  double k_center = 0.0;
  double window_halfwidth = 0.0;
  double population1 = 0.0;
  double population2 = 0.0;
  double total() const { return population1 + population2; }
};

/// Atoms in [k - dk, k + dk] for every expected k.
/// Throws OverlappingWindows if two windows intersect.
std::vector<SpectralPeak> spectral_peaks(const SpinorField& field,
                                         std::span<const double> expected, double window);

/// max(10 / w, 5 * 2 pi / L)
double default_window(double width, const Grid& grid);

/// Percentage of the initial atom number found in the window around k3 of
/// the final state.
double efficiency(const SpinorField& initial, const SpinorField& final_state, double k3,
                  double window);

}  // namespace fwm
