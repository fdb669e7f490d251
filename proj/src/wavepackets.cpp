#include "fwm/wavepackets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fwm/errors.hpp"

namespace fwm {

SpinorField build_initial_state(std::span<const WavepacketSpec> packets, double width,
                                const Grid& grid, const SystemParams& p) {
  if (!(width > 0.0)) throw std::invalid_argument("packet width must be positive");
  for (const auto& w : packets) {
    if (w.amplitude < 0.0) throw std::invalid_argument("packet amplitude must be >= 0");
    if (std::abs(w.k_center) + 6.0 / width >= grid.nyquist()) {
      throw GridTooCoarse("packet at k = " + std::to_string(w.k_center) +
                          " is not resolved: Nyquist wavenumber " +
                          std::to_string(grid.nyquist()));
    }
  }

  SpinorField field(grid);
  std::vector<Spinor> spinors;
  spinors.reserve(packets.size());
  for (const auto& w : packets) spinors.push_back(eigenspinor(w.k_center, w.branch, p).spinor);

  for (std::size_t j = 0; j < grid.n_points; ++j) {
    const double x = grid.x(j);
    const double envelope = std::exp(-(x * x) / (width * width));
    cplx a{}, b{};
    for (std::size_t m = 0; m < packets.size(); ++m) {
      const cplx carrier = packets[m].amplitude * envelope * std::polar(1.0, packets[m].k_center * x);
      a += carrier * spinors[m][0];
      b += carrier * spinors[m][1];
    }
    field.psi1[j] = a;
    field.psi2[j] = b;
  }
  return field;
}

double norm(const SpinorField& field) {
  double acc = 0.0;
  for (std::size_t j = 0; j < field.psi1.size(); ++j) {
    acc += std::norm(field.psi1[j]) + std::norm(field.psi2[j]);
  }
  return acc * field.grid.dx();
}

double norm_spectral(const SpinorField& field) {
  const SpectralField s = to_fourier(field);
  double acc = 0.0;
  for (std::size_t j = 0; j < s.phi1.size(); ++j) acc += std::norm(s.phi1[j]) + std::norm(s.phi2[j]);
  return acc * field.grid.dx() / static_cast<double>(field.grid.n_points);
}

double canonical_momentum(const SpinorField& field) {
  const SpectralField s = to_fourier(field);
  double acc = 0.0;
  for (std::size_t j = 0; j < s.phi1.size(); ++j) {
    acc += field.grid.wavenumber(j) * (std::norm(s.phi1[j]) + std::norm(s.phi2[j]));
  }
  return acc * field.grid.dx() / static_cast<double>(field.grid.n_points);
}

double pi_momentum(const SpinorField& field, const SystemParams& p) {
  // <sigma_x> density: Psi1^* Psi2 + Psi2^* Psi1
  cplx sx{};
  for (std::size_t j = 0; j < field.psi1.size(); ++j) {
    sx += std::conj(field.psi1[j]) * field.psi2[j] + std::conj(field.psi2[j]) * field.psi1[j];
  }
  sx *= field.grid.dx();
  return canonical_momentum(field) + 0.5 * p.alpha * sx.real();
}

std::vector<SpectralPeak> spectral_peaks(const SpinorField& field,
                                         std::span<const double> expected, double window) {
  if (!(window > 0.0)) throw std::invalid_argument("window half-width must be positive");
  for (std::size_t a = 0; a < expected.size(); ++a) {
    for (std::size_t b = a + 1; b < expected.size(); ++b) {
      if (std::abs(expected[a] - expected[b]) <= 2.0 * window) {
        throw OverlappingWindows("spectral windows around k = " + std::to_string(expected[a]) +
                                 " and k = " + std::to_string(expected[b]) + " overlap");
      }
    }
  }

  const SpectralField s = to_fourier(field);
  const double scale = field.grid.dx() / static_cast<double>(field.grid.n_points);
  std::vector<SpectralPeak> peaks;
  peaks.reserve(expected.size());
  for (double kc : expected) {
    SpectralPeak peak{kc, window, 0.0, 0.0};
    for (std::size_t j = 0; j < s.phi1.size(); ++j) {
      if (std::abs(field.grid.wavenumber(j) - kc) <= window) {
        peak.population1 += std::norm(s.phi1[j]);
        peak.population2 += std::norm(s.phi2[j]);
      }
    }
    peak.population1 *= scale;
    peak.population2 *= scale;
    peaks.push_back(peak);
  }
  return peaks;
}

double default_window(double width, const Grid& grid) {
  return std::max(10.0 / width, 5.0 * 2.0 * std::numbers::pi / grid.length);
}

double efficiency(const SpinorField& initial, const SpinorField& final_state, double k3,
                  double window) {
  if (!(initial.grid == final_state.grid)) {
    throw std::invalid_argument("efficiency needs both fields on the same grid");
  }
  const double total = norm(initial);
  if (total <= 0.0) return 0.0;
  const double ks[] = {k3};
  const double generated = spectral_peaks(final_state, ks, window).front().total();
  return std::clamp(100.0 * generated / total, 0.0, 100.0);
}

}  // namespace fwm
