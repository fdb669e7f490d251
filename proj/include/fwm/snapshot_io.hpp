#pragma once

/**
 * Snapshot files consumed by the plotting tools.
 *
 *   snap_NNNNN.bin   4 n complex numbers as interleaved (re, im) float64,
 *                    little endian: Psi1(x), Psi2(x), Phi1(k), Phi2(k).
 *                    x runs from -L/2 in steps of L/n; Phi is the raw
 *                    (unnormalized) DFT of the x samples in FFT order.
 *   snap_NNNNN.json  {time, grid: {n, length}, norms, pi_momentum,
 *                    canonical_momentum, energy}
 */

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fwm/propagator.hpp"

namespace fwm {

struct Diagnostics {
  double time = 0.0;
  double norm = 0.0;
  double norm1 = 0.0;
  double norm2 = 0.0;
  double norm_spectral = 0.0;
  double pi_momentum = 0.0;
  double canonical_momentum = 0.0;
  double energy = 0.0;
};

Diagnostics compute_diagnostics(const SpinorField& field, const SystemParams& p);
nlohmann::json to_json(const Diagnostics& d);

std::string snapshot_stem(std::size_t index);

/// Writes <dir>/snap_<index>.bin and .json. Creates dir if needed.
void write_snapshot(const std::filesystem::path& dir, std::size_t index,
                    const SpinorField& field, const Diagnostics& diag);

struct SnapshotData {
  nlohmann::json meta;
  SpinorField field;
  SpectralField spectrum;
};

/// Reads a pair written by write_snapshot. Throws fwm::Error on size or
/// format mismatch.
SnapshotData read_snapshot(const std::filesystem::path& dir, std::size_t index);

}  // namespace fwm
