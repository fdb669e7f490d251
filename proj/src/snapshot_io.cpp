#include "fwm/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "fwm/errors.hpp"
#include "fwm/wavepackets.hpp"

namespace fwm {

namespace {

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

void put(std::vector<std::uint64_t>& out, std::span<const cplx> data) {
  for (const cplx& z : data) {
    out.push_back(to_le(std::bit_cast<std::uint64_t>(z.real())));
    out.push_back(to_le(std::bit_cast<std::uint64_t>(z.imag())));
  }
}

void get(const std::vector<std::uint64_t>& in, std::size_t offset, std::vector<cplx>& dst) {
  for (std::size_t j = 0; j < dst.size(); ++j) {
    dst[j] = {std::bit_cast<double>(to_le(in[offset + 2 * j])),
              std::bit_cast<double>(to_le(in[offset + 2 * j + 1]))};
  }
}

}  // namespace

Diagnostics compute_diagnostics(const SpinorField& field, const SystemParams& p) {
  Diagnostics d;
  d.time = field.time;
  for (std::size_t j = 0; j < field.psi1.size(); ++j) {
    d.norm1 += std::norm(field.psi1[j]);
    d.norm2 += std::norm(field.psi2[j]);
  }
  d.norm1 *= field.grid.dx();
  d.norm2 *= field.grid.dx();
  d.norm = d.norm1 + d.norm2;
  d.norm_spectral = norm_spectral(field);
  d.pi_momentum = pi_momentum(field, p);
  d.canonical_momentum = canonical_momentum(field);
  d.energy = energy(field, p);
  return d;
}

nlohmann::json to_json(const Diagnostics& d) {
  return {{"time", d.time},
          {"norms", {{"total", d.norm}, {"component1", d.norm1}, {"component2", d.norm2},
                     {"spectral", d.norm_spectral}}},
          {"pi_momentum", d.pi_momentum},
          {"canonical_momentum", d.canonical_momentum},
          {"energy", d.energy}};
}

std::string snapshot_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%05zu", index);
  return buf;
}

void write_snapshot(const std::filesystem::path& dir, std::size_t index,
                    const SpinorField& field, const Diagnostics& diag) {
  std::filesystem::create_directories(dir);
  const std::string stem = snapshot_stem(index);
  const SpectralField s = to_fourier(field);

  std::vector<std::uint64_t> words;
  words.reserve(8 * field.grid.n_points);
  put(words, field.psi1);
  put(words, field.psi2);
  put(words, s.phi1);
  put(words, s.phi2);
  {
    std::ofstream bin(dir / (stem + ".bin"), std::ios::binary | std::ios::trunc);
    if (!bin) throw Error("cannot write " + (dir / (stem + ".bin")).string());
    bin.write(reinterpret_cast<const char*>(words.data()),
              static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
  }

  nlohmann::json meta = to_json(diag);
  meta["grid"] = {{"n", field.grid.n_points}, {"length", field.grid.length}};
  std::ofstream js(dir / (stem + ".json"), std::ios::trunc);
  if (!js) throw Error("cannot write " + (dir / (stem + ".json")).string());
  js << meta.dump(2) << '\n';
}

SnapshotData read_snapshot(const std::filesystem::path& dir, std::size_t index) {
  const std::string stem = snapshot_stem(index);
  std::ifstream js(dir / (stem + ".json"));
  if (!js) throw Error("missing snapshot sidecar " + (dir / (stem + ".json")).string());
  SnapshotData out;
  try {
    out.meta = nlohmann::json::parse(js);
    out.field = SpinorField(Grid(out.meta.at("grid").at("n").get<std::size_t>(),
                                 out.meta.at("grid").at("length").get<double>()));
    out.field.time = out.meta.at("time").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed snapshot sidecar: " + std::string(e.what()));
  }

  const std::size_t n = out.field.grid.n_points;
  std::vector<std::uint64_t> words(8 * n);
  std::ifstream bin(dir / (stem + ".bin"), std::ios::binary);
  if (!bin) throw Error("missing snapshot binary " + (dir / (stem + ".bin")).string());
  bin.read(reinterpret_cast<char*>(words.data()),
           static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
  if (bin.gcount() != static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)) ||
      bin.peek() != std::char_traits<char>::eof()) {
    throw Error("snapshot binary size does not match grid metadata");
  }
  out.spectrum.phi1.resize(n);
  out.spectrum.phi2.resize(n);
  get(words, 0, out.field.psi1);
  get(words, 2 * n, out.field.psi2);
  get(words, 4 * n, out.spectrum.phi1);
  get(words, 6 * n, out.spectrum.phi2);
  return out;
}

}  // namespace fwm
