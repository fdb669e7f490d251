#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace fwm {

// Unnormalized 1D complex DFT of fixed length backed by FFTW.
// Plans use FFTW_ESTIMATE so results are reproducible run to run.
// Plan creation/destruction is serialized internally; execute() is
// safe to call concurrently on distinct buffers.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;

  std::size_t size() const { return n_; }

  // In place: X_j = sum_m x_m exp(-2 pi i j m / n).
  void forward(std::span<std::complex<double>> data) const;
  // In place: x_m = sum_j X_j exp(+2 pi i j m / n)  (no 1/n factor).
  void backward(std::span<std::complex<double>> data) const;

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

}  // namespace fwm
