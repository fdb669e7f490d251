#include "fwm/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fwm {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("FFT length must be positive");
  std::vector<std::complex<double>> scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, flags);
  if (!forward_plan_ || !backward_plan_) throw std::runtime_error("FFTW planning failed");
}

Fft::~Fft() { release(); }

Fft::Fft(Fft&& other) noexcept
    : n_(other.n_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

Fft& Fft::operator=(Fft&& other) noexcept {
  if (this != &other) {
    release();
    n_ = other.n_;
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    backward_plan_ = std::exchange(other.backward_plan_, nullptr);
  }
  return *this;
}

void Fft::release() noexcept {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  forward_plan_ = backward_plan_ = nullptr;
}

void Fft::forward(std::span<std::complex<double>> data) const {
  if (data.size() != n_) throw std::invalid_argument("FFT buffer length mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), buf, buf);
}

void Fft::backward(std::span<std::complex<double>> data) const {
  if (data.size() != n_) throw std::invalid_argument("FFT buffer length mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), buf, buf);
}

}  // namespace fwm
