#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace schartree::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft::Fft(int n) : n_(n) {
  std::vector<std::complex<double>> scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
  if (!forward_plan_ || !backward_plan_) throw std::runtime_error("FFTW planning failed");
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

std::shared_ptr<const Fft> Fft::of_size(int n) {
  std::lock_guard lock(planner_mutex());
  static std::map<int, std::shared_ptr<const Fft>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const Fft> plan(new Fft(n));
  cache.emplace(n, plan);
  return plan;
}

void Fft::forward(std::span<std::complex<double>> data) const {
  if (static_cast<int>(data.size()) != n_) throw std::invalid_argument("FFT length mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), buf, buf);
}

void Fft::backward(std::span<std::complex<double>> data) const {
  if (static_cast<int>(data.size()) != n_) throw std::invalid_argument("FFT length mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), buf, buf);
}

}  // namespace schartree::detail
