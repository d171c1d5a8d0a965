#pragma once

#include <complex>
#include <memory>
#include <span>

namespace schartree::detail {

/// In-place unnormalized complex FFT of fixed length, backed by FFTW.
/// Plans are created once per length and shared; executing a plan is
/// thread-safe, planning is serialized internally.
class Fft {
 public:
  static std::shared_ptr<const Fft> of_size(int n);

  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  ~Fft();

  int size() const { return n_; }
  void forward(std::span<std::complex<double>> data) const;
  /// Inverse without the 1/n factor.
  void backward(std::span<std::complex<double>> data) const;

 private:
  explicit Fft(int n);
  int n_;
  void* forward_plan_;
  void* backward_plan_;
};

}  // namespace schartree::detail
