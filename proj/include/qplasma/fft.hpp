#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace qplasma {

using cplx = std::complex<double>;

/// Unnormalized 1D complex DFT of fixed size backed by FFTW (estimate-mode
/// plans, so results are deterministic). Plans are immutable after
/// construction; execution is safe from concurrent threads.
class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n);
  std::size_t size() const { return n_; }
  /// out_k = sum_j in_j exp(-2 pi i jk/n). `in` and `out` may alias.
  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  /// out_j = sum_k in_k exp(+2 pi i jk/n).
  void backward(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  struct Plans;
  std::size_t n_;
  std::shared_ptr<const Plans> plans_;
};

/// Real-to-half-complex DFT of fixed size (n/2 + 1 output bins).
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }
  void forward(std::span<const double> in, std::span<cplx> out) const;
  /// Unnormalized inverse. Overwrites `in`.
  void backward(std::span<cplx> in, std::span<double> out) const;

 private:
  struct Plans;
  std::size_t n_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace qplasma
