#include "qplasma/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <vector>

#include "qplasma/error.hpp"

namespace qplasma {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const cplx* p) { return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p)); }

constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

void check_size(std::size_t got, std::size_t want) {
  if (got != want) throw DomainError("FFT buffer size mismatch");
}

}  // namespace

struct ComplexFft::Plans {
  fftw_plan fwd_oop = nullptr, bwd_oop = nullptr, fwd_ip = nullptr, bwd_ip = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    for (fftw_plan p : {fwd_oop, bwd_oop, fwd_ip, bwd_ip})
      if (p) fftw_destroy_plan(p);
  }
};

ComplexFft::ComplexFft(std::size_t n) : n_(n) {
  if (n == 0) throw DomainError("FFT size must be positive");
  auto plans = std::make_shared<Plans>();
  std::vector<cplx> a(n), b(n);
  const int ni = static_cast<int>(n);
  std::lock_guard lock(planner_mutex());
  plans->fwd_oop = fftw_plan_dft_1d(ni, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, kFlags);
  plans->bwd_oop = fftw_plan_dft_1d(ni, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, kFlags);
  plans->fwd_ip = fftw_plan_dft_1d(ni, as_fftw(a.data()), as_fftw(a.data()), FFTW_FORWARD, kFlags);
  plans->bwd_ip = fftw_plan_dft_1d(ni, as_fftw(a.data()), as_fftw(a.data()), FFTW_BACKWARD, kFlags);
  plans_ = std::move(plans);
}

void ComplexFft::forward(std::span<const cplx> in, std::span<cplx> out) const {
  check_size(in.size(), n_);
  check_size(out.size(), n_);
  const bool inplace = in.data() == out.data();
  fftw_execute_dft(inplace ? plans_->fwd_ip : plans_->fwd_oop, as_fftw(in.data()), as_fftw(out.data()));
}

void ComplexFft::backward(std::span<const cplx> in, std::span<cplx> out) const {
  check_size(in.size(), n_);
  check_size(out.size(), n_);
  const bool inplace = in.data() == out.data();
  fftw_execute_dft(inplace ? plans_->bwd_ip : plans_->bwd_oop, as_fftw(in.data()), as_fftw(out.data()));
}

struct RealFft::Plans {
  fftw_plan r2c = nullptr, c2r = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n < 2 || n % 2 != 0) throw DomainError("real FFT size must be even");
  auto plans = std::make_shared<Plans>();
  std::vector<double> r(n);
  std::vector<cplx> c(n / 2 + 1);
  const int ni = static_cast<int>(n);
  std::lock_guard lock(planner_mutex());
  plans->r2c = fftw_plan_dft_r2c_1d(ni, r.data(), as_fftw(c.data()), kFlags);
  plans->c2r = fftw_plan_dft_c2r_1d(ni, as_fftw(c.data()), r.data(), kFlags);
  plans_ = std::move(plans);
}

void RealFft::forward(std::span<const double> in, std::span<cplx> out) const {
  check_size(in.size(), n_);
  check_size(out.size(), bins());
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()), as_fftw(out.data()));
}

void RealFft::backward(std::span<cplx> in, std::span<double> out) const {
  check_size(in.size(), bins());
  check_size(out.size(), n_);
  fftw_execute_dft_c2r(plans_->c2r, as_fftw(in.data()), out.data());
}

}  // namespace qplasma
