#include "qplasma/dispersion.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qplasma/error.hpp"

namespace qplasma::dispersion {

namespace {

using equilibria::Equilibrium;
using equilibria::Kind;
using boost::math::quadrature::gauss_kronrod;

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

cplx clog1p(cplx w) {
  const cplx u = 1.0 + w;
  if (u == cplx(1.0)) return w;
  return std::log(u) * w / (u - 1.0);
}

cplx cexpm1(cplx w) {
  if (std::abs(w) < 1e-5) return w + 0.5 * w * w + w * w * w / 6.0;
  return std::exp(w) - 1.0;
}

// Argument continued from the upper half plane across the negative real axis.
double arg_continued(cplx w) {
  if (w.imag() == 0.0) return w.real() < 0.0 ? kPi : 0.0;
  const double a = std::arg(w);
  return (w.imag() < 0.0 && w.real() < 0.0) ? a + 2.0 * kPi : a;
}

// ln((z + V)/(z - V)) along the Landau contour.
cplx log_ratio(cplx z, double V) {
  const cplx p = z + V, m = z - V;
  return cplx(std::log(std::abs(p)) - std::log(std::abs(m)), arg_continued(p) - arg_continued(m));
}

// Normalized closed forms (n0 = v_F = 1).
cplx waterbag_I(cplx z) {
  if (z.imag() == 0.0) {
    const double x = z.real();
    const double pv = 0.5 * std::log(std::abs((x + 1.0) / (x - 1.0)));
    return {pv, std::abs(x) < 1.0 ? -0.5 * kPi : 0.0};
  }
  cplx r = std::atanh(1.0 / z);
  if (z.imag() < 0.0 && std::abs(z.real()) < 1.0) r -= 2.0 * kPi * kI * 0.5;
  return r;
}

cplx waterbag_J(cplx z) { return -1.0 / (z * z - 1.0); }

double t0_moment_coeff(int n) { return 3.0 / ((2.0 * n + 1.0) * (2.0 * n + 3.0)); }

cplx t0_series_I(cplx z) {
  const cplx w = 1.0 / z, w2 = w * w;
  cplx term = w, sum = 0.0;
  for (int n = 0; n < 200; ++n) {
    const cplx add = t0_moment_coeff(n) * term;
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    term *= w2;
  }
  return sum;
}

cplx t0_series_J(cplx z) {
  const cplx w = 1.0 / z, w2 = w * w;
  cplx term = w2, sum = 0.0;
  for (int n = 0; n < 200; ++n) {
    const cplx add = -3.0 / (2.0 * n + 3.0) * term;
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    term *= w2;
  }
  return sum;
}

constexpr double kSeriesRadius = 4.0;

cplx t0_I(cplx z) {
  const cplx f0 = 0.75 * (1.0 - z * z);
  if (std::abs(z) > kSeriesRadius) return t0_series_I(z);
  if (z.imag() == 0.0) {
    const double x = z.real();
    const double L = std::log(std::abs((x + 1.0) / (x - 1.0)));
    const double pv = 0.75 * ((1.0 - x * x) * L + 2.0 * x);
    return {pv, std::abs(x) < 1.0 ? -kPi * f0.real() : 0.0};
  }
  const cplx L = 2.0 * std::atanh(1.0 / z);
  cplx r = 0.75 * ((1.0 - z * z) * L + 2.0 * z);
  if (z.imag() < 0.0 && std::abs(z.real()) < 1.0) r -= 2.0 * kPi * kI * f0;
  return r;
}

cplx t0_J(cplx z) {
  const cplx fp = -1.5 * z;
  if (std::abs(z) > kSeriesRadius) return t0_series_J(z);
  if (z.imag() == 0.0) {
    const double x = z.real();
    const double L = std::log(std::abs((x + 1.0) / (x - 1.0)));
    return {3.0 - 1.5 * x * L, std::abs(x) < 1.0 ? -kPi * fp.real() : 0.0};
  }
  const cplx L = 2.0 * std::atanh(1.0 / z);
  cplx r = 3.0 - 1.5 * z * L;
  if (z.imag() < 0.0 && std::abs(z.real()) < 1.0) r -= 2.0 * kPi * kI * fp;
  return r;
}

// int (g(v) - g(z)) / (z - v) dv over [-V, V] plus g(z) ln((z+V)/(z-V)).
template <class G>
cplx generic_integral(G g, const Equilibrium& eq, cplx z) {
  const double V = std::max({eq.support(), 3.0 * eq.v_F(), std::abs(z.real()) + 5.0 * eq.v_F()});
  const cplx gz = g(z);
  auto re = [&](double v) {
    const cplx d = z - v;
    if (std::abs(d) < 1e-9 * (1.0 + std::abs(z))) return 0.0;
    return ((cplx(g(v)) - gz) / d).real();
  };
  auto im = [&](double v) {
    const cplx d = z - v;
    if (std::abs(d) < 1e-9 * (1.0 + std::abs(z))) return 0.0;
    return ((cplx(g(v)) - gz) / d).imag();
  };
  std::vector<double> pts{-V, V};
  for (double b : eq.breakpoints())
    if (b > -V && b < V) pts.push_back(b);
  if (z.real() > -V && z.real() < V) pts.push_back(z.real());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    sr += gauss_kronrod<double, 61>::integrate(re, pts[i], pts[i + 1], 12, 1e-13);
    si += gauss_kronrod<double, 61>::integrate(im, pts[i], pts[i + 1], 12, 1e-13);
  }
  return cplx(sr, si) + gz * log_ratio(z, V);
}

void check_continuation(cplx omega, EvalFlags* flags) {
  if (flags && omega.imag() < 0.0 && std::abs(omega.imag()) > 0.5 * std::abs(omega.real()))
    flags->outside_continuation = true;
}

void require_k(double K) {
  if (K == 0.0 || !std::isfinite(K)) throw DomainError("wavenumber must be finite and non-zero");
}

}  // namespace

void DielectricModel::validate() const {
  if (!(H >= 0.0)) throw DomainError("H must be non-negative");
  switch (kind) {
    case ModelKind::VlasovKinetic:
    case ModelKind::WignerKinetic:
      if (!equilibrium) throw DomainError("kinetic model needs an equilibrium");
      break;
    case ModelKind::Multistream:
      if (!streams) throw DomainError("multistream model needs a stream list");
      streams->validate();
      break;
    case ModelKind::QuantumFluid:
      if (!(gamma > 1.0)) throw DomainError("polytropic exponent must exceed 1");
      if (!(v0 >= 0.0)) throw DomainError("v0 must be non-negative");
      break;
  }
}

DielectricModel vlasov_model(const Equilibrium& eq) {
  DielectricModel m;
  m.kind = ModelKind::VlasovKinetic;
  m.equilibrium = eq;
  return m;
}

DielectricModel wigner_model(const Equilibrium& eq, double H) {
  DielectricModel m;
  m.kind = ModelKind::WignerKinetic;
  m.equilibrium = eq;
  m.H = H;
  m.validate();
  return m;
}

DielectricModel multistream_model(const StreamSpec& spec, double H) {
  DielectricModel m;
  m.kind = ModelKind::Multistream;
  m.streams = spec;
  m.H = H;
  m.validate();
  return m;
}

DielectricModel fluid_model(double gamma, double v0, double H) {
  DielectricModel m;
  m.kind = ModelKind::QuantumFluid;
  m.gamma = gamma;
  m.v0 = v0;
  m.H = H;
  m.validate();
  return m;
}

DielectricModel fluid_model_1d(double H) { return fluid_model(3.0, 1.0 / std::sqrt(3.0), H); }

cplx plasma_integral(const Equilibrium& eq, cplx z) {
  const double s = eq.v_F(), scale = eq.n0() / eq.v_F();
  switch (eq.kind()) {
    case Kind::WaterBag1D: return scale * waterbag_I(z / s);
    case Kind::ProjectedFD_T0: return scale * t0_I(z / s);
    case Kind::ProjectedFD_finiteT:
      return generic_integral([&](auto v) { return eq(v); }, eq, z);
  }
  return 0.0;
}

cplx plasma_integral_derivative(const Equilibrium& eq, cplx z) {
  const double s = eq.v_F(), scale = eq.n0() / (eq.v_F() * eq.v_F());
  switch (eq.kind()) {
    case Kind::WaterBag1D: return scale * waterbag_J(z / s);
    case Kind::ProjectedFD_T0: return scale * t0_J(z / s);
    case Kind::ProjectedFD_finiteT:
      return generic_integral([&](auto v) { return eq.derivative(v); }, eq, z);
  }
  return 0.0;
}

cplx eps_vlasov(double K, cplx omega, const Equilibrium& eq, EvalFlags* flags) {
  require_k(K);
  if (K < 0.0) return std::conj(eps_vlasov(-K, -std::conj(omega), eq, flags));
  check_continuation(omega, flags);
  const cplx z = omega / K;
  if (flags && eq.kind() == Kind::ProjectedFD_finiteT && !eq.continuation_valid(z))
    flags->outside_continuation = true;
  return 1.0 + plasma_integral_derivative(eq, z) / (K * K);
}

namespace {

// I(z + b) - I(z - b) with the cancellation handled where a closed form allows.
cplx shifted_difference(const Equilibrium& eq, cplx z, double b) {
  const double s = eq.v_F(), scale = eq.n0() / eq.v_F();
  const cplx zs = z / s;
  const double bs = b / s;
  auto landau = [&](cplx w, auto f0) -> cplx {
    if (w.imag() < 0.0 && std::abs(w.real()) < 1.0) return -2.0 * kPi * kI * f0(w);
    return 0.0;
  };
  if (eq.kind() == Kind::WaterBag1D && std::abs(zs) > 2.0 * (1.0 + bs)) {
    // Principal branch: 0.5 ln[(z^2 - (1 + b)^2) / (z^2 - (1 - b)^2)].
    const cplx d = 0.5 * clog1p(-4.0 * bs / (zs * zs - (1.0 - bs) * (1.0 - bs)));
    auto half = [](cplx) { return cplx(0.5); };
    return scale * (d + landau(zs + bs, half) - landau(zs - bs, half));
  }
  if (eq.kind() == Kind::ProjectedFD_T0 && std::abs(zs) - bs > kSeriesRadius) {
    const cplx w = 1.0 / zs, w2 = w * w, beta = bs * w;
    const cplx lp = clog1p(beta), lm = clog1p(-beta);
    cplx term = w, sum = 0.0;
    for (int n = 0; n < 400; ++n) {
      const double m = 2.0 * n + 1.0;
      const cplx add = t0_moment_coeff(n) * term * (cexpm1(-m * lp) - cexpm1(-m * lm));
      sum += add;
      if (n > 2 && std::abs(add) < 1e-18 * std::abs(sum)) break;
      term *= w2;
    }
    return scale * sum;
  }
  return plasma_integral(eq, z + b) - plasma_integral(eq, z - b);
}

}  // namespace

cplx eps_wigner(double K, cplx omega, const Equilibrium& eq, double H, EvalFlags* flags) {
  require_k(K);
  if (!(H >= 0.0)) throw DomainError("H must be non-negative");
  if (H == 0.0) return eps_vlasov(K, omega, eq, flags);
  if (K < 0.0) return std::conj(eps_wigner(-K, -std::conj(omega), eq, H, flags));
  check_continuation(omega, flags);
  const double hbar = 0.5 * H, b = 0.5 * hbar * K;
  const cplx z = omega / K;
  if (flags && eq.kind() == Kind::ProjectedFD_finiteT &&
      (!eq.continuation_valid(z + b) || !eq.continuation_valid(z - b)))
    flags->outside_continuation = true;
  return 1.0 + shifted_difference(eq, z, b) / (hbar * K * K * K);
}

cplx eps_wigner_difference(double K, cplx omega, const Equilibrium& eq, double H) {
  require_k(K);
  if (!(H > 0.0)) throw DomainError("difference form needs H > 0");
  if (!(omega.imag() > 0.0)) throw DomainError("difference form needs Im omega > 0");
  if (K < 0.0) return std::conj(eps_wigner_difference(-K, -std::conj(omega), eq, H));
  const double hbar = 0.5 * H, b = 0.5 * hbar * K;
  const cplx z = omega / K;
  const double V = eq.support() + b;
  std::vector<double> pts{-V, V, z.real()};
  for (double p : eq.breakpoints()) {
    pts.push_back(p - b);
    pts.push_back(p + b);
  }
  std::erase_if(pts, [&](double p) { return p < -V || p > V; });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto integrand = [&](double v) { return (eq(v + b) - eq(v - b)) / (z - v); };
  auto re = [&](double v) { return integrand(v).real(); };
  auto im = [&](double v) { return integrand(v).imag(); };
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    sr += gauss_kronrod<double, 61>::integrate(re, pts[i], pts[i + 1], 12, 1e-13);
    si += gauss_kronrod<double, 61>::integrate(im, pts[i], pts[i + 1], 12, 1e-13);
  }
  return 1.0 + cplx(sr, si) / (hbar * K * K * K);
}

cplx eps_wigner_delta(double K, cplx omega, const StreamSpec& spec, double H) {
  require_k(K);
  if (!(H > 0.0)) throw DomainError("difference form needs H > 0");
  spec.validate();
  const double hbar = 0.5 * H, b = 0.5 * hbar * K;
  const cplx z = omega / K;
  cplx sum = 0.0;
  for (std::size_t a = 0; a < spec.size(); ++a) {
    const double u = spec.velocities[a];
    sum += spec.probabilities[a] * (1.0 / (z - u + b) - 1.0 / (z - u - b));
  }
  return 1.0 + sum / (hbar * K * K * K);
}

cplx eps_multistream(double K, cplx omega, const StreamSpec& spec, double H, EvalFlags* flags) {
  require_k(K);
  if (!(H >= 0.0)) throw DomainError("H must be non-negative");
  const double q = 0.25 * (0.5 * H) * (0.5 * H) * K * K * K * K;
  cplx sum = 0.0;
  for (std::size_t a = 0; a < spec.size(); ++a) {
    const cplx d = omega - K * spec.velocities[a];
    const cplx den = d * d - q;
    if (den == cplx(0.0)) {
      if (flags) flags->pole = true;
      return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    }
    sum += spec.probabilities[a] / den;
  }
  return 1.0 - sum;
}

cplx eps_fluid(double K, cplx omega, double gamma, double v0, double H) {
  require_k(K);
  const double hbar = 0.5 * H;
  return 1.0 - 1.0 / (omega * omega - gamma * K * K * v0 * v0 - 0.25 * hbar * hbar * K * K * K * K);
}

double fluid_omega_squared(double K, double gamma, double v0, double H) {
  const double hbar = 0.5 * H;
  return 1.0 + gamma * K * K * v0 * v0 + 0.25 * hbar * hbar * std::pow(K, 4);
}

cplx eps(const DielectricModel& model, double K, cplx omega, EvalFlags* flags) {
  switch (model.kind) {
    case ModelKind::VlasovKinetic: return eps_vlasov(K, omega, *model.equilibrium, flags);
    case ModelKind::WignerKinetic: return eps_wigner(K, omega, *model.equilibrium, model.H, flags);
    case ModelKind::Multistream: return eps_multistream(K, omega, *model.streams, model.H, flags);
    case ModelKind::QuantumFluid: return eps_fluid(K, omega, model.gamma, model.v0, model.H);
  }
  return 0.0;
}

bool ordering_holds(double K, cplx omega, double H) {
  const double hk = 0.5 * H * std::abs(K);
  return hk < 0.3 && std::abs(omega.real() / K) > 3.0;
}

DispersionRoot solve_root(const DielectricModel& model, double K, std::optional<cplx> guess) {
  model.validate();
  require_k(K);
  cplx w = guess.value_or(cplx(std::sqrt(1.0 + K * K), 0.0));
  const bool kinetic = model.kind == ModelKind::VlasovKinetic || model.kind == ModelKind::WignerKinetic;
  if (kinetic && !(w.real() > 0.0)) throw DomainError("kinetic root guess must have Re omega > 0");
  if (w == cplx(0.0)) throw DomainError("root guess must be nonzero");
  DispersionRoot root;
  root.K = K;
  int it = 0;
  bool converged = false;
  double prev_step = std::numeric_limits<double>::infinity();
  for (it = 1; it <= 100; ++it) {
    const cplx e = eps(model, K, w);
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) break;
    const double h = 1e-7 * std::abs(w);
    const cplx d = (eps(model, K, w + h) - eps(model, K, w - h)) / (2.0 * h);
    if (d == cplx(0.0)) break;
    cplx step = e / d;
    const bool stalled = std::abs(e) < 1e-10 && std::abs(step) >= 0.5 * prev_step;
    if (stalled) {
      converged = true;
      break;
    }
    // Backtrack while the step would increase |eps|.
    for (int b = 0; b < 30; ++b) {
      const cplx trial = eps(model, K, w - step);
      if (std::isfinite(trial.real()) && std::isfinite(trial.imag()) && std::abs(trial) <= std::abs(e)) break;
      step *= 0.5;
    }
    w -= step;
    prev_step = std::abs(step);
    const bool re_done = std::abs(step) <= 4e-16 * std::abs(w);
    const bool im_done = w.imag() == 0.0 || std::abs(step.imag()) <= 1e-12 * std::abs(w.imag());
    if (re_done && im_done) {
      converged = true;
      break;
    }
  }
  root.omega = w;
  root.iterations = std::min(it, 100);
  const cplx e = eps(model, K, w, &root.flags);
  root.residual = std::abs(e);
  root.ordering = ordering_holds(K, w, model.H);
  if (!(root.residual < 1e-10) || !converged) {
    std::ostringstream msg;
    msg << "dispersion root did not converge at K=" << K << " (omega=" << w.real() << (w.imag() < 0 ? "" : "+")
        << w.imag() << "i, |eps|=" << root.residual << ", iterations=" << root.iterations << ")";
    throw NumericError(msg.str());
  }
  return root;
}

std::vector<DispersionRoot> scan(const DielectricModel& model, double kmin, double kmax, std::size_t nk) {
  if (nk == 0) throw DomainError("nk must be positive");
  if (!(kmin > 0.0) || !(kmax >= kmin)) throw DomainError("need 0 < kmin <= kmax");
  std::vector<DispersionRoot> out;
  std::optional<cplx> guess;
  for (std::size_t i = 0; i < nk; ++i) {
    const double K = nk == 1 ? kmin : kmin + (kmax - kmin) * static_cast<double>(i) / static_cast<double>(nk - 1);
    if (guess) {
      const double prevK = out.back().K;
      const double prev2 = std::norm(*guess);
      const double bg = std::sqrt(std::max(prev2 + K * K - prevK * prevK, 1.0));
      if (model.kind != ModelKind::Multistream) guess = cplx(bg, guess->imag());
    }
    out.push_back(solve_root(model, K, guess));
    guess = out.back().omega;
  }
  return out;
}

SmallKFit smallk_coefficients(const DielectricModel& model, double kmin, double kmax, std::size_t samples,
                              double tolerance) {
  if (samples < 5) throw DomainError("smallk fit needs at least 5 samples");
  const auto roots = scan(model, kmin, kmax, samples);
  const double k2max = kmax * kmax;
  Eigen::MatrixXd A(samples, 4);
  Eigen::VectorXd y(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double u = roots[i].K * roots[i].K / k2max;
    A(i, 0) = 1.0;
    A(i, 1) = u;
    A(i, 2) = u * u;
    A(i, 3) = u * u * u;
    y(i) = roots[i].omega.real() * roots[i].omega.real();
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  SmallKFit fit;
  fit.c0 = c(0);
  fit.c2 = c(1) / k2max;
  fit.c4 = c(2) / (k2max * k2max);
  fit.c6 = c(3) / (k2max * k2max * k2max);
  fit.residual = std::sqrt((A * c - y).squaredNorm() / static_cast<double>(samples));
  fit.samples = samples;
  if (!(fit.residual <= tolerance)) {
    std::ostringstream msg;
    msg << "small-K fit residual " << fit.residual << " exceeds " << tolerance;
    throw NumericError(msg.str());
  }
  return fit;
}

double waterbag_wigner_omega_squared(double K, double H) {
  const double a = 0.25 * H * K * K;
  if (a == 0.0) return 1.0 + K * K;
  return (K + a) * (K + a) + 4.0 * a * K / std::expm1(4.0 * a * K);
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "vlasov") return ModelKind::VlasovKinetic;
  if (name == "wigner") return ModelKind::WignerKinetic;
  if (name == "multistream") return ModelKind::Multistream;
  if (name == "fluid") return ModelKind::QuantumFluid;
  throw DomainError("unknown dielectric model '" + name + "'");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::VlasovKinetic: return "vlasov";
    case ModelKind::WignerKinetic: return "wigner";
    case ModelKind::Multistream: return "multistream";
    case ModelKind::QuantumFluid: return "fluid";
  }
  return "?";
}

}  // namespace qplasma::dispersion
