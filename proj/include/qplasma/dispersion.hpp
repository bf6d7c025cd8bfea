#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qplasma/equilibria.hpp"
#include "qplasma/streams.hpp"

namespace qplasma::dispersion {

using cplx = std::complex<double>;

// Everything here is in normalized units: omega in omega_p, K in 1/lambda_F,
// velocities in v_F, H = hbar omega_p / (m v_F^2) and hbar_eff = H / 2.

enum class ModelKind { VlasovKinetic, WignerKinetic, Multistream, QuantumFluid };

struct DielectricModel {
  ModelKind kind = ModelKind::VlasovKinetic;
  std::optional<equilibria::Equilibrium> equilibrium;  // kinetic models
  std::optional<StreamSpec> streams;                   // multistream
  double H = 0.0;
  double gamma = 3.0;                                  // fluid only
  double v0 = 1.0 / 1.7320508075688772;                // fluid only, v_F units
  void validate() const;
};

DielectricModel vlasov_model(const equilibria::Equilibrium& eq);
DielectricModel wigner_model(const equilibria::Equilibrium& eq, double H);
DielectricModel multistream_model(const StreamSpec& spec, double H);
DielectricModel fluid_model(double gamma, double v0, double H);
/// gamma = 3, v0^2 = 1/3: the 1D degenerate closure.
DielectricModel fluid_model_1d(double H);

/// Set when an evaluation falls outside the trusted region.
struct EvalFlags {
  bool outside_continuation = false;  // |Im w| > 0.5 |Re w| or f0 continuation invalid
  bool pole = false;                  // multistream pole hit
};

/// Plasma integral I(z) = int f0(v) / (z - v) dv continued below the real
/// axis along the Landau contour.
cplx plasma_integral(const equilibria::Equilibrium& eq, cplx z);
/// J(z) = int f0'(v) / (z - v) dv, same prescription.
cplx plasma_integral_derivative(const equilibria::Equilibrium& eq, cplx z);

cplx eps_vlasov(double K, cplx omega, const equilibria::Equilibrium& eq, EvalFlags* flags = nullptr);
/// Shifted-pole form; H = 0 falls back to eps_vlasov.
cplx eps_wigner(double K, cplx omega, const equilibria::Equilibrium& eq, double H, EvalFlags* flags = nullptr);
/// Direct quadrature of int [f0(v + b) - f0(v - b)] / (z - v) dv. Only
/// defined for Im omega > 0.
cplx eps_wigner_difference(double K, cplx omega, const equilibria::Equilibrium& eq, double H);
/// Difference form with delta-function f0 = sum p delta(v - u).
cplx eps_wigner_delta(double K, cplx omega, const StreamSpec& spec, double H);
cplx eps_multistream(double K, cplx omega, const StreamSpec& spec, double H, EvalFlags* flags = nullptr);
cplx eps_fluid(double K, cplx omega, double gamma, double v0, double H);

cplx eps(const DielectricModel& model, double K, cplx omega, EvalFlags* flags = nullptr);

/// Closed-form fluid frequency squared 1 + gamma K^2 v0^2 + H^2 K^4 / 16.
double fluid_omega_squared(double K, double gamma, double v0, double H);

/// True when hbar K << 1 << omega / K (asymptotic expansions trusted).
bool ordering_holds(double K, cplx omega, double H);

struct DispersionRoot {
  double K = 0.0;
  cplx omega;
  double residual = 0.0;
  int iterations = 0;
  bool ordering = false;
  EvalFlags flags;
};

/// Newton iteration with a numerically differenced derivative. Default
/// guess omega^2 = 1 + K^2. Throws NumericError after 100 iterations or if
/// |eps| stays above 1e-10.
DispersionRoot solve_root(const DielectricModel& model, double K, std::optional<cplx> guess = std::nullopt);

/// Roots over a uniform K grid, continuing each guess from the previous root.
std::vector<DispersionRoot> scan(const DielectricModel& model, double kmin, double kmax, std::size_t nk);

struct SmallKFit {
  double c0 = 0.0, c2 = 0.0, c4 = 0.0, c6 = 0.0;
  double residual = 0.0;  // rms of omega^2 - polynomial
  std::size_t samples = 0;
};

/// Least-squares fit of Re(omega)^2 over K in [kmin, kmax] to
/// c0 + c2 K^2 + c4 K^4 + c6 K^6. Throws NumericError if the rms residual
/// exceeds `tolerance`.
SmallKFit smallk_coefficients(const DielectricModel& model, double kmin = 0.02, double kmax = 0.2,
                              std::size_t samples = 19, double tolerance = 1e-7);

/// Exact water-bag Wigner frequency squared (real root above the band).
double waterbag_wigner_omega_squared(double K, double H);

ModelKind model_kind_from_string(const std::string& name);
std::string to_string(ModelKind kind);

}  // namespace qplasma::dispersion
