#include "ibnls/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ibnls/error.hpp"

namespace ibnls {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::SingularOrigin: return "SingularOrigin";
    case ErrorKind::InvalidExponent: return "InvalidExponent";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::ZeroField: return "ZeroField";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::ResolutionLoss: return "ResolutionLoss";
    case ErrorKind::WraparoundDetected: return "WraparoundDetected";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DivergedToZero: return "DivergedToZero";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::WrongGauge: return "WrongGauge";
    case ErrorKind::RadiusOutOfRange: return "RadiusOutOfRange";
    case ErrorKind::InsufficientSnapshots: return "InsufficientSnapshots";
    case ErrorKind::SpanTooShort: return "SpanTooShort";
    case ErrorKind::NoSnapshots: return "NoSnapshots";
    case ErrorKind::HorizonTooShort: return "HorizonTooShort";
    case ErrorKind::ConfigParseError: return "ConfigParseError";
    case ErrorKind::ConfigHashMismatch: return "ConfigHashMismatch";
    case ErrorKind::CorruptSnapshot: return "CorruptSnapshot";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

const char* to_string(RegimeTag t) {
  switch (t) {
    case RegimeTag::MassSubcritical: return "mass-subcritical";
    case RegimeTag::MassCritical: return "mass-critical";
    case RegimeTag::Intercritical: return "intercritical";
    case RegimeTag::EnergyCritical: return "energy-critical";
    case RegimeTag::Supercritical: return "supercritical";
  }
  return "unknown";
}

namespace {

// ties at γ_c ∈ {0, 2} go to the critical label
constexpr double kTie = 1e-12;

[[noreturn]] void out_of_range(const std::string& msg) {
  throw Error(ErrorKind::ParameterOutOfRange, msg);
}

RegimeTag classify(double g) {
  if (std::abs(g) <= kTie) return RegimeTag::MassCritical;
  if (std::abs(g - 2.0) <= kTie) return RegimeTag::EnergyCritical;
  if (g < 0) return RegimeTag::MassSubcritical;
  if (g < 2) return RegimeTag::Intercritical;
  return RegimeTag::Supercritical;
}

}  // namespace

double gamma_c(const PhysParams& p) { return 0.5 * p.d - (4.0 - p.b) / p.alpha; }

double sigma_c(const PhysParams& p) {
  return subcritical_gap(p) / (pohozaev_weight(p) - 8.0);
}

Regime validate_params(const PhysParams& p, Mode mode) {
  std::ostringstream msg;
  if (p.d < 1) out_of_range("d must be >= 1");
  if (!(p.mu >= 0)) out_of_range("mu >= 0 violated (mu = " + std::to_string(p.mu) + ")");
  if (!(p.omega > 0)) out_of_range("omega > 0 violated (omega = " + std::to_string(p.omega) + ")");
  if (!(p.alpha > 0)) out_of_range("alpha > 0 violated");
  if (!(p.b > 0)) out_of_range("b > 0 violated");
  if (p.kappa != 1 && p.kappa != -1) out_of_range("kappa must be +1 or -1");
  if (mode == Mode::Variational) {
    double lim = std::min<double>(p.d, 4.0);
    if (!(p.b < lim)) {
      msg << "b < min{d, 4} = " << lim << " violated (b = " << p.b << ")";
      out_of_range(msg.str());
    }
  } else {
    double lim = std::min(0.5 * p.d, 4.0);
    if (!(p.b < lim)) {
      msg << "b < min{d/2, 4} = " << lim << " violated (b = " << p.b << ")";
      out_of_range(msg.str());
    }
  }
  if (p.d >= 5 && !(p.alpha < (8.0 - 2.0 * p.b) / (p.d - 4))) {
    msg << "alpha < (8-2b)/(d-4) = " << (8.0 - 2.0 * p.b) / (p.d - 4) << " violated";
    out_of_range(msg.str());
  }
  Regime r;
  r.tag = classify(gamma_c(p));
  r.radial_required = !(p.d >= 5 || (p.d == 4 && p.b > 1 && p.b < 2));
  return r;
}

CriticalExponents critical_exponents(const PhysParams& p, bool radial) {
  validate_params(p, Mode::Evolution);
  double g = gamma_c(p);
  if (classify(g) != RegimeTag::Intercritical)
    out_of_range("exponent system needs (8-2b)/d < alpha (gamma_c = " + std::to_string(g) + ")");
  const double d = p.d, a = p.alpha, b = p.b;
  CriticalExponents ce;
  ce.gamma_c = g;
  ce.sigma_c = sigma_c(p);
  ce.q = 8.0 * (a + 2) / (d * a + 2 * b);
  ce.r = d * (a + 2) / (d - b);
  ce.k = 4.0 * a * (a + 2) / subcritical_gap(p);
  ce.m = 4.0 * a * (a + 2) / (d * a * a + (d - 4 + 2 * b) * a - 8 + 2 * b);
  ce.rho_growth = radial ? 1.0 / 3.0 : 1.0 / (1.0 + std::min(2.0, b));
  return ce;
}

bool is_biharmonic_admissible(double q, double r, int d) {
  if (d < 1 || !(q >= 2) || !(r >= 2)) return false;
  if (std::isinf(r)) {
    if (d > 3) return false;
  } else if (d >= 5 && r > 2.0 * d / (d - 4) * (1 + 1e-14)) {
    return false;
  }
  double lhs = 4.0 / q + (std::isinf(r) ? 0.0 : d / r);
  return std::abs(lhs - 0.5 * d) <= 1e-12 * std::max(1.0, 0.5 * d);
}

}  // namespace ibnls
