#include "cohesive/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cohesive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Above this, f is assembled from the bounded product (1 - s) f(s).
constexpr double kProductSwitch = 1.0 - 1e-12;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void require_unit_closed(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::domain_error("argument outside [0,1]");
  }
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::Prototype: return "prototype";
    case Family::DugdaleModified: return "dugdale";
    case Family::PowerLaw: return "power_law";
    case Family::PowerLawTruncated: return "power_law_truncated";
    case Family::GriffithScaled: return "griffith";
    case Family::Custom: return "custom";
  }
  return "unknown";
}

DamagePotential DamagePotential::prototype(double ell) {
  require_positive(ell, "ell");
  DamagePotential pot;
  pot.family_ = Family::Prototype;
  pot.ell_ = ell;
  return pot;
}

DamagePotential DamagePotential::griffith(double ell_j) {
  require_positive(ell_j, "ell_j");
  DamagePotential pot;
  pot.family_ = Family::GriffithScaled;
  pot.ell_ = ell_j;
  return pot;
}

DamagePotential DamagePotential::dugdale(const DamagePotential& base, double a) {
  require_positive(a, "a");
  if (base.family() == Family::PowerLaw) {
    throw std::invalid_argument("dugdale modification needs a base with finite ell");
  }
  DamagePotential pot;
  pot.family_ = Family::DugdaleModified;
  pot.a_ = a;
  pot.ell_ = base.ell();
  pot.base_ = std::make_shared<const DamagePotential>(base);
  return pot;
}

DamagePotential DamagePotential::power_law(double p, double kappa) {
  require_positive(kappa, "kappa");
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must exceed 1");
  DamagePotential pot;
  pot.family_ = Family::PowerLaw;
  pot.p_ = p;
  pot.kappa_ = kappa;
  pot.ell_ = kInf;
  return pot;
}

DamagePotential DamagePotential::power_law_truncated(double p, double kappa, double j) {
  require_positive(kappa, "kappa");
  require_positive(j, "j");
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must exceed 1");
  DamagePotential pot;
  pot.family_ = Family::PowerLawTruncated;
  pot.p_ = p;
  pot.kappa_ = kappa;
  pot.ell_ = j;
  return pot;
}

DamagePotential DamagePotential::tabulated(std::vector<double> s, std::vector<double> f) {
  if (s.size() != f.size() || s.size() < 3) {
    throw std::invalid_argument("tabulated potential needs >= 3 matching samples");
  }
  if (s.front() != 0.0 || f.front() != 0.0) {
    throw std::invalid_argument("tabulated potential must start at (0, 0)");
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1]) || !(s[i] < 1.0)) {
      throw std::invalid_argument("tabulated s must be strictly increasing in [0,1)");
    }
    if (!(f[i] >= f[i - 1]) || !(f[i] > 0.0) || !std::isfinite(f[i])) {
      throw std::invalid_argument("tabulated f must be nondecreasing and positive for s > 0");
    }
  }
  if (s.back() < 0.75) {
    throw std::invalid_argument("tabulated potential must reach s >= 0.75");
  }
  DamagePotential pot;
  pot.family_ = Family::Custom;
  pot.table_ = std::make_shared<const Table>(Table{std::move(s), std::move(f)});

  // Richardson extrapolation of (1 - s) f(s) at s = 1 - 2^{-m}: for
  // P(1 - h) = ell + c h + O(h^2), 2 P(1 - h/2) - P(1 - h) = ell + O(h^2).
  const double last = pot.table_->s.back();
  int m = 1;
  while (1.0 - std::ldexp(1.0, -(m + 1)) <= last) ++m;
  const double coarse = pot.tabulated_product(1.0 - std::ldexp(1.0, -(m - 1)));
  const double fine = pot.tabulated_product(1.0 - std::ldexp(1.0, -m));
  double ell = 2.0 * fine - coarse;
  if (!(ell > 0.0)) ell = fine;
  pot.ell_ = ell;
  return pot;
}

double DamagePotential::tabulated_f(double s) const {
  const auto& t = *table_;
  auto it = std::upper_bound(t.s.begin(), t.s.end(), s);
  const std::size_t hi = static_cast<std::size_t>(it - t.s.begin());
  if (hi >= t.s.size()) {
    if (s == t.s.back()) return t.f.back();
    return tabulated_product(s) / (1.0 - s);
  }
  const std::size_t lo = hi - 1;
  const double w = (s - t.s[lo]) / (t.s[hi] - t.s[lo]);
  return t.f[lo] + w * (t.f[hi] - t.f[lo]);
}

double DamagePotential::tabulated_product(double s) const {
  const auto& t = *table_;
  const double last_s = t.s.back();
  if (s <= last_s) {
    return (1.0 - s) * tabulated_f(s);
  }
  // Linear blend of the product between the last sample and ell at s = 1.
  // During construction ell_ is not yet known; the Richardson points lie
  // inside the table so this branch is not reached then.
  const double last_p = (1.0 - last_s) * t.f.back();
  const double w = (s - last_s) / (1.0 - last_s);
  return last_p + w * (ell_ - last_p);
}

double DamagePotential::tabulated_f_slope(double s) const {
  const auto& t = *table_;
  auto it = std::upper_bound(t.s.begin(), t.s.end(), s);
  std::size_t hi = static_cast<std::size_t>(it - t.s.begin());
  if (hi >= t.s.size()) {
    const double last_s = t.s.back();
    const double last_p = (1.0 - last_s) * t.f.back();
    const double dp = (ell_ - last_p) / (1.0 - last_s);
    const double p = tabulated_product(s);
    return dp / (1.0 - s) + p / ((1.0 - s) * (1.0 - s));
  }
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  return (t.f[hi] - t.f[lo]) / (t.s[hi] - t.s[lo]);
}

double DamagePotential::product(double s) const {
  require_unit_closed(s);
  const double r = 1.0 - s;
  switch (family_) {
    case Family::Prototype:
    case Family::GriffithScaled:
      return ell_ * s;
    case Family::DugdaleModified:
      return std::max(a_ * s * r, base_->product(s));
    case Family::PowerLaw:
      if (r == 0.0) return kInf;
      return kappa_ * s * std::pow(r, 1.0 - p_);
    case Family::PowerLawTruncated: {
      const double lin = ell_ * s;
      if (r == 0.0) return lin;
      return std::min(lin, kappa_ * s * std::pow(r, 1.0 - p_));
    }
    case Family::Custom:
      return s == 1.0 ? ell_ : tabulated_product(s);
  }
  return 0.0;
}

double DamagePotential::f(double s) const {
  if (!(s >= 0.0 && s < 1.0)) throw std::domain_error("f is defined on [0,1)");
  const double r = 1.0 - s;
  if (s >= kProductSwitch) return product(s) / r;
  switch (family_) {
    case Family::Prototype:
    case Family::GriffithScaled:
      return ell_ * s / r;
    case Family::DugdaleModified:
      return std::max(a_ * s, base_->f(s));
    case Family::PowerLaw:
      return kappa_ * s * std::pow(r, -p_);
    case Family::PowerLawTruncated:
      return std::min(ell_ * s / r, kappa_ * s * std::pow(r, -p_));
    case Family::Custom:
      return tabulated_f(s);
  }
  return 0.0;
}

double DamagePotential::inverse(double s) const {
  require_unit_closed(s);
  if (s == 0.0) return kInf;
  const double r = 1.0 - s;
  switch (family_) {
    case Family::Prototype:
    case Family::GriffithScaled:
      return r / (ell_ * s);
    case Family::DugdaleModified:
      return std::min(1.0 / (a_ * s), base_->inverse(s));
    case Family::PowerLaw:
      return std::pow(r, p_) / (kappa_ * s);
    case Family::PowerLawTruncated:
      return std::max(r / (ell_ * s), std::pow(r, p_) / (kappa_ * s));
    case Family::Custom:
      if (s == 1.0) return 0.0;
      return r / tabulated_product(s);
  }
  return 0.0;
}

double DamagePotential::inverse_derivative(double s) const {
  require_unit_closed(s);
  if (s == 0.0) return -kInf;
  const double r = 1.0 - s;
  switch (family_) {
    case Family::Prototype:
    case Family::GriffithScaled:
      return -1.0 / (ell_ * s * s);
    case Family::DugdaleModified: {
      const double lin = 1.0 / (a_ * s);
      const double other = base_->inverse(s);
      return lin <= other ? -1.0 / (a_ * s * s) : base_->inverse_derivative(s);
    }
    case Family::PowerLaw:
      return -std::pow(r, p_ - 1.0) * (p_ * s + r) / (kappa_ * s * s);
    case Family::PowerLawTruncated: {
      const double lin = r / (ell_ * s);
      const double pw = std::pow(r, p_) / (kappa_ * s);
      if (lin >= pw) return -1.0 / (ell_ * s * s);
      return -std::pow(r, p_ - 1.0) * (p_ * s + r) / (kappa_ * s * s);
    }
    case Family::Custom: {
      if (s == 1.0) return -1.0 / ell_;
      const double fv = tabulated_f(s);
      return -tabulated_f_slope(s) / (fv * fv);
    }
  }
  return 0.0;
}

double DamagePotential::divergence_exponent() const {
  return family_ == Family::PowerLaw ? p_ : 1.0;
}

double DamagePotential::divergence_coefficient() const {
  return family_ == Family::PowerLaw ? kappa_ : ell_;
}

std::string DamagePotential::describe() const {
  std::ostringstream out;
  out.precision(12);
  switch (family_) {
    case Family::Prototype: out << "prototype(ell=" << ell_ << ")"; break;
    case Family::GriffithScaled: out << "griffith(ell_j=" << ell_ << ")"; break;
    case Family::DugdaleModified:
      out << "dugdale(a=" << a_ << ",base=" << base_->describe() << ")";
      break;
    case Family::PowerLaw: out << "power_law(p=" << p_ << ",kappa=" << kappa_ << ")"; break;
    case Family::PowerLawTruncated:
      out << "power_law_truncated(p=" << p_ << ",kappa=" << kappa_ << ",j=" << ell_ << ")";
      break;
    case Family::Custom:
      out << "custom(samples=" << table_->s.size() << ",ell=" << ell_ << ")";
      break;
  }
  return out.str();
}

double eval_f(const DamagePotential& pot, double s) { return pot.f(s); }

double one_minus_s_times_f(const DamagePotential& pot, double s) { return pot.product(s); }

double eval_fk(const DamagePotential& pot, double eps, double s) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  require_unit_closed(s);
  if (s == 1.0) return 1.0;
  const double root = std::sqrt(eps);
  if (s >= kProductSwitch) {
    // sqrt(eps) f(s) >= 1 iff sqrt(eps) (1 - s) f(s) >= 1 - s.
    const double prod = pot.product(s);
    const double r = 1.0 - s;
    return root * prod >= r ? 1.0 : root * prod / r;
  }
  return std::min(1.0, root * pot.f(s));
}

double ell_of(const DamagePotential& pot) { return pot.ell(); }

double fk_breakpoint(const DamagePotential& pot, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double root = std::sqrt(eps);
  auto excess = [&](double s) { return root * pot.product(s) - (1.0 - s); };
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return hi;
}

double EpsilonSchedule::eps(int k) const { return eps0 * std::pow(ratio, k); }

double EpsilonSchedule::eta(int k) const { return eta_scale * std::pow(eps(k), eta_power); }

double EpsilonSchedule::a(int k) const { return a0 * std::pow(eps(k), -a_power); }

void EpsilonSchedule::validate(int n) const {
  if (!(eps0 > 0.0) || !(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("eps schedule must be positive and strictly decreasing");
  }
  if (!(eta_scale > 0.0) || !(eta_power > 1.0)) {
    throw std::invalid_argument("eta must be positive with eta = o(eps)");
  }
  for (int k = 1; k < n; ++k) {
    if (!(eps(k) < eps(k - 1))) throw std::invalid_argument("eps not decreasing");
    if (!(eta(k) / eps(k) < eta(k - 1) / eps(k - 1))) {
      throw std::invalid_argument("eta / eps not decreasing");
    }
    if (has_coupling) {
      if (!(a(k) > a(k - 1))) throw std::invalid_argument("a_k not increasing");
      if (!(a(k) * std::sqrt(eps(k)) < a(k - 1) * std::sqrt(eps(k - 1)))) {
        throw std::invalid_argument("a_k sqrt(eps_k) not decreasing");
      }
    }
  }
  if (has_coupling && !(a_power > 0.0 && a_power < 0.5)) {
    throw std::invalid_argument("coupling needs a_k -> inf and a_k sqrt(eps_k) -> 0");
  }
}

std::string to_string(PointwiseLimit limit) {
  switch (limit) {
    case PointwiseLimit::IndicatorOfOne: return "indicator_of_one";
    case PointwiseLimit::Identity: return "identity";
    case PointwiseLimit::CappedScaled: return "capped_scaled";
    case PointwiseLimit::IndicatorPositive: return "indicator_positive";
  }
  return "unknown";
}

double FkkClassification::limit_value(double s) const {
  require_unit_closed(s);
  switch (limit) {
    case PointwiseLimit::IndicatorOfOne: return s == 1.0 ? 1.0 : 0.0;
    case PointwiseLimit::Identity: return s;
    case PointwiseLimit::CappedScaled:
      if (s == 1.0) return 1.0;
      return std::min(1.0, gamma * s / (1.0 - s));
    case PointwiseLimit::IndicatorPositive: return s > 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

FkkClassification classify_fkk_pointwise(SequenceKind kind, Coupling coupling, double gamma,
                                         double ell) {
  require_positive(ell, "ell");
  switch (kind) {
    case SequenceKind::ScaledPrototype:
      switch (coupling) {
        case Coupling::Vanishing: return {PointwiseLimit::IndicatorOfOne, 0.0};
        case Coupling::Finite:
          require_positive(gamma, "gamma");
          return {PointwiseLimit::CappedScaled, gamma};
        case Coupling::InverseRoot: return {PointwiseLimit::CappedScaled, 1.0};
        case Coupling::Diverging: return {PointwiseLimit::IndicatorPositive, 0.0};
      }
      break;
    case SequenceKind::DugdaleMax:
      switch (coupling) {
        case Coupling::Vanishing: return {PointwiseLimit::IndicatorOfOne, 0.0};
        case Coupling::InverseRoot: return {PointwiseLimit::Identity, 0.0};
        case Coupling::Diverging: return {PointwiseLimit::IndicatorPositive, 0.0};
        case Coupling::Finite:
          throw UnsupportedRegime("no pointwise limit known for (a_k s) v f with finite coupling");
      }
      break;
  }
  throw UnsupportedRegime("unsupported sequence/coupling combination");
}

double coupling_eps(int k) { return std::ldexp(1.0, -2 * k); }

double coupling_a(Coupling coupling, int k, double gamma) {
  const double root_inv = std::ldexp(1.0, k);  // eps_k^{-1/2}
  switch (coupling) {
    case Coupling::Vanishing: return std::sqrt(root_inv);
    case Coupling::Finite: return gamma * root_inv * (1.0 + std::ldexp(1.0, -k));
    case Coupling::Diverging: return root_inv * root_inv;
    case Coupling::InverseRoot: return root_inv;
  }
  return 0.0;
}

double eval_fkk(SequenceKind kind, Coupling coupling, int k, double s, double gamma,
                double ell) {
  require_unit_closed(s);
  if (s == 1.0) return 1.0;
  const double a = coupling_a(coupling, k, gamma);
  const double eps = coupling_eps(k);
  const auto base = DamagePotential::prototype(ell);
  const auto member = kind == SequenceKind::DugdaleMax
                          ? DamagePotential::dugdale(base, a)
                          : DamagePotential::griffith(a);
  return eval_fk(member, eps, s);
}

}  // namespace cohesive
