#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cohesive {

/// Raised when a pointwise-limit classification is requested for a scaling
/// that has no known limit.
class UnsupportedRegime : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Family : std::uint8_t {
  Prototype,          // l s / (1 - s)
  DugdaleModified,    // (a s) v base(s)
  PowerLaw,           // kappa s / (1 - s)^p
  PowerLawTruncated,  // (j s / (1 - s)) ^ kappa s / (1 - s)^p
  GriffithScaled,     // l_j s / (1 - s)
  Custom,             // tabulated, monotone piecewise-linear
};

std::string to_string(Family family);

/// A damage potential f on [0,1): nondecreasing, f(0) = 0, f > 0 on (0,1),
/// diverging at 1. Every family is evaluated through the bounded product
/// (1 - s) f(s) close to s = 1.
///
/// Immutable value type; copies share the (immutable) base of a Dugdale
/// modification and the samples of a tabulated potential.
class DamagePotential {
 public:
  static DamagePotential prototype(double ell);
  static DamagePotential dugdale(const DamagePotential& base, double a);
  static DamagePotential power_law(double p, double kappa);
  static DamagePotential power_law_truncated(double p, double kappa, double j);
  static DamagePotential griffith(double ell_j);
  /// Samples must start at (0, 0), be strictly increasing in s, nondecreasing
  /// in f, positive for s > 0, and reach s >= 0.75 so that the limit of
  /// (1 - s) f(s) can be extrapolated.
  static DamagePotential tabulated(std::vector<double> s, std::vector<double> f);

  Family family() const { return family_; }

  /// f(s) for s in [0,1).
  double f(double s) const;
  /// (1 - s) f(s) on [0,1], continuously extended at 1 (+inf for power laws).
  double product(double s) const;
  /// 1 / f(s) on [0,1]: +inf at 0, 0 at 1.
  double inverse(double s) const;
  /// d/ds of 1 / f(s) on (0,1].
  double inverse_derivative(double s) const;
  /// lim_{s -> 1} (1 - s) f(s); +inf for PowerLaw.
  double ell() const { return ell_; }

  /// Exponent p and coefficient kappa of the divergence (1 - s)^{-p}; p = 1
  /// and kappa = ell for the families with finite ell.
  double divergence_exponent() const;
  double divergence_coefficient() const;

  /// One-line human readable descriptor, e.g. "prototype(ell=1)".
  std::string describe() const;

  // Family parameters; meaning depends on family().
  double param_a() const { return a_; }
  double param_p() const { return p_; }
  double param_kappa() const { return kappa_; }
  const DamagePotential* base() const { return base_.get(); }

 private:
  DamagePotential() = default;
  double tabulated_f(double s) const;
  double tabulated_product(double s) const;
  double tabulated_f_slope(double s) const;

  Family family_ = Family::Prototype;
  double ell_ = 1.0;
  double a_ = 0.0;
  double p_ = 1.0;
  double kappa_ = 1.0;
  std::shared_ptr<const DamagePotential> base_;
  struct Table {
    std::vector<double> s;
    std::vector<double> f;
  };
  std::shared_ptr<const Table> table_;
};

// Free-function surface mirroring the operations of the potentials module.

/// f(s); throws std::domain_error unless 0 <= s < 1.
double eval_f(const DamagePotential& pot, double s);
/// (1 - s) f(s) on [0,1]; +inf marks a divergent extension at s = 1.
double one_minus_s_times_f(const DamagePotential& pot, double s);
/// Truncated potential f_eps(s) = 1 ^ sqrt(eps) f(s), with f_eps(1) = 1.
double eval_fk(const DamagePotential& pot, double eps, double s);
double ell_of(const DamagePotential& pot);
/// Smallest s with sqrt(eps) f(s) = 1, found by bisection on
/// sqrt(eps) (1 - s) f(s) = 1 - s.
double fk_breakpoint(const DamagePotential& pot, double eps);

/// Sequences eps_k (strictly decreasing), eta_k = o(eps_k) and an optional
/// coupling a_k, generated geometrically: eps_k = eps0 * ratio^k,
/// eta_k = eta_scale * eps_k^eta_power, a_k = a0 * eps_k^{-a_power}.
struct EpsilonSchedule {
  double eps0 = 0.1;
  double ratio = 0.5;
  double eta_scale = 1e-6;
  double eta_power = 2.0;
  bool has_coupling = false;
  double a0 = 1.0;
  double a_power = 0.25;

  double eps(int k) const;
  double eta(int k) const;
  double a(int k) const;
  /// Checks eps decreasing, eta/eps decreasing to zero and, with a coupling,
  /// a_k increasing with a_k sqrt(eps_k) decreasing, on the first n terms.
  /// Throws std::invalid_argument on violation.
  void validate(int n) const;
};

// Pointwise limits of f_k^(k) = 1 ^ sqrt(eps_k) f^(k).

enum class SequenceKind : std::uint8_t {
  DugdaleMax,       // f^(k)(s) = (a_k s) v f(s), f the prototype
  ScaledPrototype,  // f^(k)(s) = a_k s / (1 - s)
};

enum class Coupling : std::uint8_t {
  Vanishing,     // a_k sqrt(eps_k) -> 0
  Finite,        // a_k sqrt(eps_k) -> gamma in (0, inf)
  Diverging,     // a_k sqrt(eps_k) -> inf
  InverseRoot,   // a_k = eps_k^{-1/2}
};

enum class PointwiseLimit : std::uint8_t {
  IndicatorOfOne,     // chi_{1}
  Identity,           // s
  CappedScaled,       // gamma s / (1 - s) ^ 1
  IndicatorPositive,  // chi_(0,1]
};

std::string to_string(PointwiseLimit limit);

struct FkkClassification {
  PointwiseLimit limit;
  double gamma = 0.0;
  /// Value of the pointwise limit at s in [0,1].
  double limit_value(double s) const;
};

FkkClassification classify_fkk_pointwise(SequenceKind kind, Coupling coupling,
                                         double gamma = 1.0, double ell = 1.0);

/// Concrete sequences realizing each coupling, with eps_k = 4^{-k}:
/// Vanishing a_k = 2^{k/2}; Finite a_k = gamma eps_k^{-1/2} (1 + 2^{-k});
/// Diverging a_k = eps_k^{-1}; InverseRoot a_k = eps_k^{-1/2}.
double coupling_eps(int k);
double coupling_a(Coupling coupling, int k, double gamma = 1.0);

/// f_k^(k)(s) for the k-th member of the sequence.
double eval_fkk(SequenceKind kind, Coupling coupling, int k, double s,
                double gamma = 1.0, double ell = 1.0);

}  // namespace cohesive
