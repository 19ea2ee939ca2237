#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmlab/errors.hpp"

namespace pmlab {

// The diffusion nonlinearity phi: [0, domain_cap] -> [0, inf).
//
// Three kinds:
//   PowerLaw(m)         phi(z) = z^m, m > 1
//   BiofilmIntegral(a,b) phi(z) = integral_0^z s^b (1-s)^{-a} ds, a >= 1, b > 0
//   Tabulated           shape-preserving monotone cubic through given nodes
//
// phi(0) = 0 and phi is strictly increasing on [0, domain_cap]. For the
// singular kinds (a >= 1) phi blows up as z -> 1, so evaluation is capped at
// domain_cap < 1. Values are immutable after construction and safe to share
// across threads.
class Nonlinearity {
 public:
  enum class Kind { PowerLaw, BiofilmIntegral, Tabulated };

  static constexpr double kDefaultCap = 1.0 - 1e-6;

  static Nonlinearity power_law(double m, double domain_cap = kDefaultCap);
  static Nonlinearity biofilm(double a, double b,
                              double domain_cap = kDefaultCap);
  // Nodes must be sorted in z with node[0] = (0, 0) and strictly increasing
  // phi values; domain_cap is the last node's z.
  static Nonlinearity tabulated(std::vector<std::pair<double, double>> nodes);

  // Same nonlinearity with phi multiplied by `factor` (diffusion scaling d2).
  Nonlinearity scaled(double factor) const;

  double phi(double z) const;        // throws DomainError outside [0, cap]
  double phi_prime(double z) const;  // one-sided limit at z = 0
  double beta(double v) const;       // inverse of phi, safeguarded bracketing
  double domain_cap() const { return domain_cap_; }
  double phi_cap() const { return phi_cap_; }  // phi(domain_cap)
  Kind kind() const { return kind_; }
  double scale() const { return scale_; }

  // Kind parameters (power-law exponent, biofilm a/b); meaningful only for
  // the matching kind.
  double param_m() const { return m_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }

  // Smallest positive node of a Tabulated kind (0 otherwise); fitting does
  // not sample below the table's resolution.
  double min_positive_node() const {
    return (kind_ == Kind::Tabulated && tz_.size() > 1) ? tz_[1] : 0.0;
  }

 private:
  Nonlinearity() = default;
  void finalize();
  double phi_raw(double z) const;
  double phi_prime_raw(double z) const;

  Kind kind_ = Kind::PowerLaw;
  double m_ = 2.0;              // PowerLaw exponent
  double a_ = 1.0, b_ = 1.0;    // BiofilmIntegral exponents
  double scale_ = 1.0;
  double domain_cap_ = kDefaultCap;
  double phi_cap_ = 0.0;

  // Tabulated representation: nodes plus monotone cubic slopes.
  std::vector<double> tz_, tphi_, tslope_;
  bool closed_form_ = false;  // BiofilmIntegral: binomial antiderivative usable
};

// Fitted structural constants of the porous-medium degeneracy and its
// consequences:
//   c1 z^{m-1} <= phi'(z) <= c2 z^{m-1} on (0, eps], plus the minimum lambda
//   of phi' on [eps, 1-mu] and the maximum m_cap of phi' on [0, 1-mu].
struct StructuralConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double m = 2.0;
  double eps = 0.5;
  double lambda = 0.0;
  double m_cap = 0.0;
  double mu = 0.0;
};

// Fits m by log-log regression of phi' against z over a geometric sample of
// (0, eps], then c1/c2 as the extreme ratios phi'(z)/z^{m-1}. If fixed_m is
// given, the regression is skipped and the exponent taken as given.
// Throws FitError when the regression residual exceeds residual_tol; the
// residual is bounded by the envelope spread log(c2/c1), so the default
// admits any degenerate nonlinearity whose two-sided constants stay within a
// factor e^2 of each other over the sampled range.
StructuralConstants fit_structural_constants(
    const Nonlinearity& nl, double eps, double mu, int sample_count,
    std::optional<double> fixed_m = std::nullopt, double residual_tol = 1.0);

struct CheckResult {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // minimum slack of the checked inequality
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

// Checks strict monotonicity, the two-sided degeneracy bound, the
// integrated bound c1 z^m <= m phi(z) <= c2 z^m, and a blow-up proxy for
// surjectivity: phi(domain_cap) must exceed divergence_threshold. Failures
// are reported, never thrown.
ValidationReport validate_hypotheses(const Nonlinearity& nl,
                                     const StructuralConstants& sc,
                                     int sample_count = 1024,
                                     double divergence_threshold = 10.0);

namespace detail {
// Adaptive Gauss-Kronrod integration of the biofilm integrand s^b (1-s)^{-a}
// over [0, z]; exposed so tests can pit it against the closed form.
double integrate_biofilm_phi(double a, double b, double z,
                             double rel_tol = 1e-13);
}  // namespace detail

}  // namespace pmlab
