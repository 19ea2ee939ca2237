#include "pmlab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pmlab {

namespace {

bool nearly_integer(double x, double tol = 1e-12) {
  return std::abs(x - std::round(x)) <= tol;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
  return r;
}

// Antiderivative of z^b (1-z)^{-a} for integer b via w = 1-z:
//   phi(u) = sum_j C(b,j) (-1)^j int_{1-u}^1 w^{j-a} dw.
double biofilm_phi_binomial(double a, int b, double u) {
  double acc = 0.0;
  const double w = 1.0 - u;
  for (int j = 0; j <= b; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const double e = j - a + 1.0;
    double term;
    if (std::abs(e) < 1e-13) {
      term = -std::log(w);
    } else {
      term = (1.0 - std::pow(w, e)) / e;
    }
    acc += sign * binomial(b, j) * term;
  }
  return acc;
}

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1,1].
constexpr double kKronrodNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,
    0.741531185599394,  0.864864423359769,  0.949107912342759,
    0.991455371120813};
constexpr double kKronrodWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529};
constexpr double kGaussWeights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

template <typename F>
void gauss_kronrod(const F& f, double lo, double hi, double& kron,
                   double& err) {
  const double c = 0.5 * (lo + hi);
  const double hw = 0.5 * (hi - lo);
  double g = 0.0;
  kron = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double fx = f(c + hw * kKronrodNodes[i]);
    kron += kKronrodWeights[i] * fx;
    if (i % 2 == 1) g += kGaussWeights[i / 2] * fx;
  }
  kron *= hw;
  g *= hw;
  err = std::abs(kron - g);
}

template <typename F>
double adaptive_gk(const F& f, double lo, double hi, double tol, int depth) {
  double v, err;
  gauss_kronrod(f, lo, hi, v, err);
  if (err <= tol || depth >= 40) return v;
  const double mid = 0.5 * (lo + hi);
  return adaptive_gk(f, lo, mid, 0.5 * tol, depth + 1) +
         adaptive_gk(f, mid, hi, 0.5 * tol, depth + 1);
}

}  // namespace

namespace detail {

double integrate_biofilm_phi(double a, double b, double z, double rel_tol) {
  if (z <= 0.0) return 0.0;
  auto integrand = [a, b](double s) {
    return std::pow(s, b) * std::pow(1.0 - s, -a);
  };
  const double lo_end = std::min(z, 0.5);
  double acc = adaptive_gk(integrand, 0.0, lo_end, rel_tol, 0);
  if (z <= 0.5) return acc;

  // On [1/2, z] substitute w = 1-s and expand (1-w)^b binomially; |w| <= 1/2
  // so the series of term-wise closed-form integrals converges geometrically.
  //   int_{1-z}^{1/2} (1-w)^b w^{-a} dw
  const double wlo = 1.0 - z;
  double coeff = 1.0;  // generalized binomial C(b, k) * (-1)^k
  for (int k = 0; k < 200; ++k) {
    const double e = k - a + 1.0;
    double term;
    if (std::abs(e) < 1e-13) {
      term = std::log(0.5 / wlo);
    } else {
      term = (std::pow(0.5, e) - std::pow(wlo, e)) / e;
    }
    const double contrib = coeff * term;
    acc += contrib;
    if (k > 4 && std::abs(contrib) <= rel_tol * std::max(1.0, std::abs(acc)))
      break;
    coeff *= -(b - k) / (k + 1.0);
  }
  return acc;
}

}  // namespace detail

Nonlinearity Nonlinearity::power_law(double m, double domain_cap) {
  if (!(m > 1.0)) throw DomainError("power law requires m > 1");
  if (!(domain_cap > 0.0 && domain_cap < 1.0))
    throw DomainError("domain_cap must lie in (0,1)");
  Nonlinearity nl;
  nl.kind_ = Kind::PowerLaw;
  nl.m_ = m;
  nl.domain_cap_ = domain_cap;
  nl.finalize();
  return nl;
}

Nonlinearity Nonlinearity::biofilm(double a, double b, double domain_cap) {
  if (!(a >= 1.0)) throw DomainError("biofilm integrand requires a >= 1");
  if (!(b > 0.0)) throw DomainError("biofilm integrand requires b > 0");
  if (!(domain_cap > 0.0 && domain_cap < 1.0))
    throw DomainError("domain_cap must lie in (0,1)");
  Nonlinearity nl;
  nl.kind_ = Kind::BiofilmIntegral;
  nl.a_ = a;
  nl.b_ = b;
  nl.domain_cap_ = domain_cap;
  nl.closed_form_ = nearly_integer(b) && b <= 16.5;
  nl.finalize();
  return nl;
}

Nonlinearity Nonlinearity::tabulated(
    std::vector<std::pair<double, double>> nodes) {
  if (nodes.size() < 4) throw DomainError("tabulated phi needs >= 4 nodes");
  if (std::abs(nodes.front().first) > 1e-14 ||
      std::abs(nodes.front().second) > 1e-14)
    throw DomainError("tabulated phi must start at (0,0)");
  for (size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i].first > nodes[i - 1].first))
      throw DomainError("tabulated nodes must be strictly increasing in z");
  }
  Nonlinearity nl;
  nl.kind_ = Kind::Tabulated;
  nl.tz_.reserve(nodes.size());
  nl.tphi_.reserve(nodes.size());
  for (auto& [z, p] : nodes) {
    nl.tz_.push_back(z);
    nl.tphi_.push_back(p);
  }
  nl.domain_cap_ = nl.tz_.back();

  // Fritsch-Carlson monotone cubic slopes. A non-monotone table still gets a
  // defined interpolant (secant slopes floored at zero) so validators can
  // report the monotonicity violation instead of crashing.
  const size_t n = nl.tz_.size();
  std::vector<double> d(n - 1);
  for (size_t i = 0; i + 1 < n; ++i)
    d[i] = (nl.tphi_[i + 1] - nl.tphi_[i]) / (nl.tz_[i + 1] - nl.tz_[i]);
  nl.tslope_.assign(n, 0.0);
  nl.tslope_[0] = d[0];
  nl.tslope_[n - 1] = d[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0)
      nl.tslope_[i] = 0.0;
    else
      nl.tslope_[i] = 0.5 * (d[i - 1] + d[i]);
  }
  for (size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      nl.tslope_[i] = nl.tslope_[i + 1] = 0.0;
      continue;
    }
    const double alpha = nl.tslope_[i] / d[i];
    const double beta = nl.tslope_[i + 1] / d[i];
    const double s = alpha * alpha + beta * beta;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      nl.tslope_[i] = tau * alpha * d[i];
      nl.tslope_[i + 1] = tau * beta * d[i];
    }
  }
  nl.finalize();
  return nl;
}

Nonlinearity Nonlinearity::scaled(double factor) const {
  if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
  Nonlinearity nl = *this;
  nl.scale_ = scale_ * factor;
  nl.phi_cap_ = phi_cap_ * factor;
  return nl;
}

void Nonlinearity::finalize() { phi_cap_ = phi(domain_cap_); }

double Nonlinearity::phi_raw(double z) const {
  switch (kind_) {
    case Kind::PowerLaw:
      return std::pow(z, m_);
    case Kind::BiofilmIntegral:
      if (closed_form_)
        return biofilm_phi_binomial(a_, static_cast<int>(std::round(b_)), z);
      return detail::integrate_biofilm_phi(a_, b_, z);
    case Kind::Tabulated: {
      auto it = std::upper_bound(tz_.begin(), tz_.end(), z);
      size_t i = static_cast<size_t>(std::max<ptrdiff_t>(
          0, std::distance(tz_.begin(), it) - 1));
      if (i >= tz_.size() - 1) i = tz_.size() - 2;
      const double hh = tz_[i + 1] - tz_[i];
      const double t = (z - tz_[i]) / hh;
      const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
      const double h10 = t * (1 - t) * (1 - t);
      const double h01 = t * t * (3 - 2 * t);
      const double h11 = t * t * (t - 1);
      return h00 * tphi_[i] + h10 * hh * tslope_[i] + h01 * tphi_[i + 1] +
             h11 * hh * tslope_[i + 1];
    }
  }
  return 0.0;
}

double Nonlinearity::phi(double z) const {
  if (z < 0.0 || z > domain_cap_ * (1.0 + 1e-14))
    throw DomainError("phi evaluated outside [0, domain_cap]");
  z = std::min(z, domain_cap_);
  if (z == 0.0) return 0.0;
  return scale_ * phi_raw(z);
}

double Nonlinearity::phi_prime_raw(double z) const {
  switch (kind_) {
    case Kind::PowerLaw:
      return m_ * std::pow(z, m_ - 1.0);
    case Kind::BiofilmIntegral:
      return std::pow(z, b_) * std::pow(1.0 - z, -a_);
    case Kind::Tabulated: {
      // Centered finite difference of the interpolant; one-sided at the ends.
      const double h = 1e-7 * std::max(1.0, domain_cap_);
      const double zl = std::max(0.0, z - h);
      const double zr = std::min(domain_cap_, z + h);
      return (phi_raw(zr) - phi_raw(zl)) / (zr - zl);
    }
  }
  return 0.0;
}

double Nonlinearity::phi_prime(double z) const {
  if (z < 0.0 || z > domain_cap_ * (1.0 + 1e-14))
    throw DomainError("phi' evaluated outside [0, domain_cap]");
  z = std::min(z, domain_cap_);
  return scale_ * phi_prime_raw(z);
}

double Nonlinearity::beta(double v) const {
  if (v < 0.0 || v > phi_cap_ * (1.0 + 1e-12))
    throw DomainError("beta argument exceeds phi(domain_cap)");
  if (v <= 0.0) return 0.0;
  v = std::min(v, phi_cap_);

  // Converge in both the value and the argument: near the degeneracy phi' is
  // tiny and a value tolerance alone leaves z inaccurate, near the cap phi'
  // is huge and an argument tolerance alone leaves the residual large.
  const double ftol = 1e-12 * std::max(1.0, v);
  const double ztol = 1e-13;
  double lo = 0.0, hi = domain_cap_;
  if (phi_cap_ - v <= 0.0) return domain_cap_;

  // Newton from the midpoint, guarded by the bracket; bisect whenever the
  // Newton step leaves it or the derivative degenerates.
  double z = 0.5 * (lo + hi);
  for (int iter = 0; iter < 120; ++iter) {
    const double f = phi(z) - v;
    if (f > 0.0)
      hi = z;
    else if (f < 0.0)
      lo = z;
    else
      return z;
    const double dp = phi_prime(z);
    double znext = (dp > 0.0) ? z - f / dp : std::numeric_limits<double>::max();
    if (!(znext > lo && znext < hi)) znext = 0.5 * (lo + hi);
    const double step = std::abs(znext - z);
    if (std::abs(f) <= ftol && (step <= ztol || hi - lo <= ztol))
      return znext;
    if (hi - lo <= 1e-15 * std::max(1.0, z)) return 0.5 * (lo + hi);
    z = znext;
  }
  return z;
}

StructuralConstants fit_structural_constants(const Nonlinearity& nl,
                                             double eps, double mu,
                                             int sample_count,
                                             std::optional<double> fixed_m,
                                             double residual_tol) {
  if (!(mu > 0.0 && mu < 1.0)) throw DomainError("mu must lie in (0,1)");
  if (!(eps > 0.0 && eps <= 1.0 - mu))
    throw DomainError("eps must lie in (0, 1-mu]");
  if (sample_count < 16) throw DomainError("need at least 16 samples");

  // Geometric sample of (0, eps] anchored at a fixed floor, so shrinking eps
  // yields a nested sample set and the fitted envelope tightens monotonically.
  // Tabulated kinds are not sampled below their node resolution.
  double z_floor = 1e-4;
  if (nl.kind() == Nonlinearity::Kind::Tabulated)
    z_floor = std::max(z_floor, nl.min_positive_node());
  if (z_floor >= eps) z_floor = eps * 1e-2;
  const int per_decade = std::max(4, sample_count / 4);
  const double rho = std::pow(10.0, 1.0 / per_decade);
  std::vector<double> zs;
  for (double z = z_floor; z <= eps * (1.0 + 1e-12); z *= rho)
    zs.push_back(std::min(z, eps));
  if (zs.back() < eps) zs.push_back(eps);

  StructuralConstants sc;
  sc.eps = eps;
  sc.mu = mu;

  if (fixed_m) {
    sc.m = *fixed_m;
  } else {
    // Slope of log phi' against log z is m-1 for a porous-medium degeneracy.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    std::vector<double> lx, ly;
    for (double z : zs) {
      const double dp = nl.phi_prime(z);
      if (dp <= 0.0) continue;
      const double x = std::log(z), y = std::log(dp);
      lx.push_back(x);
      ly.push_back(y);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n < 8) throw FitError("phi' vanishes on too much of (0, eps]");
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double max_resid = 0.0;
    for (int i = 0; i < n; ++i)
      max_resid = std::max(
          max_resid, std::abs(ly[static_cast<size_t>(i)] -
                              (intercept + slope * lx[static_cast<size_t>(i)])));
    if (max_resid > residual_tol)
      throw FitError("log-log regression residual " + std::to_string(max_resid) +
                     " exceeds tolerance; not porous-medium type near 0");
    sc.m = 1.0 + slope;
  }
  if (!(sc.m > 1.0))
    throw FitError("fitted exponent m = " + std::to_string(sc.m) +
                   " is not > 1");

  double c1 = std::numeric_limits<double>::infinity(), c2 = 0.0;
  for (double z : zs) {
    const double r = nl.phi_prime(z) / std::pow(z, sc.m - 1.0);
    c1 = std::min(c1, r);
    c2 = std::max(c2, r);
  }
  sc.c1 = c1;
  sc.c2 = c2;

  // lambda = min phi' on [eps, 1-mu]; m_cap = max phi' on [0, 1-mu].
  const int nu = 512;
  double lam = std::numeric_limits<double>::infinity(), cap = 0.0;
  const double top = std::min(1.0 - mu, nl.domain_cap());
  for (int i = 0; i <= nu; ++i) {
    const double z = eps + (top - eps) * i / nu;
    if (z < eps) continue;
    lam = std::min(lam, nl.phi_prime(z));
  }
  for (int i = 0; i <= nu; ++i) {
    const double z = top * i / nu;
    cap = std::max(cap, nl.phi_prime(z));
  }
  sc.lambda = lam;
  sc.m_cap = cap;
  return sc;
}

ValidationReport validate_hypotheses(const Nonlinearity& nl,
                                     const StructuralConstants& sc,
                                     int sample_count,
                                     double divergence_threshold) {
  ValidationReport rep;
  const double cap = nl.domain_cap();

  {  // Strict monotonicity on a dense sample of [0, cap].
    CheckResult c{"monotonicity", true,
                  std::numeric_limits<double>::infinity(), ""};
    double prev_z = 0.0, prev_phi = nl.phi(0.0);
    for (int i = 1; i <= sample_count; ++i) {
      const double z = cap * i / sample_count;
      const double p = nl.phi(z);
      const double slack = p - prev_phi;
      if (slack < c.margin) c.margin = slack;
      if (slack <= 0.0 && c.pass) {
        c.pass = false;
        c.detail = "phi non-increasing on [" + std::to_string(prev_z) + ", " +
                   std::to_string(z) + "]";
      }
      prev_phi = p;
      prev_z = z;
    }
    rep.checks.push_back(c);
  }

  // The envelope constants were extremized on the fit's own sample ladder;
  // checking on a different sample needs breathing room for off-sample dips
  // between ladder points. A genuine violation breaks by far more.
  constexpr double kEnvelopeSlack = 1e-4;

  {  // Pointwise two-sided degeneracy bound on (0, eps].
    CheckResult c{"degeneracy_envelope", true,
                  std::numeric_limits<double>::infinity(), ""};
    for (int i = 1; i <= sample_count; ++i) {
      const double z = sc.eps * i / sample_count;
      const double dp = nl.phi_prime(z);
      const double zm = std::pow(z, sc.m - 1.0);
      const double slack = std::min(dp - sc.c1 * zm * (1.0 - kEnvelopeSlack),
                                    sc.c2 * zm * (1.0 + kEnvelopeSlack) - dp);
      if (slack < c.margin) c.margin = slack;
      if (slack < 0.0) c.pass = false;
    }
    rep.checks.push_back(c);
  }

  {  // Integrated bound c1 z^m <= m phi(z) <= c2 z^m on (0, eps].
    CheckResult c{"integrated_envelope", true,
                  std::numeric_limits<double>::infinity(), ""};
    for (int i = 1; i <= sample_count; ++i) {
      const double z = sc.eps * i / sample_count;
      const double mphi = sc.m * nl.phi(z);
      const double zm = std::pow(z, sc.m);
      const double slack = std::min(mphi - sc.c1 * zm * (1.0 - kEnvelopeSlack),
                                    sc.c2 * zm * (1.0 + kEnvelopeSlack) - mphi);
      if (slack < c.margin) c.margin = slack;
      if (slack < 0.0) c.pass = false;
    }
    rep.checks.push_back(c);
  }

  {  // Surjectivity proxy: phi explodes toward the cap.
    CheckResult c{"primitive_blowup", false, 0.0, ""};
    const double top = nl.phi_cap();
    c.margin = top - divergence_threshold;
    c.pass = c.margin > 0.0;
    if (!c.pass)
      c.detail = "phi(domain_cap) = " + std::to_string(top) +
                 " stays below threshold " +
                 std::to_string(divergence_threshold);
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace pmlab
