#include "pmlab/reaction.hpp"

#include <algorithm>
#include <cmath>

namespace pmlab {

ReactionTerm ReactionTerm::zero() { return ReactionTerm(); }

ReactionTerm ReactionTerm::linear_in_u(SpaceTimeFn g, double G) {
  if (!(G >= 0.0)) throw DomainError("bound on |g| must be non-negative");
  ReactionTerm rt;
  rt.kind_ = Kind::LinearInU;
  rt.g_ = std::move(g);
  rt.G_ = G;
  rt.bound_L_ = G;  // |g z| <= G for z < 1
  rt.m0_ = 0.0;
  return rt;
}

ReactionTerm ReactionTerm::monod_biomass(double K2, double K3, double K4) {
  if (!(K2 >= 0.0 && K3 >= 0.0)) throw DomainError("K2, K3 must be >= 0");
  if (!(K4 > 0.0)) throw DomainError("K4 must be > 0");
  ReactionTerm rt;
  rt.kind_ = Kind::MonodBiomass;
  rt.K2_ = K2;
  rt.K3_ = K3;
  rt.K4_ = K4;
  // |-K2 M + K3 C M/(K4+C)| <= (K2 + K3) for M < 1 and the Monod factor < 1.
  rt.bound_L_ = K2 + K3;
  rt.m0_ = 0.0;
  return rt;
}

ReactionTerm ReactionTerm::porous_fisher(double p, double q, double c) {
  if (!(q >= 0.0)) throw DomainError("porous-Fisher requires q >= 0");
  ReactionTerm rt;
  rt.kind_ = Kind::PorousFisher;
  rt.p_ = p;
  rt.q_ = q;
  rt.c_ = c;
  rt.m0_ = std::max(0.0, -p);
  rt.bound_L_ = 1.0 + std::abs(c);
  return rt;
}

ReactionTerm ReactionTerm::singular_power(double coeff, double m0) {
  if (!(coeff >= 0.0)) throw DomainError("singular power coefficient must be >= 0");
  if (!(m0 >= 0.0)) throw DomainError("m0 must be >= 0");
  ReactionTerm rt;
  rt.kind_ = Kind::SingularPower;
  rt.coeff_ = coeff;
  rt.m0_ = m0;
  rt.bound_L_ = coeff;
  return rt;
}

ReactionTerm& ReactionTerm::declare_bound(double L, double m0) {
  if (!(L >= 0.0 && m0 >= 0.0)) throw DomainError("need L >= 0 and m0 >= 0");
  bound_L_ = L;
  m0_ = m0;
  return *this;
}

double ReactionTerm::eval(const Point& x, double t, double z) const {
  if (z >= 1.0) throw DomainError("reaction evaluated at z >= 1");
  if (z < 0.0) throw DomainError("reaction evaluated at z < 0");
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::LinearInU:
      return g_(x, t) * z;
    case Kind::MonodBiomass: {
      double C = 1.0;
      if (coupled_) {
        const Grid& g = coupled_->grid;
        int i = static_cast<int>((x[0] - g.lo[0]) / g.h(0));
        i = std::clamp(i, 0, g.cells[0] - 1);
        int j = 0;
        if (g.dim == 2) {
          j = static_cast<int>((x[1] - g.lo[1]) / g.h(1));
          j = std::clamp(j, 0, g.cells[1] - 1);
        }
        C = (*coupled_)[g.index(i, j)];
      }
      return -K2_ * z + K3_ * C * z / (K4_ + C);
    }
    case Kind::PorousFisher: {
      const double zz = (p_ < 0.0) ? std::max(z, z_floor_) : z;
      return std::pow(zz, p_) * std::pow(1.0 - z, q_) + c_;
    }
    case Kind::SingularPower: {
      const double zz = (m0_ > 0.0) ? std::max(z, z_floor_) : z;
      return coeff_ * std::pow(zz, -m0_);
    }
  }
  return 0.0;
}

GrowthBoundReport validate_growth_bound(const ReactionTerm& rt,
                                        const StructuralConstants& sc,
                                        int sample_count, const Point& x_lo,
                                        const Point& x_hi, double t_max) {
  if (sample_count < 64) throw DomainError("need at least 64 samples");
  if (!(rt.exponent_m0() < sc.m))
    throw DomainError("growth bound requires m0 in [0, m)");

  GrowthBoundReport rep;
  rep.declared_L = rt.bound_L();
  rep.exponent_m0 = rt.exponent_m0();
  rep.sample_count = sample_count;

  const double z_min = 1e-6, z_max = 1.0 - 1e-6;
  const double ratio = std::pow(z_max / z_min, 1.0 / (sample_count - 1));
  const int nxt = 8;  // deterministic lattice over (x, t)
  double minimal = 0.0;
  for (int i = 0; i < sample_count; ++i) {
    const double z = z_min * std::pow(ratio, i);
    for (int ix = 0; ix < nxt; ++ix) {
      for (int it = 0; it < nxt; ++it) {
        Point x{x_lo[0] + (x_hi[0] - x_lo[0]) * (ix + 0.5) / nxt,
                x_lo[1] + (x_hi[1] - x_lo[1]) * (ix + 0.5) / nxt};
        const double t = t_max * (it + 0.5) / nxt;
        const double f = rt.eval(x, t, z);
        minimal = std::max(minimal,
                           std::abs(f) * std::pow(z, rep.exponent_m0));
      }
    }
  }
  rep.minimal_L = minimal;
  rep.pass = minimal <= rep.declared_L * (1.0 + 1e-12);
  return rep;
}

}  // namespace pmlab
