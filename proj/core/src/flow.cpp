#include "emx/flow.hpp"

#include <cmath>
#include <numbers>

#include "emx/errors.hpp"
#include "emx/spectral.hpp"

namespace emx {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap(double x) {
  x = std::fmod(x, two_pi);
  return x < 0.0 ? x + two_pi : x;
}

// Cubic B-spline basis at offset t in [0,1) for stencil points -1..2.
inline void bspline_weights(double t, double w[4]) {
  const double t2 = t * t, t3 = t2 * t;
  w[0] = (1.0 - 3.0 * t + 3.0 * t2 - t3) / 6.0;
  w[1] = (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0;
  w[2] = (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0;
  w[3] = t3 / 6.0;
}

}  // namespace

PeriodicSpline2D::PeriodicSpline2D(const ScalarField2D& f) : n_(f.n()) {
  inv_h_ = n_ / two_pi;
  // Prefilter: divide by the separable interpolation symbol (2 + cos(k h))/3.
  const double h = f.grid().h();
  ScalarField2D c = apply_multiplier(f, [h](int k1, int k2) -> std::complex<double> {
    const double s1 = (2.0 + std::cos(k1 * h)) / 3.0;
    const double s2 = (2.0 + std::cos(k2 * h)) / 3.0;
    return 1.0 / (s1 * s2);
  });
  auto p = c.phys();
  coeff_.assign(p.begin(), p.end());
}

double PeriodicSpline2D::eval(double x1, double x2) const {
  const double u = wrap(x1) * inv_h_;
  const double v = wrap(x2) * inv_h_;
  int i0 = static_cast<int>(std::floor(u));
  int j0 = static_cast<int>(std::floor(v));
  double w1[4], w2[4];
  bspline_weights(u - i0, w1);
  bspline_weights(v - j0, w2);
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    const int i = (i0 + a - 1 + n_) % n_;
    double row = 0.0;
    for (int b = 0; b < 4; ++b) {
      const int j = (j0 + b - 1 + n_) % n_;
      row += w2[b] * coeff_[static_cast<std::size_t>(i) * n_ + j];
    }
    acc += w1[a] * row;
  }
  return acc;
}

bool FlowMap::is_identity(double tol) const {
  return d_plus.max_abs() <= tol && d_minus.max_abs() <= tol;
}

double FlowMap::roundtrip_deviation() const {
  const FourierGrid& g = grid();
  const int n = g.n();
  PeriodicSpline2D sp1(d_plus.x1), sp2(d_plus.x2);
  auto dm1 = d_minus.x1.phys();
  auto dm2 = d_minus.x2.phys();
  double dev = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      const double y1 = g.x(i) + dm1[idx];
      const double y2 = g.x(j) + dm2[idx];
      // Phi(Phi^{-1}(x)) - x = d_minus(x) + d_plus(Phi^{-1}(x))
      const double r1 = dm1[idx] + sp1.eval(y1, y2);
      const double r2 = dm2[idx] + sp2.eval(y1, y2);
      dev = std::max(dev, std::hypot(r1, r2));
    }
  }
  return dev;
}

double FlowMap::volume_deviation() const {
  ScalarField2D d11 = derivative(d_plus.x1, 1);
  ScalarField2D d12 = derivative(d_plus.x1, 2);
  ScalarField2D d21 = derivative(d_plus.x2, 1);
  ScalarField2D d22 = derivative(d_plus.x2, 2);
  auto a = d11.phys(), b = d12.phys(), c = d21.phys(), d = d22.phys();
  double dev = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    const double det = (1.0 + a[m]) * (1.0 + d[m]) - b[m] * c[m];
    dev = std::max(dev, std::abs(det - 1.0));
  }
  return dev;
}

FlowMap advance_flow(const FlowMap& fm, const VectorField2D& u_begin, const VectorField2D& u_mid,
                     const VectorField2D& u_end, double dt) {
  const FourierGrid& g = fm.grid();
  const int n = g.n();
  FlowMap out(g);
  out.t = fm.t + dt;

  PeriodicSpline2D ub1(u_begin.x1), ub2(u_begin.x2);
  PeriodicSpline2D um1(u_mid.x1), um2(u_mid.x2);
  PeriodicSpline2D ue1(u_end.x1), ue2(u_end.x2);

  // Forward map: RK4 on particle positions p = x + d_plus(x).
  {
    auto dp1 = fm.d_plus.x1.phys();
    auto dp2 = fm.d_plus.x2.phys();
    ScalarField2D o1(g), o2(g);
    auto n1 = o1.phys_mut();
    auto n2 = o2.phys_mut();
    for (int i = 0; i < n; ++i) {
      const double x1 = g.x(i);
      for (int j = 0; j < n; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * n + j;
        const double x2 = g.x(j);
        const double p1 = x1 + dp1[idx], p2 = x2 + dp2[idx];
        const double v11 = ub1.eval(p1, p2), v12 = ub2.eval(p1, p2);
        const double q1 = p1 + 0.5 * dt * v11, q2 = p2 + 0.5 * dt * v12;
        const double v21 = um1.eval(q1, q2), v22 = um2.eval(q1, q2);
        const double r1 = p1 + 0.5 * dt * v21, r2 = p2 + 0.5 * dt * v22;
        const double v31 = um1.eval(r1, r2), v32 = um2.eval(r1, r2);
        const double s1 = p1 + dt * v31, s2 = p2 + dt * v32;
        const double v41 = ue1.eval(s1, s2), v42 = ue2.eval(s1, s2);
        n1[idx] = dp1[idx] + dt / 6.0 * (v11 + 2.0 * v21 + 2.0 * v31 + v41);
        n2[idx] = dp2[idx] + dt / 6.0 * (v12 + 2.0 * v22 + 2.0 * v32 + v42);
      }
    }
    out.d_plus = VectorField2D(std::move(o1), std::move(o2));
  }

  // Backward map: semi-Lagrangian transport of the displacement along
  // departure characteristics ending at the grid nodes.
  {
    PeriodicSpline2D dm1(fm.d_minus.x1), dm2(fm.d_minus.x2);
    ScalarField2D o1(g), o2(g);
    auto n1 = o1.phys_mut();
    auto n2 = o2.phys_mut();
    for (int i = 0; i < n; ++i) {
      const double x1 = g.x(i);
      for (int j = 0; j < n; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * n + j;
        const double x2 = g.x(j);
        // Backward RK2 midpoint for the departure point.
        const double e1 = ue1.eval(x1, x2), e2 = ue2.eval(x1, x2);
        const double m1 = x1 - 0.5 * dt * e1, m2 = x2 - 0.5 * dt * e2;
        const double v1 = um1.eval(m1, m2), v2 = um2.eval(m1, m2);
        const double xd1 = x1 - dt * v1, xd2 = x2 - dt * v2;
        n1[idx] = dm1.eval(xd1, xd2) + (xd1 - x1);
        n2[idx] = dm2.eval(xd1, xd2) + (xd2 - x2);
      }
    }
    out.d_minus = VectorField2D(std::move(o1), std::move(o2));
  }
  return out;
}

FlowMap advance_flow(const FlowMap& fm, const VectorField2D& u_frozen, double dt) {
  return advance_flow(fm, u_frozen, u_frozen, u_frozen, dt);
}

ScalarField2D compose(const ScalarField2D& f, const FlowMap& fm, FlowDirection direction) {
  if (!(f.grid() == fm.grid())) throw std::invalid_argument("compose: grid mismatch");
  const VectorField2D& d = direction == FlowDirection::forward ? fm.d_plus : fm.d_minus;
  const FourierGrid& g = f.grid();
  const int n = g.n();
  PeriodicSpline2D sp(f);
  auto d1 = d.x1.phys();
  auto d2 = d.x2.phys();
  ScalarField2D out(g);
  auto po = out.phys_mut();
  for (int i = 0; i < n; ++i) {
    const double x1 = g.x(i);
    for (int j = 0; j < n; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      po[idx] = sp.eval(x1 + d1[idx], g.x(j) + d2[idx]);
    }
  }
  return out;
}

ScalarField2D riesz_commutator(const ScalarField2D& omega, const FlowMap& fm) {
  return riesz(compose(omega, fm, FlowDirection::forward)) -
         compose(riesz(omega), fm, FlowDirection::forward);
}

double displacement_seminorm(const VectorField2D& d) { return lipschitz_seminorm(d); }

double full_map_seminorm(const VectorField2D& dis) {
  ScalarField2D d11 = derivative(dis.x1, 1);
  ScalarField2D d12 = derivative(dis.x1, 2);
  ScalarField2D d21 = derivative(dis.x2, 1);
  ScalarField2D d22 = derivative(dis.x2, 2);
  auto a = d11.phys(), b = d12.phys(), c = d21.phys(), d = d22.phys();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max({m, std::abs(1.0 + a[i]), std::abs(b[i]), std::abs(c[i]), std::abs(1.0 + d[i])});
  }
  return m;
}

double commutator_ratio(const ScalarField2D& omega, const FlowMap& fm, double p) {
  if (!(p > 1.0) || std::isinf(p))
    throw std::invalid_argument("commutator_ratio: p must lie in (1,inf)");
  const double sf = displacement_seminorm(fm.d_plus);
  const double sb = displacement_seminorm(fm.d_minus);
  const double sem = std::max(sf, sb);
  if (sem < 1e-12) throw DegenerateFlowError("commutator_ratio: flow is the identity");
  const BesovSpec spec{2.0 / p, p, 1.0};
  const double denom = sem * besov_norm(omega, spec);
  return besov_norm(riesz_commutator(omega, fm), spec) / denom;
}

double vishik_ratio(const ScalarField2D& f, const FlowMap& fm) {
  const BesovSpec spec = BesovSpec::B0inf1();
  const double bracket =
      1.0 + std::log(std::max(1.0, full_map_seminorm(fm.d_plus) * full_map_seminorm(fm.d_minus)));
  return besov_norm(compose(f, fm, FlowDirection::forward), spec) /
         (bracket * besov_norm(f, spec));
}

}  // namespace emx
