#include "emx/integrators.hpp"

#include <cmath>
#include <stdexcept>

#include "emx/errors.hpp"

namespace emx {

Scheme scheme_from_string(const std::string& s) {
  if (s == "rk4") return Scheme::rk4;
  if (s == "ifrk4") return Scheme::ifrk4;
  throw ConfigError("unknown scheme: " + s);
}

const char* to_string(Scheme s) { return s == Scheme::rk4 ? "rk4" : "ifrk4"; }

void StepperConfig::validate() const {
  if (dt < 0.0) throw ConfigError("dt must be >= 0");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must lie in (0,1]");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
}

namespace {

// cosh(sqrt(z)) and sinh(sqrt(z))/sqrt(z), stable through z = 0 and z < 0.
void cosh_sinhc(double z, double& c, double& s) {
  if (std::abs(z) < 1e-8) {
    c = 1.0 + z / 2.0 + z * z / 24.0;
    s = 1.0 + z / 6.0 + z * z / 120.0;
  } else if (z > 0.0) {
    const double q = std::sqrt(z);
    c = std::cosh(q);
    s = std::sinh(q) / q;
  } else {
    const double q = std::sqrt(-z);
    c = std::cos(q);
    s = std::sin(q) / q;
  }
}

}  // namespace

Mat2 maxwell_mode_exponential(double c, double kk, double dt) {
  // exp(dt M) = e^{m dt} ( C I + dt S (M - m I) ), m = tr/2, with
  // C = cosh(q dt), S = sinh(q dt)/(q dt), q^2 = m^2 - det.
  const double m = -0.5 * c * c;
  const double det = c * c * kk;
  const double disc = m * m - det;
  // Relative threshold 1e-8 switches to the confluent series.
  const double scale = m * m + std::abs(det);
  const double z = (scale > 0.0 && std::abs(disc) <= 1e-8 * scale) ? 0.0 : disc * dt * dt;
  double C, S;
  cosh_sinhc(z, C, S);
  const double em = std::exp(m * dt);
  // M - mI = [[-c^2 - m, -c kk],[c, -m]]
  Mat2 r;
  r[0] = em * (C + dt * S * (-c * c - m));
  r[1] = em * (dt * S * (-c * kk));
  r[2] = em * (dt * S * c);
  r[3] = em * (C + dt * S * (-m));
  return r;
}

MaxwellModeExponentials::MaxwellModeExponentials(const FourierGrid& grid, double c, double dt_in)
    : dt(dt_in) {
  if (!(c > 0.0) || dt < 0.0)
    throw std::invalid_argument("mode exponentials require c > 0, dt >= 0");
  const int n = grid.n();
  const int cols = grid.spec_cols();
  mats.resize(grid.size_spec());
  for (int i = 0; i < n; ++i) {
    const double k1 = grid.k1(i);
    for (int j = 0; j < cols; ++j) {
      const double k2 = grid.k2(j);
      mats[static_cast<std::size_t>(i) * cols + j] =
          maxwell_mode_exponential(c, k1 * k1 + k2 * k2, dt);
    }
  }
}

void apply_maxwell_exponential(const MaxwellModeExponentials& table, ScalarField2D& E,
                               ScalarField2D& a) {
  auto se = E.spec_mut();
  auto sa = a.spec_mut();
  for (std::size_t m = 0; m < se.size(); ++m) {
    const Mat2& M = table.mats[m];
    const auto e0 = se[m], a0 = sa[m];
    se[m] = M[0] * e0 + M[1] * a0;
    sa[m] = M[2] * e0 + M[3] * a0;
  }
}

double stable_dt(const VectorField2D& u, const Params& params, const StepperConfig& config,
                 Scheme scheme) {
  const double h = u.grid().h();
  const double umax = u.max_abs();
  double dt = config.dt_cap;
  if (umax > 1e-14) dt = std::min(dt, h / umax);
  if (scheme == Scheme::rk4) {
    const double kmax = u.grid().nyquist();
    dt = std::min(dt, 2.8 / (params.c * kmax));
    dt = std::min(dt, 2.8 / (params.c * params.c));
  }
  return config.cfl * dt;
}

namespace {

void axpy(PerturbationState& y, double a, const PerturbationState& x) {
  y.omega += a * x.omega;
  y.E += a * x.E;
  y.a += a * x.a;
}

void axpy(NormalState& y, double a, const NormalState& x) {
  y.omega += a * x.omega;
  y.E1 += a * x.E1;
  y.E2 += a * x.E2;
  y.b3 += a * x.b3;
}

void axpy(ScalarField2D& y, double a, const ScalarField2D& x) { y += a * x; }

}  // namespace

// Lawson integrating-factor RK4: with phi(s) = exp(sL),
//   k1 = N(y)
//   k2 = N(E2 y + h/2 E2 k1)
//   k3 = N(E2 y + h/2 k2)
//   k4 = N(E1 y + h E2 k3)
//   y+ = E1 y + h/6 (E1 k1 + 2 E2 (k2 + k3) + k4)
// where E1 = phi(h), E2 = phi(h/2). Reduces to the exact map when N = 0 and
// to classical RK4 when L = 0.
template <class State, class NFun, class EFullFun, class EHalfFun>
State lawson_rk4(const State& y, double h, NFun N, EFullFun apply_full, EHalfFun apply_half) {
  State k1 = N(y);

  State y2 = y;
  apply_half(y2);
  State k1h = k1;
  apply_half(k1h);

  State s2 = y2;
  axpy(s2, h / 2.0, k1h);
  State k2 = N(s2);

  State s3 = y2;
  axpy(s3, h / 2.0, k2);
  State k3 = N(s3);

  State y1 = y;
  apply_full(y1);
  State k3h = k3;
  apply_half(k3h);
  State s4 = y1;
  axpy(s4, h, k3h);
  State k4 = N(s4);

  State k1f = k1;
  apply_full(k1f);
  State k2h = k2;
  apply_half(k2h);
  State k3hh = k3;
  apply_half(k3hh);

  State out = y1;
  axpy(out, h / 6.0, k1f);
  axpy(out, h / 3.0, k2h);
  axpy(out, h / 3.0, k3hh);
  axpy(out, h / 6.0, k4);
  return out;
}

template <class State, class NFun>
State plain_rk4(const State& y, double h, NFun N) {
  State k1 = N(y);
  State s2 = y;
  axpy(s2, h / 2.0, k1);
  State k2 = N(s2);
  State s3 = y;
  axpy(s3, h / 2.0, k2);
  State k3 = N(s3);
  State s4 = y;
  axpy(s4, h, k3);
  State k4 = N(s4);
  State out = y;
  axpy(out, h / 6.0, k1);
  axpy(out, h / 3.0, k2);
  axpy(out, h / 3.0, k3);
  axpy(out, h / 6.0, k4);
  return out;
}

PerturbationStepper::PerturbationStepper(const FourierGrid& grid, const Params& params,
                                         const StepperConfig& config)
    : params_(params), config_(config), grid_(grid) {
  config_.validate();
}

void PerturbationStepper::ensure_tables(double dt) {
  if (!full_ || full_->dt != dt) {
    full_ = std::make_unique<MaxwellModeExponentials>(grid_, params_.c, dt);
    half_ = std::make_unique<MaxwellModeExponentials>(grid_, params_.c, dt / 2.0);
  }
}

double PerturbationStepper::stable_dt(const PerturbationState& state) const {
  return emx::stable_dt(state.velocity(), params_, config_, config_.scheme);
}

void PerturbationStepper::step(PerturbationState& state, double t, double dt) {
  if (config_.scheme == Scheme::rk4) {
    state = plain_rk4(state, dt,
                      [this](const PerturbationState& s) { return rhs_perturbation(s, params_); });
  } else {
    ensure_tables(dt);
    auto N = [this](const PerturbationState& s) {
      return rhs_perturbation_nonlinear(s, params_);
    };
    auto ef = [this](PerturbationState& s) { apply_maxwell_exponential(*full_, s.E, s.a); };
    auto eh = [this](PerturbationState& s) { apply_maxwell_exponential(*half_, s.E, s.a); };
    state = lawson_rk4(state, dt, N, ef, eh);
  }
  state.project_means();
  if (state.omega.max_abs() > config_.blowup_guard)
    throw BlowupDetected("vorticity exceeded blowup guard at t=" + std::to_string(t + dt), t + dt);
}

NormalStepper::NormalStepper(const FourierGrid& grid, const Params& params,
                             const StepperConfig& config)
    : params_(params), config_(config), grid_(grid) {
  config_.validate();
}

std::vector<NormalStepper::Mat3c> NormalStepper::build(double dt) const {
  // Linear block per mode on (E1,E2,b3):
  //   dE1 = -sigma c^2 E1 + c (i k2) b3
  //   dE2 = -sigma c^2 E2 - c (i k1) b3
  //   db3 =  c (i k2) E1 - c (i k1) E2
  // Exponential via scaling-and-squaring on a Taylor series.
  const double c = params_.c, s = params_.sigma;
  const int n = grid_.n();
  const int cols = grid_.spec_cols();
  std::vector<Mat3c> out(grid_.size_spec());
  for (int i = 0; i < n; ++i) {
    const double k1 = grid_.k1(i);
    for (int j = 0; j < cols; ++j) {
      const double k2 = grid_.k2(j);
      const std::complex<double> I(0.0, 1.0);
      Mat3c A{-s * c * c, 0.0,         c * I * k2,
              0.0,        -s * c * c,  -c * I * k1,
              c * I * k2, -c * I * k1, 0.0};
      // scale so ||A dt / 2^m|| is small, Taylor to order 12, square back
      double norm = 0.0;
      for (auto& v : A) norm += std::abs(v);
      int mscale = 0;
      double target = norm * dt;
      while (target > 0.5) {
        target /= 2.0;
        ++mscale;
      }
      const double h = dt / std::ldexp(1.0, mscale);
      Mat3c R{1, 0, 0, 0, 1, 0, 0, 0, 1};
      Mat3c term = R;
      auto matmul = [](const Mat3c& a, const Mat3c& b) {
        Mat3c r{};
        for (int r_ = 0; r_ < 3; ++r_)
          for (int c_ = 0; c_ < 3; ++c_)
            for (int k_ = 0; k_ < 3; ++k_) r[r_ * 3 + c_] += a[r_ * 3 + k_] * b[k_ * 3 + c_];
        return r;
      };
      Mat3c Ah = A;
      for (auto& v : Ah) v *= h;
      for (int order = 1; order <= 12; ++order) {
        term = matmul(term, Ah);
        for (auto& v : term) v /= double(order);
        for (int m2 = 0; m2 < 9; ++m2) R[m2] += term[m2];
      }
      for (int sq = 0; sq < mscale; ++sq) R = matmul(R, R);
      out[static_cast<std::size_t>(i) * cols + j] = R;
    }
  }
  return out;
}

void NormalStepper::ensure_tables(double dt) {
  if (table_dt_ != dt) {
    full_ = build(dt);
    half_ = build(dt / 2.0);
    table_dt_ = dt;
  }
}

void NormalStepper::apply(const std::vector<Mat3c>& table, NormalState& st) const {
  auto e1 = st.E1.spec_mut();
  auto e2 = st.E2.spec_mut();
  auto b3 = st.b3.spec_mut();
  for (std::size_t m = 0; m < e1.size(); ++m) {
    const Mat3c& M = table[m];
    const auto a = e1[m], b = e2[m], g = b3[m];
    e1[m] = M[0] * a + M[1] * b + M[2] * g;
    e2[m] = M[3] * a + M[4] * b + M[5] * g;
    b3[m] = M[6] * a + M[7] * b + M[8] * g;
  }
}

double NormalStepper::stable_dt(const NormalState& state) const {
  return emx::stable_dt(state.velocity(), params_, config_, config_.scheme);
}

void NormalStepper::step(NormalState& state, double t, double dt) {
  if (config_.scheme == Scheme::rk4) {
    state =
        plain_rk4(state, dt, [this](const NormalState& s) { return rhs_normal(s, params_); });
  } else {
    ensure_tables(dt);
    auto N = [this](const NormalState& s) { return rhs_normal_nonlinear(s, params_); };
    auto ef = [this](NormalState& s) { apply(full_, s); };
    auto eh = [this](NormalState& s) { apply(half_, s); };
    state = lawson_rk4(state, dt, N, ef, eh);
  }
  state.omega.project_mean_zero();
  if (state.omega.max_abs() > config_.blowup_guard)
    throw BlowupDetected("vorticity exceeded blowup guard at t=" + std::to_string(t + dt), t + dt);
}

EulerRieszStepper::EulerRieszStepper(const FourierGrid& grid, const Params& params,
                                     const StepperConfig& config)
    : params_(params), config_(config), grid_(grid) {
  config_.validate();
  params_.validate();
  const int n = grid.n();
  const int cols = grid.spec_cols();
  symbol_.resize(grid.size_spec());
  const double b2 = params.beta * params.beta;
  const double ab = params.alpha * params.alpha + b2;
  for (int i = 0; i < n; ++i) {
    const double k1 = grid.k1(i);
    for (int j = 0; j < cols; ++j) {
      const double k2 = grid.k2(j);
      const double kk = k1 * k1 + k2 * k2;
      symbol_[static_cast<std::size_t>(i) * cols + j] =
          b2 - (kk == 0.0 ? 0.0 : ab * k1 * k1 / kk);
    }
  }
}

double EulerRieszStepper::stable_dt(const ScalarField2D& omega) const {
  return emx::stable_dt(biot_savart(omega), params_, config_, config_.scheme);
}

void EulerRieszStepper::step(ScalarField2D& omega, double t, double dt) {
  if (config_.scheme == Scheme::rk4) {
    omega = plain_rk4(omega, dt,
                      [this](const ScalarField2D& w) { return rhs_euler_riesz(w, params_); });
  } else {
    auto N = [this](const ScalarField2D& w) { return rhs_euler_riesz_nonlinear(w, params_); };
    auto make_apply = [this](double s) {
      return [this, s](ScalarField2D& w) {
        auto sw = w.spec_mut();
        for (std::size_t m = 0; m < sw.size(); ++m) sw[m] *= std::exp(s * symbol_[m]);
      };
    };
    omega = lawson_rk4(omega, dt, N, make_apply(dt), make_apply(dt / 2.0));
  }
  omega.project_mean_zero();
  if (omega.max_abs() > config_.blowup_guard)
    throw BlowupDetected("vorticity exceeded blowup guard at t=" + std::to_string(t + dt), t + dt);
}

}  // namespace emx
