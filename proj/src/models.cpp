#include "lapmor/models.hpp"

#include <array>
#include <cmath>
#include <iostream>

#include <Eigen/SparseLU>

#include "lapmor/errors.hpp"

namespace lapmor {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SpMat from_triplets(Index n, const Triplets& t) {
  SpMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(0.0);
  m.makeCompressed();
  return m;
}

CVec unit_scaled(Index n, Index k, double value) {
  CVec v = CVec::Zero(n);
  v[k] = value;
  return v;
}

}  // namespace

DiscretizedModel black_scholes(Index n_h, double s_max, double strike) {
  if (n_h < 3) throw ConfigError("black_scholes: need at least 3 unknowns");
  const double ds = s_max / static_cast<double>(n_h + 1);
  Triplets diff, drift;
  for (Index i = 0; i < n_h; ++i) {
    const double s = ds * static_cast<double>(i + 1);
    const double d = 0.5 * s * s / (ds * ds);
    const double c = s / (2.0 * ds);
    diff.emplace_back(i, i, -2.0 * d);
    drift.emplace_back(i, i, -1.0);
    if (i > 0) {
      diff.emplace_back(i, i - 1, d);
      drift.emplace_back(i, i - 1, -c);
    }
    if (i + 1 < n_h) {
      diff.emplace_back(i, i + 1, d);
      drift.emplace_back(i, i + 1, c);
    }
  }
  // Right Dirichlet value u(s_max) = s_max − K e^{−rτ} enters the last row
  // through the neighbour weights of both terms.
  const double s_last = ds * static_cast<double>(n_h);
  const double w_diff = 0.5 * s_last * s_last / (ds * ds);
  const double w_drift = s_last / (2.0 * ds);

  auto sig2 = [](const Parameter& mu) { return mu[0] * mu[0]; };
  auto rate = [](const Parameter& mu) { return mu[1]; };
  std::vector<OperatorTerm> terms;
  terms.push_back({"diffusion", sig2, from_triplets(n_h, diff),
                   [](const Parameter& mu) { return Vec((Vec(2) << 2.0 * mu[0], 0.0).finished()); }});
  terms.push_back({"drift", rate, from_triplets(n_h, drift),
                   [](const Parameter&) { return Vec((Vec(2) << 0.0, 1.0).finished()); }});
  AffineOperator op(2, std::move(terms));

  ZCoefficientFn inv_z = [](Complex z, const Parameter&) { return 1.0 / z; };
  ZCoefficientFn inv_zr = [](Complex z, const Parameter& mu) { return 1.0 / (z + mu[1]); };
  TimeCoefficientFn one = [](double, const Parameter&) { return 1.0; };
  TimeCoefficientFn disc = [](double t, const Parameter& mu) { return std::exp(-mu[1] * t); };
  const Index last = n_h - 1;
  std::vector<SourceTerm> src;
  src.push_back({"boundary_diffusion_spot", sig2, inv_z, unit_scaled(n_h, last, w_diff * s_max), one});
  src.push_back({"boundary_diffusion_strike", sig2, inv_zr, unit_scaled(n_h, last, -w_diff * strike), disc});
  src.push_back({"boundary_drift_spot", rate, inv_z, unit_scaled(n_h, last, w_drift * s_max), one});
  src.push_back({"boundary_drift_strike", rate, inv_zr, unit_scaled(n_h, last, -w_drift * strike), disc});
  std::vector<PoleFn> poles = {[](const Parameter&) { return Complex(0.0); },
                               [](const Parameter& mu) { return Complex(-mu[1]); }};
  AffineSource source(n_h, 2, std::move(src), std::move(poles));

  Vec payoff(n_h);
  for (Index i = 0; i < n_h; ++i) payoff[i] = std::max(0.0, ds * static_cast<double>(i + 1) - strike);
  std::vector<InitialTerm> init = {{"payoff", [](const Parameter&) { return 1.0; }, payoff}};

  MeshInfo mesh{1, {0.0}, {s_max}, {ds}, {n_h}};
  ParameterBox box((Vec(2) << 0.05, 0.001).finished(), (Vec(2) << 0.25, 0.02).finished());
  return DiscretizedModel("black-scholes", std::move(op), std::move(source), std::move(init),
                          std::move(mesh), std::move(box));
}

ParameterBox heston_box(const std::vector<int>& active) {
  static const std::array<double, 5> lo = {0.18, 0.001, 1.2, 0.08, 0.21};
  static const std::array<double, 5> hi = {0.4, 0.2, 3.0, 0.15, 0.9};
  Vec l(static_cast<Index>(active.size())), u(static_cast<Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) {
    l[static_cast<Index>(k)] = lo.at(static_cast<std::size_t>(active[k]));
    u[static_cast<Index>(k)] = hi.at(static_cast<std::size_t>(active[k]));
  }
  return ParameterBox(l, u);
}

namespace {

struct HestonLayout {
  Index n_s, n_v;
  double ds, dv;
  Index idx(Index i, Index j) const { return (i - 1) + n_s * j; }
};

// One stencil contribution w·u(i', j') to `row`, with boundary values routed
// into `bnd` (later scaled by the boundary time function).
struct StencilSink {
  const HestonLayout& g;
  Triplets& mat;
  Vec& bnd;
  void add(Index row, Index i, Index j, double w) const {
    if (w == 0.0) return;
    if (j == g.n_v) {  // u(s, V) = s·g(τ)
      bnd[row] += w * g.ds * static_cast<double>(i);
      return;
    }
    if (i == 0) return;  // u(0, v) = 0
    if (i == g.n_s + 1) {  // ghost from ∂u/∂s(S, v) = g(τ)
      mat.emplace_back(row, g.idx(g.n_s - 1, j), w);
      bnd[row] += w * 2.0 * g.ds;
      return;
    }
    mat.emplace_back(row, g.idx(i, j), w);
  }
};

Vec full_heston_mu(const HestonOptions& o, const Parameter& mu) {
  Vec f = o.reference;
  for (std::size_t k = 0; k < o.active.size(); ++k) f[o.active[k]] = mu[static_cast<Index>(k)];
  return f;
}

}  // namespace

bool heston_feller_holds(const HestonOptions& opts) {
  const ParameterBox box = opts.box.dim() > 0 ? opts.box : heston_box(opts.active);
  for (const auto& c : box.corners()) {
    const Vec f = full_heston_mu(opts, c);
    if (!(2.0 * f[2] * f[3] > f[0] * f[0])) return false;
  }
  return true;
}

DiscretizedModel heston(const HestonOptions& o) {
  if (o.n_s < 3 || o.n_v < 3) throw ConfigError("heston: need at least 3 points per direction");
  if (o.active.empty()) throw ConfigError("heston: no active parameters");
  for (int a : o.active)
    if (a < 0 || a > 4) throw ConfigError("heston: active index out of range");
  const HestonLayout g{o.n_s, o.n_v, o.s_max / static_cast<double>(o.n_s),
                       o.v_max / static_cast<double>(o.n_v)};
  const Index n = o.n_s * o.n_v;
  constexpr int kTerms = 7;
  std::array<Triplets, kTerms> mats;
  std::array<Vec, kTerms> bnds;
  for (auto& b : bnds) b = Vec::Zero(n);
  enum { SS, SV, VV, S1, VC, VL, ID };
  auto sink = [&](int t) { return StencilSink{g, mats[t], bnds[t]}; };

  const double ds = g.ds, dv = g.dv;
  for (Index j = 0; j < o.n_v; ++j) {
    const double v = dv * static_cast<double>(j);
    for (Index i = 1; i <= o.n_s; ++i) {
      const double s = ds * static_cast<double>(i);
      const Index row = g.idx(i, j);
      if (j > 0) {
        const double a = 0.5 * s * s * v / (ds * ds);
        sink(SS).add(row, i - 1, j, a);
        sink(SS).add(row, i, j, -2.0 * a);
        sink(SS).add(row, i + 1, j, a);
        const double x = s * v / (4.0 * ds * dv);
        sink(SV).add(row, i + 1, j + 1, x);
        sink(SV).add(row, i + 1, j - 1, -x);
        sink(SV).add(row, i - 1, j + 1, -x);
        sink(SV).add(row, i - 1, j - 1, x);
        const double b = 0.5 * v / (dv * dv);
        sink(VV).add(row, i, j - 1, b);
        sink(VV).add(row, i, j, -2.0 * b);
        sink(VV).add(row, i, j + 1, b);
        const double c = 1.0 / (2.0 * dv);
        sink(VC).add(row, i, j + 1, c);
        sink(VC).add(row, i, j - 1, -c);
        sink(VL).add(row, i, j + 1, -v * c);
        sink(VL).add(row, i, j - 1, v * c);
      } else {
        // v = 0: only the convection in v survives, one-sided second order.
        const double c = 1.0 / (2.0 * dv);
        sink(VC).add(row, i, 0, -3.0 * c);
        sink(VC).add(row, i, 1, 4.0 * c);
        sink(VC).add(row, i, 2, -c);
      }
      const double d = s / (2.0 * ds);
      sink(S1).add(row, i + 1, j, d);
      sink(S1).add(row, i - 1, j, -d);
      sink(ID).add(row, i, j, -1.0);
    }
  }

  const HestonOptions opts = o;
  const auto p = static_cast<Index>(o.active.size());
  auto coef = [opts](auto f) {
    return [opts, f](const Parameter& mu) { return f(full_heston_mu(opts, mu)); };
  };
  // Gradients are formed in full coordinates, then restricted to the active ones.
  auto grad = [opts, p](auto f) {
    return [opts, p, f](const Parameter& mu) {
      const Vec full = f(full_heston_mu(opts, mu));
      Vec out(p);
      for (Index k = 0; k < p; ++k) out[k] = full[opts.active[static_cast<std::size_t>(k)]];
      return out;
    };
  };
  auto e = [](int k, double w) {
    Vec v = Vec::Zero(5);
    v[k] = w;
    return v;
  };
  const double r_f = o.r_f;
  std::array<ScalarFn, kTerms> cf = {
      coef([](const Vec&) { return 1.0; }),
      coef([](const Vec& f) { return f[4] * f[0]; }),
      coef([](const Vec& f) { return f[0] * f[0]; }),
      coef([r_f](const Vec& f) { return f[1] - r_f; }),
      coef([](const Vec& f) { return f[2] * f[3]; }),
      coef([](const Vec& f) { return f[2]; }),
      coef([](const Vec& f) { return f[1]; }),
  };
  std::array<GradientFn, kTerms> gf = {
      grad([](const Vec&) { return Vec(Vec::Zero(5)); }),
      grad([e](const Vec& f) { return Vec(e(0, f[4]) + e(4, f[0])); }),
      grad([e](const Vec& f) { return e(0, 2.0 * f[0]); }),
      grad([e](const Vec&) { return e(1, 1.0); }),
      grad([e](const Vec& f) { return Vec(e(2, f[3]) + e(3, f[2])); }),
      grad([e](const Vec&) { return e(2, 1.0); }),
      grad([e](const Vec&) { return e(1, 1.0); }),
  };
  static const std::array<const char*, kTerms> names = {"s2v_dss", "sv_dsv", "v_dvv", "s_ds",
                                                       "dv",      "v_dv",   "identity"};
  std::vector<OperatorTerm> terms;
  std::vector<SourceTerm> src;
  ZCoefficientFn zc = [r_f](Complex z, const Parameter&) { return 1.0 / (z + r_f); };
  TimeCoefficientFn tc = [r_f](double t, const Parameter&) { return std::exp(-r_f * t); };
  for (int t = 0; t < kTerms; ++t) {
    terms.push_back({names[t], cf[t], from_triplets(n, mats[t]), gf[t]});
    if (bnds[t].cwiseAbs().maxCoeff() > 0.0)
      src.push_back({std::string("boundary_") + names[t], cf[t], zc, bnds[t].cast<Complex>(), tc});
  }
  AffineOperator op(p, std::move(terms));
  AffineSource source(n, p, std::move(src), {[r_f](const Parameter&) { return Complex(-r_f); }});

  Vec payoff(n);
  for (Index j = 0; j < o.n_v; ++j)
    for (Index i = 1; i <= o.n_s; ++i)
      payoff[g.idx(i, j)] = std::max(0.0, ds * static_cast<double>(i) - o.strike);
  std::vector<InitialTerm> init = {{"payoff", [](const Parameter&) { return 1.0; }, payoff}};

  MeshInfo mesh{2, {0.0, 0.0}, {o.s_max, o.v_max}, {ds, dv}, {o.n_s, o.n_v}};
  ParameterBox box = o.box.dim() > 0 ? o.box : heston_box(o.active);
  if (!heston_feller_holds(o))
    std::cerr << "warning: Feller condition 2*kappa*eta > sigma^2 fails somewhere in the box\n";
  DiscretizedModel model("heston", std::move(op), std::move(source), std::move(init),
                         std::move(mesh), std::move(box));
  Parameter ref(p);
  for (Index k = 0; k < p; ++k) ref[k] = o.reference[o.active[static_cast<std::size_t>(k)]];
  if (model.box().contains(ref)) model.reference_mu = ref;
  return model;
}

DiscretizedModel heston(Index n_s, Index n_v, double strike, double s_max, double v_max) {
  HestonOptions o;
  o.n_s = n_s;
  o.n_v = n_v;
  o.strike = strike;
  o.s_max = s_max;
  o.v_max = v_max;
  return heston(o);
}

DiscretizedModel advection(Index n_h) {
  if (n_h < 2) throw ConfigError("advection: need at least 2 unknowns");
  const double dx = 1.0 / static_cast<double>(n_h);
  Triplets u;
  for (Index i = 0; i < n_h; ++i) {
    u.emplace_back(i, i, 1.0 / dx);
    if (i > 0) u.emplace_back(i, i - 1, -1.0 / dx);
  }
  std::vector<OperatorTerm> terms;
  terms.push_back({"upwind", [](const Parameter& mu) { return -mu[0]; }, from_triplets(n_h, u),
                   [](const Parameter&) { return Vec(Vec::Constant(1, -1.0)); }});
  AffineOperator op(1, std::move(terms));
  AffineSource source(n_h, 1, {});
  Vec u0(n_h);
  for (Index i = 0; i < n_h; ++i) u0[i] = dx * static_cast<double>(i + 1) >= 0.2 - 1e-12 ? 1.0 : 0.0;
  std::vector<InitialTerm> init = {{"step", [](const Parameter&) { return 1.0; }, u0}};
  MeshInfo mesh{1, {0.0}, {1.0}, {dx}, {n_h}};
  ParameterBox box(Vec::Constant(1, 0.1), Vec::Constant(1, 1.0));
  DiscretizedModel model("advection", std::move(op), std::move(source), std::move(init),
                         std::move(mesh), std::move(box));
  // The upwind spectrum is a single defective eigenvalue; the transform is
  // large along the default narrow parabola, so a wide one is used instead.
  model.contour_hint = ContourHint{-16.0, 10.0, 3.0, 256};
  return model;
}

std::string to_string(Stepper s) {
  switch (s) {
    case Stepper::CrankNicolson: return "crank-nicolson";
    case Stepper::BackwardEuler: return "backward-euler";
    case Stepper::ForwardEuler: return "forward-euler";
  }
  return "?";
}

Stepper stepper_from_string(const std::string& s) {
  if (s == "crank-nicolson" || s == "cn") return Stepper::CrankNicolson;
  if (s == "backward-euler" || s == "be") return Stepper::BackwardEuler;
  if (s == "forward-euler" || s == "fe") return Stepper::ForwardEuler;
  throw ConfigError("unknown stepper '" + s + "'");
}

Trajectory step_reference(const DiscretizedModel& model, const Parameter& mu, Stepper stepper,
                          double dt, double t_end, Index stride) {
  if (!(dt > 0.0)) throw ConfigError("step_reference: dt must be positive");
  if (!(t_end >= 0.0)) throw ConfigError("step_reference: t_end must be nonnegative");
  if (stride < 1) throw ConfigError("step_reference: stride must be positive");
  const auto steps = static_cast<Index>(std::llround(t_end / dt));
  if (std::abs(static_cast<double>(steps) * dt - t_end) > 1e-9 * std::max(1.0, t_end))
    throw ConfigError("step_reference: t_end is not a multiple of dt");

  const SpMat a = assemble_operator(model.op(), mu);
  const Index n = a.rows();
  SpMat eye(n, n);
  eye.setIdentity();
  Eigen::SparseLU<SpMat> lu;
  if (stepper != Stepper::ForwardEuler) {
    const double w = stepper == Stepper::CrankNicolson ? 0.5 * dt : dt;
    SpMat m = eye - w * a;
    m.makeCompressed();
    lu.compute(m);
    if (lu.info() != Eigen::Success) throw SingularStepError("step_reference: factorization failed");
  }

  const Index kept = steps / stride + (steps % stride != 0 ? 1 : 0) + 1;
  Trajectory traj;
  traj.stepper = stepper;
  traj.dt = dt;
  traj.times.resize(kept);
  traj.states.resize(n, kept);
  Vec u = model.initial_value(mu);
  traj.times[0] = 0.0;
  traj.states.col(0) = u;
  Index col = 1;
  const bool src = model.has_source();
  for (Index k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    Vec rhs;
    switch (stepper) {
      case Stepper::CrankNicolson:
        rhs = u + 0.5 * dt * (a * u);
        if (src) rhs += dt * model.source_at(t + 0.5 * dt, mu);
        u = lu.solve(rhs);
        break;
      case Stepper::BackwardEuler:
        rhs = u;
        if (src) rhs += dt * model.source_at(t + dt, mu);
        u = lu.solve(rhs);
        break;
      case Stepper::ForwardEuler:
        rhs = a * u;
        if (src) rhs += model.source_at(t, mu);
        u += dt * rhs;
        break;
    }
    if ((k + 1) % stride == 0 || k + 1 == steps) {
      traj.times[col] = static_cast<double>(k + 1) * dt;
      traj.states.col(col) = u;
      ++col;
    }
  }
  return traj;
}

Mat sample_trajectory(const Trajectory& traj, const std::vector<double>& times) {
  Mat out(traj.states.rows(), static_cast<Index>(times.size()));
  const Index m = traj.times.size();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    if (t < traj.times[0] - 1e-12 || t > traj.times[m - 1] + 1e-12)
      throw WindowViolation("sample_trajectory: time outside the trajectory");
    const auto it = std::upper_bound(traj.times.data(), traj.times.data() + m, t);
    Index hi = std::min<Index>(it - traj.times.data(), m - 1);
    Index lo = std::max<Index>(hi - 1, 0);
    const double span = traj.times[hi] - traj.times[lo];
    const double w = span > 0.0 ? std::clamp((t - traj.times[lo]) / span, 0.0, 1.0) : 0.0;
    out.col(static_cast<Index>(k)) = (1.0 - w) * traj.states.col(lo) + w * traj.states.col(hi);
  }
  return out;
}

HeavisideSnapshots heaviside_snapshot_matrices(const std::vector<double>& mu_samples,
                                               const std::vector<double>& t_samples,
                                               const std::vector<Complex>& z_samples,
                                               const Vec& x_grid) {
  for (double mu : mu_samples)
    if (!(mu > 0.0)) throw ConfigError("heaviside snapshots: velocities must be positive");
  const Index n = x_grid.size();
  HeavisideSnapshots out;
  out.time_domain.resize(n, static_cast<Index>(mu_samples.size() * t_samples.size()));
  out.laplace_domain.resize(n, static_cast<Index>(mu_samples.size() * z_samples.size()));
  Index c = 0;
  for (double mu : mu_samples)
    for (double t : t_samples) {
      for (Index i = 0; i < n; ++i) out.time_domain(i, c) = mu * t - x_grid[i] >= 0.0 ? 1.0 : 0.0;
      ++c;
    }
  c = 0;
  for (double mu : mu_samples)
    for (Complex z : z_samples) {
      for (Index i = 0; i < n; ++i)
        out.laplace_domain(i, c) = std::exp(-x_grid[i] * z / mu) / (std::abs(mu) * z);
      ++c;
    }
  return out;
}

}  // namespace lapmor
