#include "lapmor/sigma.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include "lapmor/errors.hpp"
#include "parallel.hpp"

namespace lapmor {

namespace {

constexpr Index kDenseLimit = 16;
constexpr Index kDenseFallbackLimit = 3000;

SingularTriplet dense_sigma_min(const CMat& m) {
  Eigen::BDCSVD<CMat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Index n = m.cols();
  SingularTriplet t;
  t.sigma = svd.singularValues()[n - 1];
  t.next_sigma = n > 1 ? svd.singularValues()[n - 2] : std::numeric_limits<double>::infinity();
  t.u = svd.matrixU().col(n - 1);
  t.v = svd.matrixV().col(n - 1);
  // Fix the phase so that u^H M v is real and nonnegative.
  const Complex p = t.u.dot(m * t.v);
  if (std::abs(p) > 0.0) t.u *= p / std::abs(p);
  return t;
}

struct RitzPair {
  double theta = 0.0;
  double theta2 = 0.0;
  double residual = 0.0;
  CVec x;
};

// Lanczos with full reorthogonalisation for the largest eigenpair of a
// Hermitian positive operator.
template <class Apply>
RitzPair lanczos_top(Apply&& apply, CVec start, int steps) {
  const Index n = start.size();
  const int m = static_cast<int>(std::min<Index>(n, steps));
  CMat q(n, m + 1);
  Vec alpha(m), beta(m);
  q.col(0) = start.normalized();
  int k = 0;
  bool breakdown = false;
  for (; k < m; ++k) {
    CVec w = apply(q.col(k));
    alpha[k] = q.col(k).dot(w).real();
    for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(k + 1) * (q.leftCols(k + 1).adjoint() * w);
    beta[k] = w.norm();
    if (beta[k] <= 1e-14 * std::abs(alpha[k])) {
      ++k;
      breakdown = true;
      break;
    }
    q.col(k + 1) = w / beta[k];
  }
  Mat t = Mat::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(t);
  RitzPair r;
  r.theta = es.eigenvalues()[k - 1];
  r.theta2 = k > 1 ? es.eigenvalues()[k - 2] : 0.0;
  r.residual = breakdown ? 0.0 : std::abs(beta[k - 1] * es.eigenvectors()(k - 1, k - 1));
  r.x = q.leftCols(k) * es.eigenvectors().col(k - 1).cast<Complex>();
  return r;
}

}  // namespace

SingularTriplet sigma_min(const CSpMat& m) {
  if (m.rows() != m.cols()) throw ConfigError("sigma_min: matrix must be square");
  const Index n = m.rows();
  if (n <= kDenseLimit) return dense_sigma_min(CMat(m));
  Eigen::SparseLU<CSpMat> lu, lua;
  lu.compute(m);
  CSpMat ma = m.adjoint();
  if (lu.info() == Eigen::Success) lua.compute(ma);
  if (lu.info() != Eigen::Success || lua.info() != Eigen::Success) {
    if (n <= kDenseFallbackLimit) return dense_sigma_min(CMat(m));
    throw SingularShiftError("sigma_min: matrix is singular and too large for the dense fallback");
  }
  auto apply = [&](const CVec& x) -> CVec { return lu.solve(CVec(lua.solve(x))); };
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> g;
  CVec start(n);
  for (Index i = 0; i < n; ++i) start[i] = Complex(g(rng), g(rng));
  RitzPair r;
  for (int restart = 0; restart < 40; ++restart) {
    r = lanczos_top(apply, start, 40);
    if (!std::isfinite(r.theta)) break;
    if (r.residual <= 1e-11 * r.theta) break;
    start = r.x;
  }
  if (!(r.theta > 0.0) || !std::isfinite(r.theta)) {
    if (n <= kDenseFallbackLimit) return dense_sigma_min(CMat(m));
    throw SingularShiftError("sigma_min: inverse iteration failed");
  }
  SingularTriplet t;
  t.v = r.x.normalized();
  const CVec w = m * t.v;
  t.sigma = w.norm();
  t.u = t.sigma > 0.0 ? CVec(w / t.sigma) : CVec(lua.solve(t.v).normalized());
  t.next_sigma = r.theta2 > 0.0 ? 1.0 / std::sqrt(r.theta2) : std::numeric_limits<double>::infinity();
  return t;
}

SingularTriplet shifted_sigma_min(const AffineOperator& op, Complex z, const Parameter& mu) {
  CSpMat m = -assemble_operator(op, mu).cast<Complex>();
  CSpMat eye(op.dim(), op.dim());
  eye.setIdentity();
  m += z * eye;
  m.makeCompressed();
  return sigma_min(m);
}

namespace {

struct Eval {
  double sigma;
  Vec grad;
  int solves;
};

Vec gradient_from_triplet(const AffineOperator& op, const SingularTriplet& t, const Parameter& mu) {
  const Mat jac = op.coefficient_jacobian(mu);
  Vec s(static_cast<Index>(op.num_terms()));
  for (std::size_t q = 0; q < op.num_terms(); ++q) {
    const SpMat& a = op.term(q).matrix;
    const CVec av = CVec(a * t.v.real()) + Complex(0.0, 1.0) * CVec(a * t.v.imag());
    s[static_cast<Index>(q)] = t.u.dot(av).real();
  }
  return -jac.transpose() * s;
}

bool simple(const SingularTriplet& t, double gap_tol) {
  if (!(t.sigma > 0.0)) return false;
  return std::isinf(t.next_sigma) || (t.next_sigma - t.sigma) > gap_tol * t.next_sigma;
}

// σ and its gradient; central differences when σ_min is not simple.
Eval evaluate(const AffineOperator& op, Complex z, const Parameter& mu, const ParameterBox& box,
              const SigmaOptions& o) {
  const SingularTriplet t = shifted_sigma_min(op, z, mu);
  if (simple(t, o.gap_tol)) return {t.sigma, gradient_from_triplet(op, t, mu), 1};
  Vec g(mu.size());
  int solves = 1;
  for (Index i = 0; i < mu.size(); ++i) {
    const double h = o.fd_step * std::max(1.0, box.upper[i] - box.lower[i]);
    Parameter p = mu, m = mu;
    p[i] += h;
    m[i] -= h;
    g[i] = (shifted_sigma_min(op, z, p).sigma - shifted_sigma_min(op, z, m).sigma) / (2.0 * h);
    solves += 2;
  }
  return {t.sigma, g, solves};
}

}  // namespace

Vec sigma_gradient(const AffineOperator& op, Complex z, const Parameter& mu) {
  const SingularTriplet t = shifted_sigma_min(op, z, mu);
  if (!simple(t, 1e-8))
    throw MultiplicityError("sigma_gradient: smallest singular value is zero or not simple");
  return gradient_from_triplet(op, t, mu);
}

std::vector<Parameter> default_starts(const ParameterBox& box) {
  auto s = box.corners(5);
  s.push_back(box.center());
  return s;
}

SigmaResult sigma_lb_optimize(const AffineOperator& op, Complex z, const ParameterBox& box,
                              const std::vector<Parameter>& starts, const SigmaOptions& o) {
  if (starts.empty()) throw ConfigError("sigma_lb_optimize: no starting points");
  if (!op.has_gradients()) throw CapabilityError("sigma_lb_optimize: operator lacks gradients");
  struct Run {
    double sigma = std::numeric_limits<double>::infinity();
    Parameter mu;
    std::int64_t count = 0;
    std::vector<std::pair<Parameter, double>> trace;
  };
  std::vector<Run> runs(starts.size());
  detail::parallel_for(static_cast<Index>(starts.size()), [&](Index s) {
    Run& run = runs[static_cast<std::size_t>(s)];
    Parameter mu = box.clip(starts[static_cast<std::size_t>(s)]);
    Eval e = evaluate(op, z, mu, box, o);
    run.count += e.solves;
    run.trace.emplace_back(mu, e.sigma);
    for (int it = 0; it < o.max_iterations; ++it) {
      if ((mu - box.clip(mu - e.grad)).norm() < o.min_projected_gradient) break;
      double step = o.initial_step;
      bool moved = false;
      while (step >= o.min_step) {
        const Parameter trial = box.clip(mu - step * e.grad);
        const Vec d = mu - trial;
        if (d.norm() == 0.0) break;
        const double sig = shifted_sigma_min(op, z, trial).sigma;
        ++run.count;
        if (sig <= e.sigma - o.armijo * e.grad.dot(d)) {
          mu = trial;
          e = evaluate(op, z, mu, box, o);
          run.count += e.solves;
          run.trace.emplace_back(mu, e.sigma);
          moved = true;
          break;
        }
        step *= o.shrink;
      }
      if (!moved) break;
    }
    run.sigma = e.sigma;
    run.mu = mu;
  });
  SigmaResult res;
  std::size_t best = 0;
  for (std::size_t s = 0; s < runs.size(); ++s) {
    res.eigenproblem_count += runs[s].count;
    if (runs[s].sigma < runs[best].sigma) best = s;
    res.traces.push_back(runs[s].trace);
  }
  res.sigma = runs[best].sigma;
  res.argmin_mu = runs[best].mu;
  res.trace = runs[best].trace;
  return res;
}

double pseudospectrum_indicator(const AffineOperator& op, const Parameter& mu, Complex z, double t) {
  if (t < 0.0) throw ConfigError("pseudospectrum_indicator: t must be nonnegative");
  return std::exp(-z.real() * t) * shifted_sigma_min(op, z, mu).sigma;
}

SigmaLowerBounds compute_sigma_lower_bounds(const AffineOperator& op, const QuadratureGrid& grid,
                                            const ParameterBox& box, const SigmaOptions& opts) {
  SigmaLowerBounds lbs;
  lbs.per_node.resize(grid.size());
  lbs.argmins.resize(static_cast<std::size_t>(grid.size()));
  const auto starts = default_starts(box);
  for (Index j = 0; j < grid.size(); ++j) {
    // Mirrored nodes share σ_min because A(μ) is real.
    const Index m = grid.mirror(j);
    if (m < j) {
      lbs.per_node[j] = lbs.per_node[m];
      lbs.argmins[static_cast<std::size_t>(j)] = lbs.argmins[static_cast<std::size_t>(m)];
      continue;
    }
    const auto r = sigma_lb_optimize(op, grid.z[j], box, starts, opts);
    lbs.per_node[j] = r.sigma;
    lbs.argmins[static_cast<std::size_t>(j)] = r.argmin_mu;
    lbs.eigenproblem_count += r.eigenproblem_count;
  }
  return lbs;
}

SigmaLowerBounds exact_sigma_lower_bounds(const AffineOperator& op, const QuadratureGrid& grid,
                                          const ParameterGrid& xi) {
  SigmaLowerBounds lbs;
  lbs.per_node = Vec::Constant(grid.size(), std::numeric_limits<double>::infinity());
  lbs.argmins.resize(static_cast<std::size_t>(grid.size()));
  std::vector<Index> todo;
  for (Index j = 0; j < grid.size(); ++j)
    if (grid.mirror(j) >= j) todo.push_back(j);
  detail::parallel_for(static_cast<Index>(todo.size()), [&](Index k) {
    const Index j = todo[static_cast<std::size_t>(k)];
    for (const auto& mu : xi.points) {
      const double s = shifted_sigma_min(op, grid.z[j], mu).sigma;
      if (s < lbs.per_node[j]) {
        lbs.per_node[j] = s;
        lbs.argmins[static_cast<std::size_t>(j)] = mu;
      }
    }
  });
  lbs.eigenproblem_count = static_cast<std::int64_t>(todo.size() * xi.size());
  for (Index j = 0; j < grid.size(); ++j) {
    const Index m = grid.mirror(j);
    if (m < j) {
      lbs.per_node[j] = lbs.per_node[m];
      lbs.argmins[static_cast<std::size_t>(j)] = lbs.argmins[static_cast<std::size_t>(m)];
    }
  }
  return lbs;
}

ProfileCheck validate_profile(const DiscretizedModel& model, const QuadratureGrid& grid,
                              const ParameterBox& box, const TimeWindow& window, double tol,
                              const SigmaOptions& opts) {
  ProfileCheck out;
  out.lbs = compute_sigma_lower_bounds(model.op(), grid, box, opts);
  out.bounds = Vec::Zero(grid.size());
  for (Index j = 0; j < grid.size(); ++j) {
    if (!(out.lbs.per_node[j] > 0.0)) {
      // The contour passes through the spectrum for some μ: no finite bound.
      out.bounds[j] = std::numeric_limits<double>::infinity();
      continue;
    }
  }
  const double scale = grid.c / grid.N;
  for (Index i = 0; i < grid.size(); ++i) {
    if (std::isinf(out.bounds[i])) continue;
    const Parameter& mu = out.lbs.argmins[static_cast<std::size_t>(i)];
    const auto snaps = solve_nodes(model, grid, mu);
    double b = 0.0;
    for (Index j = 0; j < grid.size(); ++j) {
      const double t = grid.z[j].real() >= 0.0 ? window.t_end() : window.t0;
      b += scale * std::exp(grid.z[j].real() * t) * std::abs(grid.dz[j]) / out.lbs.per_node[j] *
           snaps[static_cast<std::size_t>(j)].residual_norm;
    }
    out.bounds[i] = b;
  }
  Index worst = 0;
  out.bounds.maxCoeff(&worst);
  out.err_bound = out.bounds[worst];
  out.worst_mu = out.lbs.argmins[static_cast<std::size_t>(worst)];
  out.accepted = out.err_bound <= tol;
  return out;
}

ProfileOutcome construct_profile(const DiscretizedModel& model, QuadratureGrid grid,
                                 const ParameterBox& box, const TimeWindow& window, double tol,
                                 int max_rounds, ProfileRebuild rebuild, const SigmaOptions& opts) {
  if (!rebuild) {
    rebuild = [](const QuadratureGrid& g, const ProfileCheck&) {
      ParabolicContour c(g.contour.a1, g.contour.a2 + std::max(0.5, g.contour.a2));
      return build_grid(c, g.c, g.N);
    };
  }
  ProfileOutcome out;
  for (int round = 1; round <= max_rounds; ++round) {
    out.check = validate_profile(model, grid, box, window, tol, opts);
    out.grid = grid;
    out.rounds = round;
    if (out.check.accepted) return out;
    if (round < max_rounds) grid = rebuild(grid, out.check);
  }
  throw ProfileFailure("profile not accepted after " + std::to_string(max_rounds) +
                       " rounds; bound " + std::to_string(out.check.err_bound));
}

}  // namespace lapmor
