#include "lapmor/rom.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "parallel.hpp"

namespace lapmor {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

CMat sparse_times(const SpMat& a, const CMat& b) {
  CMat out(a.rows(), b.cols());
  out.real() = a * b.real();
  out.imag() = a * b.imag();
  return out;
}

// Solves (zI − H)x = f for upper Hessenberg H by elimination with adjacent
// row pivoting, O(n²).
CVec hessenberg_solve(const CMat& h, Complex z, CVec f, double scale) {
  const Index n = h.rows();
  // Row-major so the row operations below touch contiguous memory.
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m = -h;
  m.diagonal().array() += z;
  for (Index k = 0; k + 1 < n; ++k) {
    if (std::norm(m(k + 1, k)) > std::norm(m(k, k))) {
      m.row(k).segment(k, n - k).swap(m.row(k + 1).segment(k, n - k));
      std::swap(f[k], f[k + 1]);
    }
    if (m(k, k) == Complex(0.0)) continue;
    const Complex l = m(k + 1, k) / m(k, k);
    if (l != Complex(0.0)) {
      m.row(k + 1).segment(k + 1, n - k - 1) -= l * m.row(k).segment(k + 1, n - k - 1);
      f[k + 1] -= l * f[k];
    }
  }
  for (Index k = n; k-- > 0;) {
    if (std::abs(m(k, k)) <= 1e-14 * scale)
      throw ReducedSingularityError("reduced shifted system is singular");
    Complex acc = f[k];
    if (k + 1 < n) acc -= (m.row(k).segment(k + 1, n - k - 1) * f.segment(k + 1, n - k - 1)).value();
    f[k] = acc / m(k, k);
  }
  return f;
}

std::size_t find_in_grid(const ParameterGrid& xi, const Parameter& mu) {
  for (std::size_t i = 0; i < xi.size(); ++i)
    if (xi[i].size() == mu.size() && (xi[i] - mu).cwiseAbs().maxCoeff() <= 1e-12) return i;
  throw ConfigError("greedy: the starting parameter must belong to the training set");
}

void argmax(const Vec& v, double& best, Index& at) {
  best = -1.0;
  at = 0;
  for (Index i = 0; i < v.size(); ++i) {
    if (!(v[i] <= best)) {  // strict improvement keeps the lowest index; NaN wins
      best = v[i];
      at = i;
    }
  }
}

}  // namespace

double ReducedBasis::orthonormality_defect() const {
  return (columns.adjoint() * columns - CMat::Identity(size(), size())).norm();
}

ReducedBasis ReducedBasis::truncated(Index k) const {
  ReducedBasis out;
  out.columns = columns.leftCols(std::min(k, size()));
  out.provenance = provenance;
  return out;
}

ReducedBasis pod(const CMat& snapshots, double tol_pod) {
  if (snapshots.cols() < 1) throw DegenerateSnapshotError("pod: empty snapshot matrix");
  if (!(tol_pod > 0.0 && tol_pod < 1.0)) throw ConfigError("pod: tol_pod must lie in (0, 1)");
  if (snapshots.cwiseAbs().maxCoeff() == 0.0) throw DegenerateSnapshotError("pod: all snapshots are zero");
  Eigen::BDCSVD<CMat> svd(snapshots, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  Index k = 1;
  while (k < s.size() && s[k] / s[0] > tol_pod) ++k;
  ReducedBasis b;
  b.columns = svd.matrixU().leftCols(k);
  return b;
}

bool orthonormal_append(CMat& basis, const CVec& v, double drop_tol) {
  const double n0 = v.norm();
  if (n0 == 0.0) return false;
  CVec w = v;
  for (int pass = 0; pass < 2; ++pass)
    if (basis.cols() > 0) w -= basis * (basis.adjoint() * w);
  const double n1 = w.norm();
  if (n1 <= drop_tol * n0) return false;
  basis.conservativeResize(v.size(), basis.cols() + 1);
  basis.col(basis.cols() - 1) = w / n1;
  return true;
}

void ReducedModel::attach(const DiscretizedModel& model) {
  if (model.op().num_terms() != op_terms.size() || model.laplace_rhs().num_terms() != rhs_terms.size())
    throw ArtifactError("reduced model does not match the model's affine structure");
  op_coeff_.clear();
  rhs_mu_coeff_.clear();
  rhs_z_coeff_.clear();
  for (const auto& t : model.op().terms()) op_coeff_.push_back(t.coefficient);
  for (const auto& t : model.laplace_rhs().terms()) {
    rhs_mu_coeff_.push_back(t.mu_coefficient);
    rhs_z_coeff_.push_back(t.z_coefficient);
  }
  poles_ = model.laplace_rhs().poles();
  param_dim = model.param_dim();
}

Vec ReducedModel::operator_coefficients(const Parameter& mu) const {
  if (mu.size() != param_dim) throw ParameterShapeError("reduced model: parameter has wrong length");
  Vec th(static_cast<Index>(op_coeff_.size()));
  for (std::size_t q = 0; q < op_coeff_.size(); ++q) th[static_cast<Index>(q)] = op_coeff_[q](mu);
  return th;
}

CVec ReducedModel::rhs_coefficients(Complex z, const Parameter& mu) const {
  if (mu.size() != param_dim) throw ParameterShapeError("reduced model: parameter has wrong length");
  for (const auto& p : poles_)
    if (std::abs(z - p(mu)) <= AffineSource::kPoleProximity)
      throw PoleProximityError("reduced source evaluated at a pole");
  CVec c(static_cast<Index>(rhs_mu_coeff_.size()));
  for (std::size_t q = 0; q < rhs_mu_coeff_.size(); ++q)
    c[static_cast<Index>(q)] = rhs_mu_coeff_[q](mu) * rhs_z_coeff_[q](z, mu);
  return c;
}

CMat ReducedModel::reduced_operator(const Parameter& mu, OnlineCounters* cnt) const {
  const Vec th = operator_coefficients(mu);
  CMat a = CMat::Zero(n_r, n_r);
  for (std::size_t q = 0; q < op_terms.size(); ++q) a += th[static_cast<Index>(q)] * op_terms[q];
  if (cnt) cnt->reduced_ops += op_terms.size() * static_cast<std::uint64_t>(n_r * n_r);
  return a;
}

CVec ReducedModel::reduced_rhs(Complex z, const Parameter& mu, OnlineCounters* cnt) const {
  const CVec c = rhs_coefficients(z, mu);
  CVec f = CVec::Zero(n_r);
  for (std::size_t q = 0; q < rhs_terms.size(); ++q) f += c[static_cast<Index>(q)] * rhs_terms[q];
  if (cnt) cnt->reduced_ops += rhs_terms.size() * static_cast<std::uint64_t>(n_r);
  return f;
}

ReducedModel galerkin_project(const DiscretizedModel& model, const ReducedBasis& basis) {
  const CMat& b = basis.columns;
  if (b.rows() != model.dim()) throw ConfigError("galerkin_project: basis has wrong row count");
  ReducedModel red;
  red.n_r = b.cols();
  const auto& rhs = model.laplace_rhs();
  const auto qa = static_cast<Index>(model.op().num_terms());
  const auto qb = static_cast<Index>(rhs.num_terms());
  const Index nr = b.cols();
  CMat w(model.dim(), qb + nr * (1 + qa));
  for (Index q = 0; q < qb; ++q) {
    const CVec& v = rhs.term(static_cast<std::size_t>(q)).vector;
    red.rhs_terms.push_back(b.adjoint() * v);
    w.col(q) = v;
  }
  w.middleCols(qb, nr) = b;
  for (Index q = 0; q < qa; ++q) {
    CMat aqb = sparse_times(model.op().term(static_cast<std::size_t>(q)).matrix, b);
    red.op_terms.push_back(b.adjoint() * aqb);
    w.middleCols(qb + nr * (1 + q), nr) = aqb;
  }
  red.identity = b.adjoint() * b;
  Eigen::HouseholderQR<CMat> qr(w);
  const Index k = std::min(w.rows(), w.cols());
  red.r_factor = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  if (nr > 0) {
    // Distance of conj(B) from span(B), relative to ‖B‖.
    const CMat bc = b.conjugate();
    const CMat proj = b * red.identity.ldlt().solve(b.adjoint() * bc);
    red.conjugate_closed = (bc - proj).norm() <= 1e-10 * b.norm();
  }
  red.attach(model);
  return red;
}

double residual_norm(const ReducedModel& red, const CVec& beta, Complex z, const Parameter& mu,
                     OnlineCounters* cnt) {
  const Vec th = red.operator_coefficients(mu);
  const CVec c = red.rhs_coefficients(z, mu);
  const Index qb = c.size(), nr = red.n_r, qa = th.size();
  if (beta.size() != nr) throw ParameterShapeError("residual_norm: coefficient vector has wrong length");
  CVec k(qb + nr * (1 + qa));
  k.head(qb) = -c;
  k.segment(qb, nr) = z * beta;
  for (Index q = 0; q < qa; ++q) k.segment(qb + nr * (1 + q), nr) = -th[q] * beta;
  if (cnt) cnt->reduced_ops += static_cast<std::uint64_t>(red.r_factor.rows() * k.size());
  return (red.r_factor.triangularView<Eigen::Upper>() * k).norm();
}

CVec node_coefficients(const ReducedModel& red, Complex z, const Parameter& mu) {
  CMat m = -red.reduced_operator(mu);
  m.diagonal().array() += z;
  Eigen::PartialPivLU<CMat> lu(m);
  const CVec f = red.reduced_rhs(z, mu);
  const double rc = std::abs(lu.determinant()) == 0.0 ? 0.0 : lu.rcond();
  if (!(rc > 1e-15)) throw ReducedSingularityError("reduced shifted system is singular");
  return lu.solve(f);
}

std::vector<CVec> online_coefficients(const ReducedModel& red, const QuadratureGrid& grid,
                                      const Parameter& mu, OnlineCounters* cnt) {
  const Index nr = red.n_r;
  const CMat a = red.reduced_operator(mu, cnt);
  Eigen::HessenbergDecomposition<CMat> hd(a);
  const CMat h = hd.matrixH();
  const CMat q = hd.matrixQ();
  std::vector<CVec> qb;
  for (const auto& b : red.rhs_terms) qb.push_back(q.adjoint() * b);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const std::uint64_t n2 = static_cast<std::uint64_t>(nr * nr);
  if (cnt) cnt->reduced_ops += 10 * n2 * static_cast<std::uint64_t>(nr) / 3 + qb.size() * n2;
  std::vector<CVec> beta(static_cast<std::size_t>(grid.size()));
  for (Index j = 0; j < grid.size(); ++j) {
    const CVec c = red.rhs_coefficients(grid.z[j], mu);
    CVec f = CVec::Zero(nr);
    for (std::size_t k = 0; k < qb.size(); ++k) f += c[static_cast<Index>(k)] * qb[k];
    beta[static_cast<std::size_t>(j)] = q * hessenberg_solve(h, grid.z[j], f, scale + std::abs(grid.z[j]));
    if (cnt) cnt->reduced_ops += 5 * n2 + qb.size() * static_cast<std::uint64_t>(nr);
  }
  return beta;
}

Mat lift(const ReducedBasis& basis, const QuadratureGrid& grid, const std::vector<CVec>& beta,
         const std::vector<double>& times, OnlineCounters* cnt) {
  const Index nr = basis.size();
  Mat out(basis.dim(), static_cast<Index>(times.size()));
  const double scale = grid.c / grid.N;
  for (std::size_t k = 0; k < times.size(); ++k) {
    CVec s = CVec::Zero(nr);
    for (Index j = 0; j < grid.size(); ++j)
      s += (std::exp(grid.z[j] * times[k]) * grid.dz[j]) * beta[static_cast<std::size_t>(j)];
    // Re((c/(iN))·B·s) = (c/N)·Im(B·s)
    out.col(static_cast<Index>(k)) = scale * (basis.columns.real() * s.imag() + basis.columns.imag() * s.real());
    if (cnt) {
      cnt->reduced_ops += static_cast<std::uint64_t>(grid.size() * nr);
      cnt->lift_ops += static_cast<std::uint64_t>(2 * basis.dim() * nr);
    }
  }
  return out;
}

Vec online_solve(const ReducedModel& red, const ReducedBasis& basis, const QuadratureGrid& grid,
                 const Parameter& mu, double t, OnlineCounters* cnt) {
  return online_solve(red, basis, grid, mu, std::vector<double>{t}, cnt).col(0);
}

Mat online_solve(const ReducedModel& red, const ReducedBasis& basis, const QuadratureGrid& grid,
                 const Parameter& mu, const std::vector<double>& times, OnlineCounters* cnt) {
  const Index nr = red.n_r;
  if (basis.size() != nr) throw ConfigError("online_solve: basis and reduced model differ in size");
  // With a conjugation-closed space the reduced solutions inherit the
  // symmetry of the nodes and only ξ ≥ 0 is needed.
  const bool half = red.conjugate_closed && grid.N % 2 == 0;
  const CMat a = red.reduced_operator(mu, cnt);
  Eigen::HessenbergDecomposition<CMat> hd(a);
  const CMat h = hd.matrixH();
  const CMat q = hd.matrixQ();
  std::vector<CVec> qb;
  for (const auto& b : red.rhs_terms) qb.push_back(q.adjoint() * b);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const std::uint64_t n2 = static_cast<std::uint64_t>(nr * nr);
  if (cnt) cnt->reduced_ops += 10 * n2 * static_cast<std::uint64_t>(nr) / 3 + qb.size() * n2;

  // Accumulate Σ_j w_j(t) x_j in Hessenberg coordinates, one column per time.
  CMat acc = CMat::Zero(nr, static_cast<Index>(times.size()));
  for (Index j = 0; j < grid.size(); ++j) {
    if (half && grid.xi[j] < 0.0) continue;
    const CVec c = red.rhs_coefficients(grid.z[j], mu);
    CVec f = CVec::Zero(nr);
    for (std::size_t k = 0; k < qb.size(); ++k) f += c[static_cast<Index>(k)] * qb[k];
    const CVec x = hessenberg_solve(h, grid.z[j], f, scale + std::abs(grid.z[j]));
    const double mid = half && grid.xi[j] == 0.0 ? 0.5 : 1.0;
    for (std::size_t k = 0; k < times.size(); ++k)
      acc.col(static_cast<Index>(k)) += (mid * std::exp(grid.z[j] * times[k]) * grid.dz[j]) * x;
    if (cnt) cnt->reduced_ops += 4 * n2 + (qb.size() + times.size()) * static_cast<std::uint64_t>(nr);
  }
  const CMat s = q * acc;
  // Full sum: Re((c/(iN))·B·s) = (c/N)·Im(B·s); half sum doubles it.
  const double w = (half ? 2.0 : 1.0) * grid.c / grid.N;
  Mat out = w * (basis.columns.real() * s.imag() + basis.columns.imag() * s.real());
  if (cnt) {
    cnt->reduced_ops += n2 * static_cast<std::uint64_t>(times.size());
    cnt->lift_ops += static_cast<std::uint64_t>(2 * basis.dim() * nr) * times.size();
  }
  return out;
}

void EstimatorContext::validate() const {
  if (sigma_lb.size() != grid.size())
    throw InvalidContextError("estimator context: need one lower bound per node");
  for (Index j = 0; j < sigma_lb.size(); ++j)
    if (!(sigma_lb[j] > 0.0)) throw InvalidContextError("estimator context: nonpositive lower bound");
}

double EstimatorContext::node_time(Index j) const {
  return grid.z[j].real() >= 0.0 ? window.t_end() : window.t0;
}

double EstimatorContext::node_weight(Index j) const {
  return grid.c / grid.N * std::exp(grid.z[j].real() * node_time(j)) * std::abs(grid.dz[j]) / sigma_lb[j];
}

Vec error_estimator_terms(const ReducedModel& red, const EstimatorContext& ctx, const Parameter& mu) {
  ctx.validate();
  const auto beta = online_coefficients(red, ctx.grid, mu);
  Vec terms(ctx.grid.size());
  for (Index j = 0; j < ctx.grid.size(); ++j)
    terms[j] = ctx.node_weight(j) * residual_norm(red, beta[static_cast<std::size_t>(j)], ctx.grid.z[j], mu);
  return terms;
}

double error_estimator(const ReducedModel& red, const EstimatorContext& ctx, const Parameter& mu) {
  return error_estimator_terms(red, ctx, mu).sum();
}

double error_estimator_node(const ReducedModel& red_j, const EstimatorContext& ctx, Index j,
                            const Parameter& mu) {
  ctx.validate();
  if (j < 0 || j >= ctx.grid.size()) throw ConfigError("error_estimator_node: node index out of range");
  const Complex z = ctx.grid.z[j];
  return ctx.node_weight(j) * residual_norm(red_j, node_coefficients(red_j, z, mu), z, mu);
}

namespace {

template <class EstimateFn>
Vec sweep(const ParameterGrid& xi, EstimateFn&& fn) {
  Vec d(static_cast<Index>(xi.size()));
  detail::parallel_for(d.size(), [&](Index i) { d[i] = fn(xi[static_cast<std::size_t>(i)]); });
  return d;
}

}  // namespace

GreedyResult greedy_pod(const DiscretizedModel& model, const EstimatorContext& ctx,
                        const ParameterGrid& xi, double tol, double tol_pod, const Parameter& mu_1,
                        const GreedyOptions& opts) {
  if (!(tol > 0.0)) throw ConfigError("greedy_pod: tol must be positive");
  ctx.validate();
  const auto start = Clock::now();
  GreedyResult res;
  res.pool.resize(model.dim(), 0);
  std::vector<SnapshotOrigin> origins;
  std::vector<std::size_t> used = {find_in_grid(xi, mu_1)};
  Parameter mu = mu_1;
  for (int it = 1;; ++it) {
    const auto snaps = solve_nodes(model, ctx.grid, mu);
    const Index old = res.pool.cols();
    res.pool.conservativeResize(model.dim(), old + static_cast<Index>(snaps.size()));
    for (std::size_t k = 0; k < snaps.size(); ++k) {
      res.pool.col(old + static_cast<Index>(k)) = snaps[k].uhat;
      origins.push_back({snaps[k].z, mu});
    }
    res.basis = pod(res.pool, tol_pod);
    res.basis.provenance = origins;
    const ReducedModel red = galerkin_project(model, res.basis);
    const Vec d = sweep(xi, [&](const Parameter& m) { return error_estimator(red, ctx, m); });
    double best;
    Index at;
    argmax(d, best, at);
    res.log.steps.push_back({it, mu, best, res.basis.size(), res.basis.size(), seconds_since(start)});
    if (opts.verbose)
      std::cerr << "pod-greedy " << it << ": max estimate " << best << ", N_r " << res.basis.size() << "\n";
    if (best <= tol) {
      res.log.final_estimates.assign(d.data(), d.data() + d.size());
      return res;
    }
    const auto next = static_cast<std::size_t>(at);
    if (std::find(used.begin(), used.end(), next) != used.end())
      throw GreedyStall("pod-greedy: parameter selected twice, estimate stuck at " + std::to_string(best),
                        res.log, res.basis);
    if (it >= opts.max_iterations)
      throw GreedyStall("pod-greedy: iteration cap reached", res.log, res.basis);
    used.push_back(next);
    mu = xi[next];
  }
}

GreedyResult greedy_local(const DiscretizedModel& model, const EstimatorContext& ctx,
                          const ParameterGrid& xi, double tol, Index j, const Parameter& mu_1,
                          const GreedyOptions& opts) {
  if (!(tol > 0.0)) throw ConfigError("greedy_local: tol must be positive");
  ctx.validate();
  if (j < 0 || j >= ctx.grid.size()) throw ConfigError("greedy_local: node index out of range");
  const double tol_j = tol / static_cast<double>(ctx.grid.N - 1);
  const Complex z = ctx.grid.z[j];
  const auto start = Clock::now();
  GreedyResult res;
  res.basis.columns.resize(model.dim(), 0);
  res.pool.resize(model.dim(), 0);
  std::vector<std::size_t> used = {find_in_grid(xi, mu_1)};
  Parameter mu = mu_1;
  for (int it = 1;; ++it) {
    const CVec u = solve_transform(model, z, mu).uhat;
    res.pool.conservativeResize(model.dim(), res.pool.cols() + 1);
    res.pool.col(res.pool.cols() - 1) = u;
    if (!orthonormal_append(res.basis.columns, u)) {
      if (res.basis.size() == 0) throw DegenerateSnapshotError("greedy_local: zero snapshot");
      throw GreedyStall("greedy_local: new snapshot is already in the span", res.log, res.basis);
    }
    res.basis.provenance.push_back({z, mu});
    const ReducedModel red = galerkin_project(model, res.basis);
    const Vec d = sweep(xi, [&](const Parameter& m) { return error_estimator_node(red, ctx, j, m); });
    double best;
    Index at;
    argmax(d, best, at);
    res.log.steps.push_back({it, mu, best, res.basis.size(), res.basis.size(), seconds_since(start)});
    if (best <= tol_j) {
      res.log.final_estimates.assign(d.data(), d.data() + d.size());
      return res;
    }
    const auto next = static_cast<std::size_t>(at);
    if (std::find(used.begin(), used.end(), next) != used.end())
      throw GreedyStall("greedy_local: parameter selected twice at node " + std::to_string(j), res.log,
                        res.basis);
    if (it >= opts.max_iterations) throw GreedyStall("greedy_local: iteration cap reached", res.log, res.basis);
    used.push_back(next);
    mu = xi[next];
  }
}

Index LocalBases::stored_snapshots() const {
  Index n = 0;
  for (const auto& b : per_node) n += b.size();
  return n;
}

Index LocalBases::max_size() const {
  Index n = 0;
  for (const auto& b : per_node) n = std::max(n, b.size());
  return n;
}

LocalBases LocalBases::truncated(const DiscretizedModel& model, Index k) const {
  LocalBases out;
  out.logs = logs;
  for (const auto& b : per_node) {
    out.per_node.push_back(b.truncated(k));
    out.models.push_back(galerkin_project(model, out.per_node.back()));
  }
  return out;
}

LocalBases greedy_local_all(const DiscretizedModel& model, const EstimatorContext& ctx,
                            const ParameterGrid& xi, double tol, const Parameter& mu_1,
                            const GreedyOptions& opts) {
  const Index n = ctx.grid.size();
  LocalBases out;
  out.per_node.resize(static_cast<std::size_t>(n));
  out.models.resize(static_cast<std::size_t>(n));
  out.logs.resize(static_cast<std::size_t>(n));
  detail::parallel_for(n, [&](Index j) {
    auto r = greedy_local(model, ctx, xi, tol, j, mu_1, opts);
    const auto k = static_cast<std::size_t>(j);
    out.models[k] = galerkin_project(model, r.basis);
    out.per_node[k] = std::move(r.basis);
    out.logs[k] = std::move(r.log);
  });
  return out;
}

Mat online_solve_local(const LocalBases& local, const QuadratureGrid& grid, const Parameter& mu,
                       const std::vector<double>& times) {
  const Index n = grid.size();
  std::vector<CVec> full(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    full[k] = local.per_node[k].columns * node_coefficients(local.models[k], grid.z[j], mu);
  }
  Mat out(local.per_node.front().dim(), static_cast<Index>(times.size()));
  for (std::size_t k = 0; k < times.size(); ++k)
    out.col(static_cast<Index>(k)) = invert(grid, full, times[k], InversionMode::Full, false);
  return out;
}

TruthSet compute_truth(const DiscretizedModel& model, const QuadratureGrid& grid,
                       const ParameterGrid& xi, const std::vector<double>& times) {
  TruthSet t;
  t.times = times;
  t.solutions.resize(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const auto snaps = solve_nodes(model, grid, xi[i]);
    Mat m(model.dim(), static_cast<Index>(times.size()));
    for (std::size_t k = 0; k < times.size(); ++k) m.col(static_cast<Index>(k)) = invert(grid, snaps, times[k]);
    t.solutions[i] = std::move(m);
  }
  return t;
}

double reduction_error(const TruthSet& truth, const ParameterGrid& xi,
                       const std::function<Mat(const Parameter&)>& reduced) {
  Vec err(static_cast<Index>(xi.size()));
  detail::parallel_for(err.size(), [&](Index i) {
    const auto k = static_cast<std::size_t>(i);
    const Mat r = reduced(xi[k]);
    double e = 0.0;
    for (Index c = 0; c < r.cols(); ++c) {
      const double den = truth.solutions[k].col(c).norm();
      const double num = (truth.solutions[k].col(c) - r.col(c)).norm();
      e = std::max(e, den > 0.0 ? num / den : num);
    }
    err[i] = e;
  });
  return err.maxCoeff();
}

namespace {

ClassicalRom project_classical(const DiscretizedModel& model, Mat basis, const ClassicalOptions& o) {
  ClassicalRom rom;
  rom.basis = std::move(basis);
  rom.stepper = o.stepper;
  rom.dt = o.dt;
  const Mat& v = rom.basis;
  for (const auto& t : model.op().terms()) rom.op_terms.push_back(v.transpose() * (t.matrix * v));
  for (const auto& t : model.initial_terms()) rom.init_terms.push_back(v.transpose() * t.vector);
  for (const auto& t : model.source().terms()) rom.source_terms.push_back(v.transpose() * t.vector.real());
  return rom;
}

Mat leading_modes(const Mat& s, Index max_k, double tol) {
  Eigen::BDCSVD<Mat> svd(s, Eigen::ComputeThinU);
  const Vec& sv = svd.singularValues();
  Index k = 1;
  while (k < sv.size() && k < max_k && sv[k] / sv[0] > tol) ++k;
  return svd.matrixU().leftCols(k);
}

}  // namespace

ClassicalRom build_classical_rom(const DiscretizedModel& model, const ParameterGrid& training,
                                 const ClassicalOptions& o) {
  std::vector<Mat> traj(training.size());
  detail::parallel_for(static_cast<Index>(training.size()), [&](Index i) {
    const auto k = static_cast<std::size_t>(i);
    traj[k] = step_reference(model, training[k], o.stepper, o.dt, o.t_end, o.stride).states;
  });
  Mat basis;
  if (!o.greedy) {
    Mat pool(model.dim(), 0);
    for (const auto& t : traj) {
      const Index old = pool.cols();
      pool.conservativeResize(model.dim(), old + t.cols());
      pool.rightCols(t.cols()) = t;
    }
    basis = leading_modes(pool, o.max_size, o.tol_pod);
  } else {
    // POD-greedy on the projection error: add the leading mode of the worst
    // trajectory's error each round.
    basis.resize(model.dim(), 0);
    while (basis.cols() < o.max_size) {
      double worst = -1.0;
      std::size_t at = 0;
      for (std::size_t k = 0; k < traj.size(); ++k) {
        const Mat e = basis.cols() ? Mat(traj[k] - basis * (basis.transpose() * traj[k])) : traj[k];
        const double err = e.colwise().norm().maxCoeff();
        if (err > worst) {
          worst = err;
          at = k;
        }
      }
      Mat e = basis.cols() ? Mat(traj[at] - basis * (basis.transpose() * traj[at])) : traj[at];
      if (worst <= o.tol_pod * traj[at].norm()) break;
      Vec mode = leading_modes(e, 1, o.tol_pod).col(0);
      for (int pass = 0; pass < 2; ++pass)
        if (basis.cols()) mode -= basis * (basis.transpose() * mode);
      basis.conservativeResize(model.dim(), basis.cols() + 1);
      basis.col(basis.cols() - 1) = mode.normalized();
    }
  }
  return project_classical(model, std::move(basis), o);
}

ClassicalRom truncate_classical(const DiscretizedModel& model, const ClassicalRom& rom, Index k) {
  ClassicalOptions o;
  o.stepper = rom.stepper;
  o.dt = rom.dt;
  return project_classical(model, rom.basis.leftCols(std::min(k, rom.basis.cols())), o);
}

Mat classical_online(const ClassicalRom& rom, const DiscretizedModel& model, const Parameter& mu,
                     const std::vector<double>& times) {
  if (rom.stepper == Stepper::ForwardEuler) throw ConfigError("classical rom: implicit stepper required");
  const Index nr = rom.basis.cols();
  const Vec th = model.op().coefficients(mu);
  Mat a = Mat::Zero(nr, nr);
  for (std::size_t q = 0; q < rom.op_terms.size(); ++q) a += th[static_cast<Index>(q)] * rom.op_terms[q];
  Vec u = Vec::Zero(nr);
  for (std::size_t q = 0; q < rom.init_terms.size(); ++q)
    u += model.initial_terms()[q].coefficient(mu) * rom.init_terms[q];
  const auto& src = model.source().terms();
  Vec srcmu(static_cast<Index>(src.size()));
  for (std::size_t q = 0; q < src.size(); ++q) srcmu[static_cast<Index>(q)] = src[q].mu_coefficient(mu);
  auto source = [&](double t) {
    Vec b = Vec::Zero(nr);
    for (std::size_t q = 0; q < src.size(); ++q)
      b += srcmu[static_cast<Index>(q)] * src[q].time_coefficient(t, mu) * rom.source_terms[q];
    return b;
  };
  const double dt = rom.dt;
  const double w = rom.stepper == Stepper::CrankNicolson ? 0.5 * dt : dt;
  const Eigen::PartialPivLU<Mat> lu(Mat::Identity(nr, nr) - w * a);
  const Mat expl = Mat::Identity(nr, nr) + (rom.stepper == Stepper::CrankNicolson ? w : 0.0) * a;

  Mat out(rom.basis.rows(), static_cast<Index>(times.size()));
  std::vector<std::pair<Index, std::size_t>> stops;
  for (std::size_t k = 0; k < times.size(); ++k) stops.emplace_back(std::llround(times[k] / dt), k);
  std::sort(stops.begin(), stops.end());
  Index step = 0;
  for (const auto& [target, k] : stops) {
    for (; step < target; ++step) {
      const double t = static_cast<double>(step) * dt;
      Vec rhs = expl * u;
      if (!src.empty())
        rhs += dt * source(rom.stepper == Stepper::CrankNicolson ? t + 0.5 * dt : t + dt);
      u = lu.solve(rhs);
    }
    out.col(static_cast<Index>(k)) = rom.basis * u;
  }
  return out;
}

}  // namespace lapmor
