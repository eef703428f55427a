#include "lapmor/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "lapmor/errors.hpp"

namespace lapmor {

namespace {

// Lanczos with full reorthogonalisation on a symmetric operator. Returns the
// top Ritz value plus its residual, which brackets an eigenvalue from above.
double lanczos_max(const SpMat& h, int steps) {
  const Index n = h.rows();
  const int m = static_cast<int>(std::min<Index>(n, steps));
  Mat q(n, m + 1);
  Vec alpha(m), beta(m);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = g(rng);
  q.col(0) = v.normalized();
  int k = 0;
  for (; k < m; ++k) {
    Vec w = h * q.col(k);
    alpha[k] = q.col(k).dot(w);
    for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(k + 1) * (q.leftCols(k + 1).transpose() * w);
    beta[k] = w.norm();
    if (beta[k] < 1e-12 * std::max(1.0, std::abs(alpha[k]))) {
      ++k;
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
  const double theta = es.eigenvalues()[k - 1];
  const double resid = std::abs(beta[k - 1] * es.eigenvectors()(k - 1, k - 1));
  return theta + resid;
}

}  // namespace

double numerical_abscissa(const SpMat& a, Index dense_limit) {
  const SpMat h = 0.5 * (a + SpMat(a.transpose()));
  if (h.rows() <= dense_limit) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(h), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[h.rows() - 1];
  }
  return lanczos_max(h, 200);
}

DiscretizedModel::DiscretizedModel(std::string name, AffineOperator op, AffineSource source,
                                   std::vector<InitialTerm> initial, MeshInfo mesh,
                                   ParameterBox box)
    : name_(std::move(name)),
      op_(std::move(op)),
      source_(std::move(source)),
      initial_(std::move(initial)),
      mesh_(std::move(mesh)),
      box_(std::move(box)) {
  if (source_.dim() != op_.dim() && source_.num_terms() > 0)
    throw ConfigError(name_ + ": source and operator sizes differ");
  if (box_.dim() != op_.param_dim()) throw ConfigError(name_ + ": parameter box has wrong dimension");
  std::vector<SourceTerm> terms;
  for (const auto& t : initial_) {
    if (t.vector.size() != op_.dim()) throw ConfigError(name_ + ": initial value has wrong size");
    terms.push_back({t.name, t.coefficient, [](Complex, const Parameter&) { return Complex(1.0); },
                     t.vector.cast<Complex>(), TimeCoefficientFn{}});
  }
  for (const auto& t : source_.terms()) terms.push_back(t);
  rhs_ = AffineSource(op_.dim(), op_.param_dim(), std::move(terms), source_.poles());
  reference_mu = box_.center();
}

Vec DiscretizedModel::initial_value(const Parameter& mu) const {
  op_.check_parameter(mu);
  Vec u = Vec::Zero(dim());
  for (const auto& t : initial_) u += t.coefficient(mu) * t.vector;
  return u;
}

Vec DiscretizedModel::source_at(double t, const Parameter& mu) const {
  if (!has_source()) return Vec::Zero(dim());
  return source_in_time(source_, t, mu);
}

std::vector<Parameter> DiscretizedModel::default_probe() const {
  std::vector<Parameter> probe = box_.corners();
  probe.push_back(box_.center());
  const auto extra = ParameterGrid::random(box_, 8, 12345);
  probe.insert(probe.end(), extra.points.begin(), extra.points.end());
  return probe;
}

double DiscretizedModel::spectral_bound(const std::vector<Parameter>& probe) const {
  if (spectral_probe) return spectral_probe(probe);
  double bound = -std::numeric_limits<double>::infinity();
  for (const auto& mu : probe) bound = std::max(bound, numerical_abscissa(assemble_operator(op_, mu)));
  return bound;
}

}  // namespace lapmor
