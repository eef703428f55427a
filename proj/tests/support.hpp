#pragma once

#include <random>
#include <vector>

#include "lapmor/model.hpp"

namespace lapmor::testing {

inline SpMat sparse_from(const Mat& m) { return m.sparseView(0.0, 0.0); }

inline SpMat diagonal(const std::vector<double>& d) {
  Mat m = Mat::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = d[i];
  return sparse_from(m);
}

/// u' = A u with a μ-independent matrix, u(0) = u0, one dummy parameter.
inline DiscretizedModel fixed_model(const SpMat& a, const Vec& u0) {
  OperatorTerm t{"a", [](const Parameter&) { return 1.0; }, a,
                 [](const Parameter& mu) { return Vec::Zero(mu.size()).eval(); }};
  AffineOperator op(1, {t});
  AffineSource src(a.rows(), 1, {});
  InitialTerm init{"u0", [](const Parameter&) { return 1.0; }, u0};
  MeshInfo mesh;
  mesh.points = {a.rows()};
  return DiscretizedModel("fixed", op, src, {init}, mesh,
                          ParameterBox(Vec::Constant(1, 0.0), Vec::Constant(1, 1.0)));
}

/// u' = (A0 + μ_1 A1 + μ_2 A2) u + μ-weighted sources, random but stable.
inline DiscretizedModel random_model(Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto rnd = [&](double scale) {
    Mat m(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) m(i, j) = scale * g(gen);
    return m;
  };
  const Mat a0 = -4.0 * Mat::Identity(n, n) + rnd(0.3);
  const Mat a1 = rnd(0.2);
  const Mat a2 = rnd(0.2);
  std::vector<OperatorTerm> terms{
      {"a0", [](const Parameter&) { return 1.0; }, sparse_from(a0), [](const Parameter&) { return Vec::Zero(2).eval(); }},
      {"a1", [](const Parameter& mu) { return mu[0]; }, sparse_from(a1), [](const Parameter&) { return (Vec(2) << 1, 0).finished(); }},
      {"a2", [](const Parameter& mu) { return mu[1] * mu[1]; }, sparse_from(a2),
       [](const Parameter& mu) { return (Vec(2) << 0, 2 * mu[1]).finished(); }}};
  CVec b(n);
  for (Index i = 0; i < n; ++i) b[i] = g(gen);
  SourceTerm s{"b", [](const Parameter& mu) { return 1.0 + mu[0]; },
               [](Complex z, const Parameter&) { return 1.0 / z; }, b,
               [](double, const Parameter&) { return 1.0; }};
  AffineSource src(n, 2, {s}, {[](const Parameter&) { return Complex(0.0); }});
  Vec u0(n);
  for (Index i = 0; i < n; ++i) u0[i] = g(gen);
  InitialTerm init{"u0", [](const Parameter& mu) { return 1.0 + mu[1]; }, u0};
  MeshInfo mesh;
  mesh.points = {n};
  return DiscretizedModel("random", AffineOperator(2, terms), src, {init}, mesh,
                          ParameterBox((Vec(2) << 0.0, 0.0).finished(), (Vec(2) << 1.0, 1.0).finished()));
}

}  // namespace lapmor::testing
