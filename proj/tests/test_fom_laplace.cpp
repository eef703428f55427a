#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "lapmor/contour.hpp"
#include "lapmor/errors.hpp"
#include "lapmor/fom_laplace.hpp"
#include "lapmor/models.hpp"
#include "support.hpp"

using namespace lapmor;
using lapmor::testing::diagonal;
using lapmor::testing::fixed_model;

namespace {

// Truncation for a unit-size transform, node count from the doubling rule.
QuadratureGrid accurate_grid(const DiscretizedModel& m, double t0, double tol = 1e-10) {
  const ParabolicContour c(-1.0, 0.5);
  const double cc = choose_truncation(c, t0, 2.0, 1e-12);
  return build_grid(c, cc, choose_node_count(m, c, Vec::Zero(m.param_dim()), {t0, 10 * t0}, tol, cc).N);
}

}  // namespace

TEST(SolveTransform, ScalarResolvent) {
  const auto m = fixed_model(diagonal({0.0}), Vec::Ones(1));
  const auto s = solve_transform(m, 2.0, Vec::Zero(1));
  EXPECT_NEAR(std::abs(s.uhat[0] - 0.5), 0.0, 1e-15);
  EXPECT_LE(s.residual_norm, 1e-15);
}

TEST(SolveTransform, DiagonalInversion) {
  const auto m = fixed_model(diagonal({-1.0, -2.0}), Vec::Ones(2));
  const Complex z(1.0, 1.0);
  const auto s = solve_transform(m, z, Vec::Zero(1));
  EXPECT_NEAR(std::abs(s.uhat[0] - 1.0 / Complex(2, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.uhat[1] - 1.0 / Complex(3, 1)), 0.0, 1e-15);
}

TEST(SolveTransform, BlackScholesBackwardStable) {
  const auto m = black_scholes(200);
  const auto g = build_grid(default_contour(m, m.default_probe()), 3.0, 32);
  const Parameter mu = (Vec(2) << 0.2, 0.01).finished();
  for (Index j : {Index(0), g.size() / 2, g.size() - 1}) {
    const auto s = solve_transform(m, g.z[j], mu);
    const double rhs = assemble_source(m.laplace_rhs(), g.z[j], mu).norm();
    EXPECT_LE(s.residual_norm / rhs, 1e-10);
  }
}

TEST(Invert, ScalarExponential) {
  const auto m = fixed_model(diagonal({-1.0}), Vec::Ones(1));
  const auto g = accurate_grid(m, 1.0);
  const auto snaps = solve_nodes(m, g, Vec::Zero(1));
  EXPECT_NEAR(invert(g, snaps, 1.0)[0], 0.36787944117144233, 1e-6);
}

TEST(Invert, ConstantSolution) {
  const auto m = fixed_model(diagonal({0.0}), Vec::Ones(1));
  const auto g = accurate_grid(m, 0.5);
  const auto snaps = solve_nodes(m, g, Vec::Zero(1));
  for (double t : {0.5, 1.0, 2.0, 5.0}) EXPECT_NEAR(invert(g, snaps, t)[0], 1.0, 1e-8);
}

TEST(Invert, DiagonalMatrixExponential) {
  const auto m = fixed_model(diagonal({-1.0, -2.0}), Vec::Ones(2));
  const auto g = accurate_grid(m, 0.5);
  const Vec u = invert(g, solve_nodes(m, g, Vec::Zero(1)), 0.5);
  EXPECT_NEAR(u[0], std::exp(-0.5), 1e-6);
  EXPECT_NEAR(u[1], std::exp(-1.0), 1e-6);
}

TEST(Invert, SymmetricFormAgrees) {
  const auto m = lapmor::testing::random_model(10, 5);
  const auto g = accurate_grid(m, 0.5);
  const Parameter mu = (Vec(2) << 0.3, 0.7).finished();
  const auto snaps = solve_nodes(m, g, mu);
  for (double t : {0.5, 1.0, 3.0}) {
    const Vec full = invert(g, snaps, t, InversionMode::Full);
    const Vec sym = invert(g, snaps, t, InversionMode::Symmetric);
    EXPECT_LE((full - sym).norm(), 1e-12 * full.norm());
  }
}

TEST(Invert, ConjugatePairing) {
  const auto m = lapmor::testing::random_model(10, 6);
  const auto g = accurate_grid(m, 0.5);
  const auto snaps = solve_nodes(m, g, (Vec(2) << 0.1, 0.9).finished());
  for (Index j = 0; j < g.size(); ++j) {
    const CVec& a = snaps[static_cast<std::size_t>(j)].uhat;
    const CVec& b = snaps[static_cast<std::size_t>(g.mirror(j))].uhat;
    EXPECT_LE((a - b.conjugate()).norm(), 1e-12 * a.norm());
  }
  // The half solve fills the mirrored nodes by conjugation.
  const auto half = solve_nodes(m, g, (Vec(2) << 0.1, 0.9).finished(), true);
  EXPECT_LE((invert(g, half, 1.0) - invert(g, snaps, 1.0)).norm(), 1e-12 * invert(g, snaps, 1.0).norm());
}

TEST(Invert, OrderIndependence) {
  const auto m = lapmor::testing::random_model(6, 8);
  const auto g = accurate_grid(m, 0.5);
  const Parameter mu = (Vec(2) << 0.5, 0.5).finished();
  std::vector<Index> order(static_cast<std::size_t>(g.size()));
  for (Index j = 0; j < g.size(); ++j) order[static_cast<std::size_t>(j)] = g.size() - 1 - j;
  std::vector<TransformSnapshot> snaps(order.size());
  for (Index j : order) snaps[static_cast<std::size_t>(j)] = solve_transform(m, g.z[j], mu);
  const auto ref = solve_nodes(m, g, mu);
  EXPECT_EQ(invert(g, snaps, 1.0), invert(g, ref, 1.0));
}

TEST(Invert, NonRealDataTripsSymmetryCheck) {
  const auto g = build_grid(ParabolicContour(-1.0, 0.5), 3.0, 64);
  std::vector<CVec> uhat;
  for (Index j = 0; j < g.size(); ++j) uhat.push_back(CVec::Constant(1, Complex(0.0, 1.0) / (g.z[j] + 1.0)));
  EXPECT_THROW(invert(g, uhat, 1.0), SymmetryViolation);
}

TEST(Window, ContainsAndSampling) {
  const TimeWindow w(0.1, 10.0);
  EXPECT_TRUE(w.contains(0.1));
  EXPECT_TRUE(w.contains(1.0));
  EXPECT_FALSE(w.contains(1.01));
  EXPECT_THROW(w.check(0.05), WindowViolation);
  const auto s = w.sample(10);
  ASSERT_EQ(s.size(), 10u);
  EXPECT_DOUBLE_EQ(s.front(), 0.1);
  EXPECT_DOUBLE_EQ(s.back(), 1.0);
  for (std::size_t k = 1; k < s.size(); ++k) EXPECT_NEAR(s[k] / s[k - 1], std::pow(10.0, 1.0 / 9.0), 1e-12);
  EXPECT_THROW(TimeWindow(0.0, 2.0), ConfigError);
  EXPECT_THROW(TimeWindow(1.0, 1.0), ConfigError);
}

TEST(FullSolution, OneSolvePerNode) {
  const auto m = fixed_model(diagonal({-1.0, -3.0}), Vec::Ones(2));
  const auto g = accurate_grid(m, 0.5);
  const TimeWindow w(0.5, 4.0);
  reset_fom_solve_count();
  const Mat u = full_solution(m, g, Vec::Zero(1), w, {w.t0, w.t_end()});
  EXPECT_EQ(fom_solve_count(), static_cast<std::uint64_t>(g.size()));
  EXPECT_NEAR(u(0, 1), std::exp(-2.0), 1e-6);
  EXPECT_THROW(full_solution(m, g, Vec::Zero(1), w, {3.0}), WindowViolation);
}

TEST(FullSolution, AdvectionAgainstBackwardEuler) {
  const auto m = advection(1000);
  const auto g = build_grid(default_contour(m, m.default_probe()), *m.contour_hint.c, *m.contour_hint.nodes);
  const Parameter mu = Vec::Constant(1, 1.0);
  const Mat u = full_solution(m, g, mu, TimeWindow(0.25, 2.0), {0.5});
  const auto traj = step_reference(m, mu, Stepper::BackwardEuler, 1e-3, 0.5);
  const Vec ref = traj.states.col(traj.states.cols() - 1);
  EXPECT_LE((u.col(0) - ref).norm() / ref.norm(), 5e-2);
  // The front sits near x = 0.7.
  EXPECT_NEAR(u(599, 0), 0.0, 0.1);
  EXPECT_NEAR(u(799, 0), 1.0, 0.1);
}
