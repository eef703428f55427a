#include "lapmor/fom_laplace.hpp"

#include <atomic>
#include <cmath>

#include <Eigen/SparseLU>

#include "lapmor/errors.hpp"
#include "parallel.hpp"

namespace lapmor {

namespace {

std::atomic<std::uint64_t> g_solves{0};

CSpMat shifted(const SpMat& a, Complex z) {
  const Index n = a.rows();
  CSpMat m = -a.cast<Complex>();
  CSpMat eye(n, n);
  eye.setIdentity();
  m += z * eye;
  m.makeCompressed();
  return m;
}

}  // namespace

TimeWindow::TimeWindow(double t0_, double Lambda_) : t0(t0_), Lambda(Lambda_) {
  if (!(t0 > 0.0)) throw ConfigError("time window: t0 must be positive");
  if (!(Lambda > 1.0)) throw ConfigError("time window: Lambda must exceed 1");
}

bool TimeWindow::contains(double t) const {
  const double slack = 1e-12 * t_end();
  return t >= t0 - slack && t <= t_end() + slack;
}

void TimeWindow::check(double t) const {
  if (!contains(t))
    throw WindowViolation("time " + std::to_string(t) + " outside window [" + std::to_string(t0) +
                          ", " + std::to_string(t_end()) + "]");
}

std::vector<double> TimeWindow::sample(int count) const {
  if (count < 2) return {t0};
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = t0 * std::pow(Lambda, k / double(count - 1));
  out.back() = t_end();
  return out;
}

TransformSnapshot solve_transform(const DiscretizedModel& model, Complex z, const Parameter& mu) {
  const CVec rhs = assemble_source(model.laplace_rhs(), z, mu);
  const CSpMat m = shifted(assemble_operator(model.op(), mu), z);
  Eigen::SparseLU<CSpMat> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success)
    throw SingularShiftError("shifted system is numerically singular at z = " +
                             std::to_string(z.real()) + "+" + std::to_string(z.imag()) + "i");
  TransformSnapshot snap{z, mu, lu.solve(rhs), 0.0};
  if (!snap.uhat.allFinite()) throw SingularShiftError("shifted solve produced non-finite values");
  snap.residual_norm = (m * snap.uhat - rhs).norm();
  ++g_solves;
  return snap;
}

std::vector<TransformSnapshot> solve_nodes(const DiscretizedModel& model, const QuadratureGrid& grid,
                                           const Parameter& mu, bool half) {
  const Index n = grid.size();
  std::vector<TransformSnapshot> out(static_cast<std::size_t>(n));
  std::vector<Index> todo;
  for (Index j = 0; j < n; ++j)
    if (!half || grid.xi[j] >= 0.0) todo.push_back(j);
  const auto count = static_cast<Index>(todo.size());
  detail::parallel_for(count, [&](Index k) {
    const Index j = todo[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(j)] = solve_transform(model, grid.z[j], mu);
  });
  if (half) {
    for (Index j = 0; j < n; ++j) {
      if (grid.xi[j] >= 0.0) continue;
      const auto& src = out[static_cast<std::size_t>(grid.mirror(j))];
      out[static_cast<std::size_t>(j)] = {grid.z[j], mu, src.uhat.conjugate(), src.residual_norm};
    }
  }
  return out;
}

std::uint64_t fom_solve_count() { return g_solves.load(); }
void reset_fom_solve_count() { g_solves = 0; }

Vec invert(const QuadratureGrid& grid, const std::vector<CVec>& uhat, double t, InversionMode mode,
           bool check_real) {
  if (static_cast<Index>(uhat.size()) != grid.size())
    throw ConfigError("invert: need one solution per quadrature node");
  const Index n = uhat.front().size();
  const double scale = grid.c / grid.N;
  if (mode == InversionMode::Symmetric) {
    // Terms at ±ξ satisfy T(−ξ) = −conj(T(ξ)), so the sum is 2i·Im of the
    // half sum plus the vertex term, which is purely imaginary.
    CVec acc = CVec::Zero(n);
    for (Index j = 0; j < grid.size(); ++j) {
      if (grid.xi[j] < 0.0) continue;
      const Complex w = std::exp(grid.z[j] * t) * grid.dz[j] * (grid.xi[j] == 0.0 ? 0.5 : 1.0);
      acc += w * uhat[static_cast<std::size_t>(j)];
    }
    return 2.0 * scale * acc.imag();
  }
  CVec acc = CVec::Zero(n);
  for (Index j = 0; j < grid.size(); ++j)
    acc += (std::exp(grid.z[j] * t) * grid.dz[j]) * uhat[static_cast<std::size_t>(j)];
  // (c/(iN))·acc
  const CVec u = Complex(0.0, -scale) * acc;
  if (check_real) {
    const double re = u.real().norm(), im = u.imag().norm();
    if (im > 1e-6 * re && im > 0.0)
      throw SymmetryViolation("invert: imaginary residue " + std::to_string(im) +
                              " relative to real part " + std::to_string(re));
  }
  return u.real();
}

Vec invert(const QuadratureGrid& grid, const std::vector<TransformSnapshot>& snapshots, double t,
           InversionMode mode, bool check_real) {
  std::vector<CVec> uhat;
  uhat.reserve(snapshots.size());
  for (const auto& s : snapshots) uhat.push_back(s.uhat);
  return invert(grid, uhat, t, mode, check_real);
}

Mat full_solution(const DiscretizedModel& model, const QuadratureGrid& grid, const Parameter& mu,
                  const TimeWindow& window, const std::vector<double>& times) {
  for (double t : times) window.check(t);
  const auto snaps = solve_nodes(model, grid, mu);
  Mat out(model.dim(), static_cast<Index>(times.size()));
  for (std::size_t k = 0; k < times.size(); ++k) out.col(static_cast<Index>(k)) = invert(grid, snaps, times[k]);
  return out;
}

}  // namespace lapmor
