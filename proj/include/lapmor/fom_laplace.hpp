#pragma once

#include <cstdint>
#include <vector>

#include "lapmor/contour.hpp"
#include "lapmor/model.hpp"

namespace lapmor {

struct TransformSnapshot {
  Complex z;
  Parameter mu;
  CVec uhat;
  double residual_norm = 0.0;  // ‖(zI − A(μ))û − rhs‖
};

/// The window [t0, Λ·t0] on which a contour is validated.
struct TimeWindow {
  double t0 = 1.0;
  double Lambda = 10.0;

  TimeWindow() = default;
  TimeWindow(double t0_, double Lambda_);

  double t_end() const { return Lambda * t0; }
  bool contains(double t) const;
  void check(double t) const;  // throws WindowViolation
  /// `count` geometrically spaced instants including both endpoints.
  std::vector<double> sample(int count = 10) const;
};

/// Solves (zI − A(μ))û = u0(μ) + b̂(z; μ) with a sparse LU.
TransformSnapshot solve_transform(const DiscretizedModel& model, Complex z, const Parameter& mu);

/// Solves at every grid node for one μ (in parallel). With `half` only the
/// nodes with ξ ≥ 0 are solved and the rest filled by conjugation.
std::vector<TransformSnapshot> solve_nodes(const DiscretizedModel& model, const QuadratureGrid& grid,
                                           const Parameter& mu, bool half = false);

/// Cumulative count of shifted sparse solves (instrumentation).
std::uint64_t fom_solve_count();
void reset_fom_solve_count();

enum class InversionMode { Full, Symmetric };

/// Contour quadrature from precomputed node solutions; snapshots are indexed
/// like the grid nodes.
Vec invert(const QuadratureGrid& grid, const std::vector<TransformSnapshot>& snapshots, double t,
           InversionMode mode = InversionMode::Full, bool check_real = true);
Vec invert(const QuadratureGrid& grid, const std::vector<CVec>& uhat, double t,
           InversionMode mode = InversionMode::Full, bool check_real = true);

/// Solutions at `times` (columns) from a single set of node solves.
Mat full_solution(const DiscretizedModel& model, const QuadratureGrid& grid, const Parameter& mu,
                  const TimeWindow& window, const std::vector<double>& times);

}  // namespace lapmor
