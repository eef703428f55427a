#pragma once

#include <utility>
#include <vector>

#include "lapmor/types.hpp"

namespace lapmor {

class DiscretizedModel;

/// z(s) = −s² − 2is·a1 + a2 with a1 < 0 < a2.
struct ParabolicContour {
  double a1 = -1.0;
  double a2 = 1.0;

  ParabolicContour() = default;
  ParabolicContour(double a1_, double a2_);
};

std::pair<Complex, Complex> eval_contour(const ParabolicContour& contour, double s);

/// Trapezoid nodes ξ_j = −cπ + 2jcπ/N, j = 1..N−1, mapped onto the contour.
struct QuadratureGrid {
  ParabolicContour contour;
  double c = 1.0;
  int N = 2;
  Vec xi;
  CVec z;
  CVec dz;

  Index size() const { return xi.size(); }
  /// Index of the node mirrored through the real axis.
  Index mirror(Index j) const { return size() - 1 - j; }
};

QuadratureGrid build_grid(const ParabolicContour& contour, double c, int N);

struct TruncationOptions {
  double c_min = 0.1;
  double c_max = 10.0;
  double rel_tol = 1e-3;
};

/// Tail size exp(Re z(cπ)·T)·|z'(cπ)|·bound.
double truncation_tail(const ParabolicContour& contour, double T, double transform_bound, double c);

/// Smallest c on the monotone branch of the tail with tail ≤ tol (bisection).
double choose_truncation(const ParabolicContour& contour, double T, double transform_bound,
                         double tol, const TruncationOptions& opts = {});

struct NodeCountResult {
  int N = 0;
  double discrepancy = 0.0;
  std::vector<double> history;  // discrepancy for N = 8, 16, ...
};

/// Doubling N = 8, 16, ... until ‖u_2N − u_N‖/‖u_2N‖ ≤ tol at every time in
/// `times`; returns 2N. Throws NodeCountFailure above `cap`.
NodeCountResult choose_node_count(const DiscretizedModel& model, const ParabolicContour& contour,
                                  const Parameter& mu_ref, const std::vector<double>& times,
                                  double tol, double c, int cap = 512);

/// Default contour: a1 = −1 and a2 right of the field of values and of the
/// source poles over the probe set, unless the model carries a hint.
ParabolicContour default_contour(const DiscretizedModel& model, const std::vector<Parameter>& probe,
                                 double margin = 0.5);

/// max ‖û(z(cπ); μ)‖ over the probe set and the given truncation values.
double estimate_transform_bound(const DiscretizedModel& model, const ParabolicContour& contour,
                                const std::vector<Parameter>& probe, const std::vector<double>& cs);

}  // namespace lapmor
