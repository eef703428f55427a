#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lapmor/affine_model.hpp"
#include "lapmor/contour.hpp"
#include "lapmor/fom_laplace.hpp"
#include "lapmor/model.hpp"

namespace lapmor {

struct SingularTriplet {
  double sigma = 0.0;
  CVec u;  // left
  CVec v;  // right, with u^H M v = σ ≥ 0
  double next_sigma = 0.0;  // estimate of the second smallest singular value
};

/// Smallest singular triplet: dense SVD for small or singular matrices,
/// otherwise inverse Lanczos on (M^H M)^{-1} with sparse LU solves.
SingularTriplet sigma_min(const CSpMat& m);

/// σ_min(zI − A(μ)).
SingularTriplet shifted_sigma_min(const AffineOperator& op, Complex z, const Parameter& mu);

/// ∂σ_min(zI − A(μ))/∂μ_i = −Re(u^H (∂A/∂μ_i) v).
Vec sigma_gradient(const AffineOperator& op, Complex z, const Parameter& mu);

struct SigmaOptions {
  double armijo = 1e-4;
  double shrink = 0.5;
  double initial_step = 1.0;
  double min_step = 1e-10;
  double min_projected_gradient = 1e-8;
  int max_iterations = 200;
  double gap_tol = 1e-8;
  double fd_step = 1e-6;
};

struct SigmaResult {
  double sigma = 0.0;
  Parameter argmin_mu;
  std::int64_t eigenproblem_count = 0;
  std::vector<std::pair<Parameter, double>> trace;           // best start
  std::vector<std::vector<std::pair<Parameter, double>>> traces;  // every start
};

/// Multistart projected gradient descent with Armijo backtracking.
SigmaResult sigma_lb_optimize(const AffineOperator& op, Complex z, const ParameterBox& box,
                              const std::vector<Parameter>& starts, const SigmaOptions& opts = {});

/// Box corners (2^min(p,5)) followed by the centre.
std::vector<Parameter> default_starts(const ParameterBox& box);

/// e^{−Re(z)t}·σ_min(A(μ) − zI).
double pseudospectrum_indicator(const AffineOperator& op, const Parameter& mu, Complex z, double t);

struct SigmaLowerBounds {
  Vec per_node;
  std::vector<Parameter> argmins;
  std::int64_t eigenproblem_count = 0;
};

/// Step 1: σ_LB at every quadrature node.
SigmaLowerBounds compute_sigma_lower_bounds(const AffineOperator& op, const QuadratureGrid& grid,
                                            const ParameterBox& box, const SigmaOptions& opts = {});

/// Exact min over Ξ of σ_min(z_j I − A(μ)) at every node.
SigmaLowerBounds exact_sigma_lower_bounds(const AffineOperator& op, const QuadratureGrid& grid,
                                          const ParameterGrid& xi);

struct ProfileCheck {
  bool accepted = false;
  Parameter worst_mu;
  double err_bound = 0.0;
  SigmaLowerBounds lbs;
  Vec bounds;  // bound evaluated at each argmin μ^i
};

/// One pass of steps 1–3 on the given grid.
ProfileCheck validate_profile(const DiscretizedModel& model, const QuadratureGrid& grid,
                              const ParameterBox& box, const TimeWindow& window, double tol,
                              const SigmaOptions& opts = {});

using ProfileRebuild = std::function<QuadratureGrid(const QuadratureGrid&, const ProfileCheck&)>;

struct ProfileOutcome {
  QuadratureGrid grid;
  ProfileCheck check;
  int rounds = 0;
};

/// Repeats validation with `rebuild` until accepted; ProfileFailure after
/// `max_rounds`. The default rebuild moves the vertex right.
ProfileOutcome construct_profile(const DiscretizedModel& model, QuadratureGrid grid,
                                 const ParameterBox& box, const TimeWindow& window, double tol,
                                 int max_rounds = 5, ProfileRebuild rebuild = {},
                                 const SigmaOptions& opts = {});

}  // namespace lapmor
