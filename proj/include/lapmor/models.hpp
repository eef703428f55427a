#pragma once

#include <string>
#include <vector>

#include "lapmor/model.hpp"

namespace lapmor {

/// European call under Black-Scholes, μ = (σ, r), centred differences on the
/// interior of [0, s_max] with n_h unknowns.
DiscretizedModel black_scholes(Index n_h, double s_max = 200.0, double strike = 100.0);

struct HestonOptions {
  Index n_s = 50;
  Index n_v = 20;
  double strike = 100.0;
  double s_max = 800.0;
  double v_max = 5.0;
  double r_f = 0.0;
  /// Values of (σ, r_d, κ, η, ρ) for coordinates that are not active.
  Vec reference = (Vec(5) << 0.3, 0.02, 2.0, 0.1, 0.21).finished();
  /// Indices into (σ, r_d, κ, η, ρ) forming the model parameter, in order.
  std::vector<int> active = {0, 1, 2, 3, 4};
  /// Box over the active coordinates; empty means the paper's full-range box.
  ParameterBox box;
};

/// Heston model on [0, s_max] × [0, v_max]. Unknowns sit at s_i = iΔs
/// (i = 1..n_s, s = s_max included) and v_j = jΔv (j = 0..n_v−1).
DiscretizedModel heston(const HestonOptions& opts);
DiscretizedModel heston(Index n_s, Index n_v, double strike = 100.0, double s_max = 800.0,
                        double v_max = 5.0);

/// Box of the (σ, r_d, κ, η, ρ) domain restricted to `active`.
ParameterBox heston_box(const std::vector<int>& active);
/// Whether 2κη > σ² holds at every corner of the box.
bool heston_feller_holds(const HestonOptions& opts);

/// Linear advection u_t + μ u_x = 0 on (0, 1], first-order upwind, μ > 0.
DiscretizedModel advection(Index n_h);

enum class Stepper { CrankNicolson, BackwardEuler, ForwardEuler };

std::string to_string(Stepper s);
Stepper stepper_from_string(const std::string& s);

struct Trajectory {
  Vec times;
  Mat states;  // N_h × |times|
  Stepper stepper = Stepper::CrankNicolson;
  double dt = 0.0;
};

/// Constant-step integration from t = 0 to t_end. Implicit steppers factor
/// once. `stride` keeps every stride-th state (the final state is always kept).
Trajectory step_reference(const DiscretizedModel& model, const Parameter& mu, Stepper stepper,
                          double dt, double t_end, Index stride = 1);

/// State at arbitrary times by linear interpolation inside a trajectory.
Mat sample_trajectory(const Trajectory& traj, const std::vector<double>& times);

struct HeavisideSnapshots {
  Mat time_domain;      // columns H(μt − x)
  CMat laplace_domain;  // columns e^{−xz/μ}/(|μ|z)
};

HeavisideSnapshots heaviside_snapshot_matrices(const std::vector<double>& mu_samples,
                                               const std::vector<double>& t_samples,
                                               const std::vector<Complex>& z_samples,
                                               const Vec& x_grid);

}  // namespace lapmor
