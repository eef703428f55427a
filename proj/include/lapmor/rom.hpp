#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lapmor/contour.hpp"
#include "lapmor/errors.hpp"
#include "lapmor/fom_laplace.hpp"
#include "lapmor/model.hpp"
#include "lapmor/models.hpp"

namespace lapmor {

struct SnapshotOrigin {
  Complex z;
  Parameter mu;
};

/// Orthonormal complex basis B (N_h × N_r).
struct ReducedBasis {
  CMat columns;
  std::vector<SnapshotOrigin> provenance;

  Index size() const { return columns.cols(); }
  Index dim() const { return columns.rows(); }
  double orthonormality_defect() const;
  /// Leading k columns.
  ReducedBasis truncated(Index k) const;
};

/// Left singular vectors with σ_i/σ_1 > tol_pod (at least one).
ReducedBasis pod(const CMat& snapshots, double tol_pod);

/// Gram–Schmidt with one re-orthogonalisation pass. Returns false (basis
/// unchanged) when the new direction is numerically dependent.
bool orthonormal_append(CMat& basis, const CVec& v, double drop_tol = 1e-14);

/// Operation tally of the online phase. `lift` collects the only work that
/// scales with N_h.
struct OnlineCounters {
  std::uint64_t reduced_ops = 0;
  std::uint64_t lift_ops = 0;
  std::uint64_t nh_ops = 0;  // any other N_h-sized work; must stay zero
};

/// Affine terms projected on a basis plus a factor of the residual Gramian.
/// The residual r = (zI − A(μ))Bβ − u0 − b̂ equals W·k for the stacked
/// matrix W = [b̂_1 … b̂_Qb, B, A_1B … A_QB] and a coefficient vector k built
/// from scalars only; we keep the triangular factor R of W = QR so that
/// ‖r‖ = ‖R·k‖ without cancellation.
class ReducedModel {
 public:
  ReducedModel() = default;

  Index size() const { return n_r; }
  std::size_t num_operator_terms() const { return op_terms.size(); }
  std::size_t num_rhs_terms() const { return rhs_terms.size(); }

  /// Re-binds coefficient functions, e.g. after loading from disk.
  void attach(const DiscretizedModel& model);
  bool attached() const { return !op_coeff_.empty() || op_terms.empty(); }

  CMat reduced_operator(const Parameter& mu, OnlineCounters* cnt = nullptr) const;
  CVec reduced_rhs(Complex z, const Parameter& mu, OnlineCounters* cnt = nullptr) const;
  Vec operator_coefficients(const Parameter& mu) const;
  CVec rhs_coefficients(Complex z, const Parameter& mu) const;

  std::vector<CMat> op_terms;   // B^H A_q B
  std::vector<CVec> rhs_terms;  // B^H b̂_q
  CMat identity;                // B^H B
  CMat r_factor;                // R of the stacked residual matrix
  bool conjugate_closed = false;  // span(B) contains conj(B): online solve may use half the nodes
  Index n_r = 0;
  Index param_dim = 0;

 private:
  friend ReducedModel galerkin_project(const DiscretizedModel&, const ReducedBasis&);
  std::vector<ScalarFn> op_coeff_;
  std::vector<ScalarFn> rhs_mu_coeff_;
  std::vector<ZCoefficientFn> rhs_z_coeff_;
  std::vector<PoleFn> poles_;
};

ReducedModel galerkin_project(const DiscretizedModel& model, const ReducedBasis& basis);

/// ‖(zI − A(μ))Bβ − u0(μ) − b̂(z; μ)‖ from reduced data only.
double residual_norm(const ReducedModel& red, const CVec& beta, Complex z, const Parameter& mu,
                     OnlineCounters* cnt = nullptr);

/// Reduced coefficients β_j for every node (Hessenberg form of A_r, one
/// O(N_r²) solve per node).
std::vector<CVec> online_coefficients(const ReducedModel& red, const QuadratureGrid& grid,
                                      const Parameter& mu, OnlineCounters* cnt = nullptr);

/// Single-node reduced solve (dense LU).
CVec node_coefficients(const ReducedModel& red, Complex z, const Parameter& mu);

/// u_r(t) = (c/(iN))·B·Σ_j e^{z_j t} β_j z'_j for each requested time.
Mat lift(const ReducedBasis& basis, const QuadratureGrid& grid, const std::vector<CVec>& beta,
         const std::vector<double>& times, OnlineCounters* cnt = nullptr);

/// Algorithm 3 for one μ and one time.
Vec online_solve(const ReducedModel& red, const ReducedBasis& basis, const QuadratureGrid& grid,
                 const Parameter& mu, double t, OnlineCounters* cnt = nullptr);
Mat online_solve(const ReducedModel& red, const ReducedBasis& basis, const QuadratureGrid& grid,
                 const Parameter& mu, const std::vector<double>& times,
                 OnlineCounters* cnt = nullptr);

enum class SigmaSource { Exact, Optimized, Supplied };

struct EstimatorContext {
  QuadratureGrid grid;
  TimeWindow window;
  Vec sigma_lb;
  SigmaSource source = SigmaSource::Supplied;

  void validate() const;  // throws InvalidContextError
  /// t_j = Λt0 if Re z_j ≥ 0, t0 otherwise.
  double node_time(Index j) const;
  /// (c/N)·e^{Re z_j t_j}·|z'_j|/σ_lb[j]
  double node_weight(Index j) const;
};

double error_estimator(const ReducedModel& red, const EstimatorContext& ctx, const Parameter& mu);
double error_estimator_node(const ReducedModel& red_j, const EstimatorContext& ctx, Index j,
                            const Parameter& mu);
/// Δ_j for every j from one shared reduced model (sums to Δ).
Vec error_estimator_terms(const ReducedModel& red, const EstimatorContext& ctx, const Parameter& mu);

struct GreedyStep {
  int iteration = 0;
  Parameter mu;
  double max_estimate = 0.0;
  Index n_r = 0;
  Index stored_snapshots = 0;
  double wall_seconds = 0.0;
};

struct GreedyLog {
  std::vector<GreedyStep> steps;
  std::vector<double> final_estimates;  // Δ over Ξ for the returned basis
};

struct GreedyOptions {
  int max_iterations = 100;
  bool verbose = false;
};

struct GreedyResult {
  ReducedBasis basis;
  GreedyLog log;
  CMat pool;  // every collected snapshot
};

/// Raised when the greedy loop cannot make progress: the cap is reached or
/// an already used parameter is selected again.
class GreedyStall : public Error {
 public:
  GreedyStall(const std::string& what, GreedyLog log, ReducedBasis basis)
      : Error(what), log_(std::move(log)), basis_(std::move(basis)) {}
  const GreedyLog& log() const { return log_; }
  const ReducedBasis& basis() const { return basis_; }

 private:
  GreedyLog log_;
  ReducedBasis basis_;
};

/// Laplace POD-greedy. Stops when max over Ξ of Δ ≤ tol.
GreedyResult greedy_pod(const DiscretizedModel& model, const EstimatorContext& ctx,
                        const ParameterGrid& xi, double tol, double tol_pod, const Parameter& mu_1,
                        const GreedyOptions& opts = {});

/// Per-node greedy at node j with tolerance tol/(N−1).
GreedyResult greedy_local(const DiscretizedModel& model, const EstimatorContext& ctx,
                          const ParameterGrid& xi, double tol, Index j, const Parameter& mu_1,
                          const GreedyOptions& opts = {});

struct LocalBases {
  std::vector<ReducedBasis> per_node;
  std::vector<ReducedModel> models;
  std::vector<GreedyLog> logs;

  Index stored_snapshots() const;
  Index max_size() const;
  /// Every node basis cut to at most k columns.
  LocalBases truncated(const DiscretizedModel& model, Index k) const;
};

LocalBases greedy_local_all(const DiscretizedModel& model, const EstimatorContext& ctx,
                            const ParameterGrid& xi, double tol, const Parameter& mu_1,
                            const GreedyOptions& opts = {});

Mat online_solve_local(const LocalBases& local, const QuadratureGrid& grid, const Parameter& mu,
                       const std::vector<double>& times);

/// Full-order reference solutions for a training set (one matrix per μ).
struct TruthSet {
  std::vector<double> times;
  std::vector<Mat> solutions;
};

TruthSet compute_truth(const DiscretizedModel& model, const QuadratureGrid& grid,
                       const ParameterGrid& xi, const std::vector<double>& times);

/// max over μ and t of ‖u_N − u_r‖/‖u_N‖.
double reduction_error(const TruthSet& truth, const ParameterGrid& xi,
                       const std::function<Mat(const Parameter&)>& reduced);

/// Real POD basis from stepper trajectories, with a Crank-Nicolson or
/// backward-Euler reduced integrator.
struct ClassicalRom {
  Mat basis;
  std::vector<Mat> op_terms;
  std::vector<Vec> init_terms;
  std::vector<Vec> source_terms;
  Stepper stepper = Stepper::CrankNicolson;
  double dt = 1e-4;
};

struct ClassicalOptions {
  Stepper stepper = Stepper::CrankNicolson;
  double dt = 1e-4;
  double t_end = 1.0;
  Index stride = 10;      // trajectory subsampling for the snapshot pool
  Index max_size = 60;
  double tol_pod = 1e-10;
  bool greedy = false;    // POD-greedy on projection error instead of one POD
};

ClassicalRom build_classical_rom(const DiscretizedModel& model, const ParameterGrid& training,
                                 const ClassicalOptions& opts);
ClassicalRom truncate_classical(const DiscretizedModel& model, const ClassicalRom& rom, Index k);
Mat classical_online(const ClassicalRom& rom, const DiscretizedModel& model, const Parameter& mu,
                     const std::vector<double>& times);

}  // namespace lapmor
