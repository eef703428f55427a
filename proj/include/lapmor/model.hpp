#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lapmor/affine_model.hpp"
#include "lapmor/types.hpp"

namespace lapmor {

/// Grid metadata; `points[d]` unknowns along direction d.
struct MeshInfo {
  int dimension = 1;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> spacing;
  std::vector<Index> points;
};

/// μ-weighted initial-value term ϑ(μ)·u0_q.
struct InitialTerm {
  std::string name;
  ScalarFn coefficient;
  Vec vector;
};

/// Contour settings a model may prefer over the generic field-of-values rule.
struct ContourHint {
  std::optional<double> a1;
  std::optional<double> a2;
  std::optional<double> c;
  std::optional<int> nodes;
};

using SpectralProbe = std::function<double(const std::vector<Parameter>&)>;

/// Largest eigenvalue of (A + Aᵀ)/2. Dense below `dense_limit`, Lanczos above.
double numerical_abscissa(const SpMat& a, Index dense_limit = 2000);

/// Full-order problem u' = A(μ)u + b(t; μ), u(0) = u0(μ).
class DiscretizedModel {
 public:
  DiscretizedModel() = default;
  DiscretizedModel(std::string name, AffineOperator op, AffineSource source,
                   std::vector<InitialTerm> initial, MeshInfo mesh, ParameterBox box);

  const std::string& name() const { return name_; }
  const AffineOperator& op() const { return op_; }
  const AffineSource& source() const { return source_; }
  const std::vector<InitialTerm>& initial_terms() const { return initial_; }
  const MeshInfo& mesh() const { return mesh_; }
  const ParameterBox& box() const { return box_; }
  Index dim() const { return op_.dim(); }
  Index param_dim() const { return op_.param_dim(); }

  Vec initial_value(const Parameter& mu) const;
  /// u0(μ) + b̂(z; μ) as one affine source; initial terms carry θ ≡ 1.
  const AffineSource& laplace_rhs() const { return rhs_; }
  /// Time-domain source b(t; μ); zero when the model has no source terms.
  Vec source_at(double t, const Parameter& mu) const;
  bool has_source() const { return source_.num_terms() > 0; }

  /// Numerical-abscissa estimate over the probe set.
  double spectral_bound(const std::vector<Parameter>& probe) const;
  /// Corners, centre and a few seeded interior points of the default box.
  std::vector<Parameter> default_probe() const;

  ContourHint contour_hint;
  SpectralProbe spectral_probe;  // overrides the generic estimate when set
  Parameter reference_mu;        // used for node-count selection

 private:
  std::string name_;
  AffineOperator op_;
  AffineSource source_;
  std::vector<InitialTerm> initial_;
  AffineSource rhs_;
  MeshInfo mesh_;
  ParameterBox box_;
};

}  // namespace lapmor
