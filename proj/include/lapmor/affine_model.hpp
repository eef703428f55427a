#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lapmor/types.hpp"

namespace lapmor {

using ScalarFn = std::function<double(const Parameter&)>;
using GradientFn = std::function<Vec(const Parameter&)>;
using ZCoefficientFn = std::function<Complex(Complex, const Parameter&)>;
using TimeCoefficientFn = std::function<double(double, const Parameter&)>;
using PoleFn = std::function<Complex(const Parameter&)>;

/// One term ϑ_q(μ)·A_q of an affine operator.
struct OperatorTerm {
  std::string name;
  ScalarFn coefficient;
  SpMat matrix;
  GradientFn gradient;  // optional; empty when the model does not provide it
};

/// A(μ) = Σ_q ϑ_q(μ) A_q with parameter-independent sparse A_q.
class AffineOperator {
 public:
  AffineOperator() = default;
  AffineOperator(Index param_dim, std::vector<OperatorTerm> terms);

  Index dim() const { return dim_; }
  Index param_dim() const { return param_dim_; }
  std::size_t num_terms() const { return terms_.size(); }
  const OperatorTerm& term(std::size_t q) const { return terms_[q]; }
  const std::vector<OperatorTerm>& terms() const { return terms_; }
  bool has_gradients() const;

  /// ϑ_q(μ) for every q. Throws ParameterShapeError on arity mismatch.
  Vec coefficients(const Parameter& mu) const;
  /// Q_A × p matrix of ∂ϑ_q/∂μ_i.
  Mat coefficient_jacobian(const Parameter& mu) const;

  void check_parameter(const Parameter& mu) const;

  /// Term-wise concatenation of two operators of equal size and arity.
  friend AffineOperator operator+(const AffineOperator& a, const AffineOperator& b);

 private:
  Index dim_ = 0;
  Index param_dim_ = 0;
  std::vector<OperatorTerm> terms_;
};

/// Σ_q ϑ_q(μ) A_q.
SpMat assemble_operator(const AffineOperator& op, const Parameter& mu);

/// ∂A/∂μ_i = Σ_q (∂ϑ_q/∂μ_i)(μ) A_q, with 0-based i.
SpMat operator_derivative(const AffineOperator& op, const Parameter& mu, Index i);

/// One term ϑ_q(μ)·θ_q(z; μ)·b̂_q of a Laplace-domain source. `time_coefficient`
/// is the time-domain counterpart of θ_q and is only needed by time steppers.
struct SourceTerm {
  std::string name;
  ScalarFn mu_coefficient;
  ZCoefficientFn z_coefficient;
  CVec vector;
  TimeCoefficientFn time_coefficient;
};

/// b̂(z; μ) = Σ_q ϑ_q(μ) θ_q(z; μ) b̂_q together with the μ-dependent poles of
/// the θ_q, which every integration contour has to keep on its left.
class AffineSource {
 public:
  static constexpr double kPoleProximity = 1e-12;

  AffineSource() = default;
  AffineSource(Index dim, Index param_dim, std::vector<SourceTerm> terms,
               std::vector<PoleFn> poles = {});

  Index dim() const { return dim_; }
  Index param_dim() const { return param_dim_; }
  std::size_t num_terms() const { return terms_.size(); }
  const SourceTerm& term(std::size_t q) const { return terms_[q]; }
  const std::vector<SourceTerm>& terms() const { return terms_; }
  const std::vector<PoleFn>& poles() const { return poles_; }
  bool has_time_coefficients() const;
  bool all_vectors_real() const;

  /// ϑ_q(μ)·θ_q(z; μ) for every q, after the pole check.
  CVec coefficients(Complex z, const Parameter& mu) const;
  std::vector<Complex> pole_locations(const Parameter& mu) const;
  void check_parameter(const Parameter& mu) const;

 private:
  Index dim_ = 0;
  Index param_dim_ = 0;
  std::vector<SourceTerm> terms_;
  std::vector<PoleFn> poles_;
};

/// Σ_q ϑ_q(μ)·θ_q(z; μ)·b̂_q. Throws PoleProximityError near a declared pole.
CVec assemble_source(const AffineSource& src, Complex z, const Parameter& mu);

/// Time-domain source b(t; μ) = Σ_q ϑ_q(μ)·b_q(t; μ)·Re(b̂_q).
Vec source_in_time(const AffineSource& src, double t, const Parameter& mu);

}  // namespace lapmor
