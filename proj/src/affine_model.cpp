#include "lapmor/affine_model.hpp"

#include <cmath>

#include "lapmor/errors.hpp"

namespace lapmor {

namespace {

std::string shape_message(const char* what, Index got, Index want) {
  return std::string(what) + ": parameter has length " + std::to_string(got) + ", expected " +
         std::to_string(want);
}

}  // namespace

AffineOperator::AffineOperator(Index param_dim, std::vector<OperatorTerm> terms)
    : param_dim_(param_dim), terms_(std::move(terms)) {
  if (terms_.empty()) throw ConfigError("affine operator needs at least one term");
  if (param_dim_ < 1) throw ConfigError("affine operator: parameter dimension must be positive");
  dim_ = terms_.front().matrix.rows();
  for (const auto& t : terms_) {
    if (t.matrix.rows() != dim_ || t.matrix.cols() != dim_)
      throw ConfigError("affine operator: term '" + t.name + "' has inconsistent size");
    if (!t.coefficient) throw ConfigError("affine operator: term '" + t.name + "' lacks a coefficient");
  }
}

bool AffineOperator::has_gradients() const {
  for (const auto& t : terms_)
    if (!t.gradient) return false;
  return true;
}

void AffineOperator::check_parameter(const Parameter& mu) const {
  if (mu.size() != param_dim_) throw ParameterShapeError(shape_message("operator", mu.size(), param_dim_));
  if (!mu.allFinite()) throw ParameterShapeError("operator: parameter has non-finite entries");
}

Vec AffineOperator::coefficients(const Parameter& mu) const {
  check_parameter(mu);
  Vec theta(static_cast<Index>(terms_.size()));
  for (std::size_t q = 0; q < terms_.size(); ++q) theta[static_cast<Index>(q)] = terms_[q].coefficient(mu);
  return theta;
}

Mat AffineOperator::coefficient_jacobian(const Parameter& mu) const {
  check_parameter(mu);
  if (!has_gradients()) throw CapabilityError("operator has no coefficient gradients");
  Mat jac(static_cast<Index>(terms_.size()), param_dim_);
  for (std::size_t q = 0; q < terms_.size(); ++q) {
    Vec g = terms_[q].gradient(mu);
    if (g.size() != param_dim_)
      throw ParameterShapeError("gradient of term '" + terms_[q].name + "' has wrong length");
    jac.row(static_cast<Index>(q)) = g.transpose();
  }
  return jac;
}

AffineOperator operator+(const AffineOperator& a, const AffineOperator& b) {
  if (a.dim() != b.dim() || a.param_dim() != b.param_dim())
    throw ConfigError("cannot add affine operators of different shapes");
  std::vector<OperatorTerm> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return AffineOperator(a.param_dim(), std::move(terms));
}

SpMat assemble_operator(const AffineOperator& op, const Parameter& mu) {
  const Vec theta = op.coefficients(mu);
  SpMat out(op.dim(), op.dim());
  for (std::size_t q = 0; q < op.num_terms(); ++q) out += theta[static_cast<Index>(q)] * op.term(q).matrix;
  return out;
}

SpMat operator_derivative(const AffineOperator& op, const Parameter& mu, Index i) {
  if (!op.has_gradients()) throw CapabilityError("operator has no coefficient gradients");
  if (i < 0 || i >= op.param_dim())
    throw ParameterShapeError("derivative index " + std::to_string(i) + " out of range");
  const Mat jac = op.coefficient_jacobian(mu);
  SpMat out(op.dim(), op.dim());
  for (std::size_t q = 0; q < op.num_terms(); ++q) {
    const double w = jac(static_cast<Index>(q), i);
    if (w != 0.0) out += w * op.term(q).matrix;
  }
  return out;
}

AffineSource::AffineSource(Index dim, Index param_dim, std::vector<SourceTerm> terms,
                           std::vector<PoleFn> poles)
    : dim_(dim), param_dim_(param_dim), terms_(std::move(terms)), poles_(std::move(poles)) {
  for (const auto& t : terms_) {
    if (t.vector.size() != dim_)
      throw ConfigError("affine source: term '" + t.name + "' has inconsistent size");
    if (!t.mu_coefficient || !t.z_coefficient)
      throw ConfigError("affine source: term '" + t.name + "' lacks a coefficient");
  }
}

bool AffineSource::has_time_coefficients() const {
  for (const auto& t : terms_)
    if (!t.time_coefficient) return false;
  return true;
}

bool AffineSource::all_vectors_real() const {
  for (const auto& t : terms_)
    if (t.vector.imag().cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

void AffineSource::check_parameter(const Parameter& mu) const {
  if (mu.size() != param_dim_) throw ParameterShapeError(shape_message("source", mu.size(), param_dim_));
}

std::vector<Complex> AffineSource::pole_locations(const Parameter& mu) const {
  std::vector<Complex> out;
  out.reserve(poles_.size());
  for (const auto& p : poles_) out.push_back(p(mu));
  return out;
}

CVec AffineSource::coefficients(Complex z, const Parameter& mu) const {
  check_parameter(mu);
  for (const auto& p : poles_) {
    const Complex pole = p(mu);
    if (std::abs(z - pole) <= kPoleProximity)
      throw PoleProximityError("source evaluated at a pole: z is within 1e-12 of " +
                               std::to_string(pole.real()) + "+" + std::to_string(pole.imag()) + "i");
  }
  CVec coef(static_cast<Index>(terms_.size()));
  for (std::size_t q = 0; q < terms_.size(); ++q)
    coef[static_cast<Index>(q)] = terms_[q].mu_coefficient(mu) * terms_[q].z_coefficient(z, mu);
  return coef;
}

CVec assemble_source(const AffineSource& src, Complex z, const Parameter& mu) {
  const CVec coef = src.coefficients(z, mu);
  CVec out = CVec::Zero(src.dim());
  for (std::size_t q = 0; q < src.num_terms(); ++q) out += coef[static_cast<Index>(q)] * src.term(q).vector;
  return out;
}

Vec source_in_time(const AffineSource& src, double t, const Parameter& mu) {
  src.check_parameter(mu);
  if (!src.has_time_coefficients())
    throw CapabilityError("source has no time-domain coefficients");
  Vec out = Vec::Zero(src.dim());
  for (const auto& term : src.terms())
    out += term.mu_coefficient(mu) * term.time_coefficient(t, mu) * term.vector.real();
  return out;
}

}  // namespace lapmor
