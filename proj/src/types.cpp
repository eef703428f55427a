#include "lapmor/types.hpp"

#include <random>

#include "lapmor/errors.hpp"

namespace lapmor {

ParameterBox::ParameterBox(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size() || lower.size() < 1)
    throw ConfigError("parameter box: bounds must have equal, positive length");
  for (Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i]))
      throw ConfigError("parameter box: lower bound exceeds upper bound in coordinate " +
                        std::to_string(i));
  }
}

bool ParameterBox::contains(const Parameter& mu, double slack) const {
  if (mu.size() != lower.size()) return false;
  for (Index i = 0; i < mu.size(); ++i) {
    if (!(mu[i] >= lower[i] - slack && mu[i] <= upper[i] + slack)) return false;
  }
  return true;
}

Parameter ParameterBox::clip(const Parameter& mu) const {
  return mu.cwiseMax(lower).cwiseMin(upper);
}

std::vector<Parameter> ParameterBox::corners(int max_dim_bits) const {
  const int p = static_cast<int>(dim());
  const int bits = std::min(p, max_dim_bits);
  std::vector<Parameter> out;
  out.reserve(std::size_t{1} << bits);
  for (unsigned mask = 0; mask < (1u << bits); ++mask) {
    Parameter c = center();
    for (int i = 0; i < bits; ++i) c[i] = (mask >> (bits - 1 - i)) & 1u ? upper[i] : lower[i];
    out.push_back(std::move(c));
  }
  return out;
}

ParameterGrid ParameterGrid::lattice(const ParameterBox& box, const std::vector<int>& per_dim) {
  const auto p = static_cast<std::size_t>(box.dim());
  if (per_dim.size() != p) throw ConfigError("lattice: one point count per dimension required");
  std::size_t total = 1;
  for (int n : per_dim) {
    if (n < 1) throw ConfigError("lattice: point counts must be positive");
    total *= static_cast<std::size_t>(n);
  }
  ParameterGrid grid;
  grid.provenance = GridProvenance::UniformLattice;
  grid.points.reserve(total);
  std::vector<int> idx(p, 0);
  for (std::size_t k = 0; k < total; ++k) {
    Parameter mu(static_cast<Index>(p));
    for (std::size_t i = 0; i < p; ++i) {
      const auto ii = static_cast<Index>(i);
      mu[ii] = per_dim[i] == 1 ? box.lower[ii]
                               : box.lower[ii] + (box.upper[ii] - box.lower[ii]) * idx[i] /
                                                     static_cast<double>(per_dim[i] - 1);
    }
    grid.points.push_back(std::move(mu));
    for (std::size_t i = p; i-- > 0;) {
      if (++idx[i] < per_dim[i]) break;
      idx[i] = 0;
    }
  }
  return grid;
}

ParameterGrid ParameterGrid::random(const ParameterBox& box, std::size_t count,
                                    std::uint64_t seed) {
  if (count == 0) throw ConfigError("random grid: count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ParameterGrid grid;
  grid.provenance = GridProvenance::UniformRandom;
  grid.seed = seed;
  for (std::size_t k = 0; k < count; ++k) {
    Parameter mu(box.dim());
    for (Index i = 0; i < box.dim(); ++i)
      mu[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * unit(rng);
    grid.points.push_back(std::move(mu));
  }
  return grid;
}

}  // namespace lapmor
