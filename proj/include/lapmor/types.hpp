#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace lapmor {

using Real = double;
using Complex = std::complex<double>;

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

// Column-major compressed storage throughout; the sparse LU wants CSC.
using SpMat = Eigen::SparseMatrix<Real>;
using CSpMat = Eigen::SparseMatrix<Complex>;

using Index = Eigen::Index;

/// A point of the parameter domain. Units are model specific.
using Parameter = Vec;

struct ParameterBox {
  Vec lower;
  Vec upper;

  ParameterBox() = default;
  ParameterBox(Vec lo, Vec hi);

  Index dim() const { return lower.size(); }
  bool contains(const Parameter& mu, double slack = 0.0) const;
  Parameter clip(const Parameter& mu) const;
  Parameter center() const { return 0.5 * (lower + upper); }
  /// Box corners, at most 2^min(p, max_dim_bits); ordered lexicographically by bit pattern.
  std::vector<Parameter> corners(int max_dim_bits = 5) const;
};

enum class GridProvenance { UniformLattice, UniformRandom };

struct ParameterGrid {
  std::vector<Parameter> points;
  GridProvenance provenance = GridProvenance::UniformLattice;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }
  const Parameter& operator[](std::size_t i) const { return points[i]; }

  /// Tensor lattice with `per_dim[i]` equispaced points in each direction
  /// (endpoints included); first coordinate varies slowest.
  static ParameterGrid lattice(const ParameterBox& box, const std::vector<int>& per_dim);
  static ParameterGrid random(const ParameterBox& box, std::size_t count, std::uint64_t seed);
};

}  // namespace lapmor
