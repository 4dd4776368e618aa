#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace rdag {

using VertexId = int;

/// Largest state dimension supported; vectors live on the stack up to this size.
inline constexpr int kMaxDimension = 8;

/// Dimension-generic state vector (tau, offsets, inputs). No heap allocation.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDimension, 1>;

inline Vec zero_vec(int dim) { return Vec::Zero(dim); }

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

inline Vec make_vec(const std::vector<double>& xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t k = 0; k < xs.size(); ++k) v[static_cast<Eigen::Index>(k)] = xs[k];
  return v;
}

inline std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace rdag
