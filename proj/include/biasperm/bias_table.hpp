#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "biasperm/errors.hpp"
#include "biasperm/permutation.hpp"
#include "biasperm/rational.hpp"

namespace biasperm {

/// The matrix {p_ij} with p_ji = 1 - p_ij, indexed by 1-based labels.
///
/// The upper triangle is authoritative. In exact mode the lower triangle is
/// rebuilt as 1 - p_ij so complementarity holds without rounding.
class BiasTable {
 public:
  BiasTable() = default;
  /// All off-diagonal entries start at 1/2.
  explicit BiasTable(int n);

  int size() const { return n_; }
  double operator()(int i, int j) const { return p_(i - 1, j - 1); }
  /// Sets p_ij and p_ji = 1 - p_ij. Requires i != j and p in [0, 1].
  void set(int i, int j, double p);

  template <class Scalar>
  Scalar entry(int i, int j) const {
    if (i < j) return scalar_from_double<Scalar>(p_(i - 1, j - 1));
    return Scalar(1) - scalar_from_double<Scalar>(p_(j - 1, i - 1));
  }

  const Eigen::MatrixXd& matrix() const { return p_; }

  bool is_positively_biased() const;
  /// Largest |p_ij + p_ji - 1| over off-diagonal pairs.
  double complementarity_defect() const;
  bool is_complementary(double tol = 1e-15) const { return complementarity_defect() <= tol; }

  /// {"n": n, "p": [p_12, p_13, ..., p_1n, p_23, ...]}.
  std::string to_json() const;
  static BiasTable from_json(const std::string& text);

 private:
  int n_ = 0;
  Eigen::MatrixXd p_;
};

/// Unnormalized product over position pairs a < b of p_{sigma(a), sigma(b)}.
template <class Scalar>
Scalar weight(const std::vector<int>& sigma, const BiasTable& P) {
  const int n = static_cast<int>(sigma.size());
  if (n != P.size()) throw InvalidArgument("permutation and bias table sizes differ");
  Scalar w(1);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) w *= P.entry<Scalar>(sigma[a], sigma[b]);
  return w;
}

template <class Scalar>
Scalar weight(const Permutation& sigma, const BiasTable& P) {
  return weight<Scalar>(sigma.entries(), P);
}

/// Natural log of the weight; -infinity marks a zero-weight permutation.
double log_weight(const std::vector<int>& sigma, const BiasTable& P);
double log_weight(const Permutation& sigma, const BiasTable& P);

}  // namespace biasperm
