#include "biasperm/bias_table.hpp"

#include <cmath>
#include <limits>

#include "biasperm/errors.hpp"
#include "json.hpp"

namespace biasperm {

BiasTable::BiasTable(int n) : n_(n), p_(Eigen::MatrixXd::Constant(n, n, 0.5)) {
  if (n < 1) throw InvalidArgument("bias table size must be positive");
  p_.diagonal().setZero();
}

void BiasTable::set(int i, int j, double p) {
  if (i < 1 || j < 1 || i > n_ || j > n_ || i == j) throw InvalidArgument("bad bias table index");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("bias probability outside [0, 1]");
  if (i > j) {
    std::swap(i, j);
    p = 1.0 - p;
  }
  p_(i - 1, j - 1) = p;
  p_(j - 1, i - 1) = 1.0 - p;
}

bool BiasTable::is_positively_biased() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (p_(i, j) < 0.5) return false;
  return true;
}

double BiasTable::complementarity_defect() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) worst = std::max(worst, std::abs(p_(i, j) + p_(j, i) - 1.0));
  return worst;
}

std::string BiasTable::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  std::vector<double> upper;
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b) upper.push_back(p_(a, b));
  j["p"] = upper;
  return j.dump();
}

BiasTable BiasTable::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bias table JSON: ") + e.what());
  }
  if (!j.contains("n") || !j.contains("p")) throw InvalidArgument("bias table JSON needs n and p");
  const int n = j["n"].get<int>();
  const auto upper = j["p"].get<std::vector<double>>();
  if (upper.size() != static_cast<std::size_t>(n) * (n - 1) / 2) {
    throw InvalidArgument("bias table JSON: p has wrong length");
  }
  BiasTable P(n);
  std::size_t k = 0;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) P.set(a, b, upper[k++]);
  return P;
}

double log_weight(const std::vector<int>& sigma, const BiasTable& P) {
  if (static_cast<int>(sigma.size()) != P.size()) throw InvalidArgument("permutation and bias table sizes differ");
  double lw = 0.0;
  const int n = P.size();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double p = P(sigma[a], sigma[b]);
      if (p <= 0.0) return -std::numeric_limits<double>::infinity();
      lw += std::log(p);
    }
  }
  return lw;
}

double log_weight(const Permutation& sigma, const BiasTable& P) { return log_weight(sigma.entries(), P); }

}  // namespace biasperm
