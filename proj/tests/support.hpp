#ifndef PROJFEAS_TESTS_SUPPORT_HPP
#define PROJFEAS_TESTS_SUPPORT_HPP

#include <initializer_list>
#include <random>

#include "projfeas/polynomial.hpp"

namespace testing_support {

inline projfeas::Vector vec(std::initializer_list<double> values) {
  projfeas::Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline projfeas::Polynomial poly(std::size_t n, std::initializer_list<std::pair<std::vector<int>, double>> terms) {
  std::vector<projfeas::Monomial> ms;
  for (const auto& [e, c] : terms) ms.push_back({e, c});
  return projfeas::Polynomial(n, std::move(ms));
}

inline projfeas::Polynomial random_polynomial(std::mt19937_64& rng, std::size_t n, int max_degree, int terms) {
  std::uniform_int_distribution<int> exp(0, max_degree);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::vector<projfeas::Monomial> ms;
  for (int t = 0; t < terms; ++t) {
    projfeas::Monomial m;
    int budget = exp(rng);
    for (std::size_t i = 0; i < n; ++i) {
      std::uniform_int_distribution<int> part(0, budget);
      const int e = i + 1 == n ? budget : part(rng);
      m.exponents.push_back(e);
      budget -= e;
    }
    m.coefficient = coef(rng);
    ms.push_back(std::move(m));
  }
  return projfeas::Polynomial(n, std::move(ms));
}

inline projfeas::Vector random_point(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  projfeas::Vector x(static_cast<Eigen::Index>(n));
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace testing_support

#endif
