#include "projfeas/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "projfeas/error.hpp"

namespace projfeas {
namespace {

// Graded lexicographic: lower total degree first, then lexicographic on the
// exponent vector.
struct GradedLexLess {
  bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
    const int da = std::accumulate(a.begin(), a.end(), 0);
    const int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db;
    return a < b;
  }
};

double ipow(double base, int exponent) {
  double result = 1.0;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

double term_value(const std::vector<int>& exponents, double coefficient, const Vector& x) {
  double v = coefficient;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] != 0) v *= ipow(x[static_cast<Eigen::Index>(i)], exponents[i]);
  }
  return v;
}

}  // namespace

int Monomial::total_degree() const {
  return std::accumulate(exponents.begin(), exponents.end(), 0);
}

Polynomial::Polynomial(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw InputError("polynomial dimension must be positive");
}

Polynomial::Polynomial(std::size_t dimension, std::vector<Monomial> terms)
    : Polynomial(dimension) {
  std::map<std::vector<int>, double, GradedLexLess> merged;
  for (auto& term : terms) {
    if (term.exponents.size() != dimension) {
      throw InputError("monomial has " + std::to_string(term.exponents.size()) +
                       " exponents, polynomial dimension is " + std::to_string(dimension));
    }
    if (!std::isfinite(term.coefficient)) throw InputError("monomial coefficient is not finite");
    if (std::any_of(term.exponents.begin(), term.exponents.end(), [](int e) { return e < 0; })) {
      throw InputError("monomial exponents must be non-negative");
    }
    merged[std::move(term.exponents)] += term.coefficient;
  }
  for (auto& [exponents, coefficient] : merged) {
    if (coefficient == 0.0) continue;
    if (!std::isfinite(coefficient)) throw InputError("merged coefficient overflowed");
    Monomial m{exponents, coefficient};
    degree_ = std::max(degree_, m.total_degree());
    terms_.push_back(std::move(m));
  }
}

Polynomial Polynomial::constant(std::size_t dimension, double value) {
  return Polynomial(dimension, {Monomial{std::vector<int>(dimension, 0), value}});
}

Polynomial Polynomial::variable(std::size_t dimension, std::size_t index) {
  if (index >= dimension) throw InputError("variable index out of range");
  std::vector<int> e(dimension, 0);
  e[index] = 1;
  return Polynomial(dimension, {Monomial{std::move(e), 1.0}});
}

void Polynomial::check_point(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dimension_) {
    throw InputError("point has dimension " + std::to_string(x.size()) +
                     ", polynomial expects " + std::to_string(dimension_));
  }
}

double Polynomial::evaluate(const Vector& x) const {
  check_point(x);
  double sum = 0.0;
  for (const auto& t : terms_) sum += term_value(t.exponents, t.coefficient, x);
  return sum;
}

Vector Polynomial::gradient(const Vector& x) const {
  check_point(x);
  Vector g = Vector::Zero(static_cast<Eigen::Index>(dimension_));
  std::vector<int> e;
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < dimension_; ++i) {
      const int ei = t.exponents[i];
      if (ei == 0) continue;
      e = t.exponents;
      e[i] -= 1;
      g[static_cast<Eigen::Index>(i)] += term_value(e, t.coefficient * ei, x);
    }
  }
  return g;
}

Matrix Polynomial::hessian(const Vector& x) const {
  check_point(x);
  const auto n = static_cast<Eigen::Index>(dimension_);
  Matrix h = Matrix::Zero(n, n);
  std::vector<int> e;
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < dimension_; ++i) {
      if (t.exponents[i] == 0) continue;
      for (std::size_t j = i; j < dimension_; ++j) {
        e = t.exponents;
        double factor = t.coefficient * e[i];
        e[i] -= 1;
        if (e[j] == 0) continue;
        factor *= e[j];
        e[j] -= 1;
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += term_value(e, factor, x);
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) h(j, i) = h(i, j);
  }
  return h;
}

Polynomial Polynomial::derivative(std::size_t index) const {
  if (index >= dimension_) throw InputError("derivative index out of range");
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    if (t.exponents[index] == 0) continue;
    Monomial m = t;
    m.coefficient *= m.exponents[index];
    m.exponents[index] -= 1;
    out.push_back(std::move(m));
  }
  return Polynomial(dimension_, std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.dimension_ != dimension_) throw InputError("polynomial dimension mismatch in sum");
  std::vector<Monomial> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return Polynomial(dimension_, std::move(all));
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + other * -1.0; }

Polynomial Polynomial::operator*(double scale) const {
  std::vector<Monomial> out = terms_;
  for (auto& m : out) m.coefficient *= scale;
  return Polynomial(dimension_, std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.dimension_ != dimension_) throw InputError("polynomial dimension mismatch in product");
  std::vector<Monomial> out;
  out.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      Monomial m{a.exponents, a.coefficient * b.coefficient};
      for (std::size_t i = 0; i < dimension_; ++i) m.exponents[i] += b.exponents[i];
      out.push_back(std::move(m));
    }
  }
  return Polynomial(dimension_, std::move(out));
}

ConvexityReport sample_convexity_check(const Polynomial& p, const Box& box, std::size_t samples,
                                       std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(p.dimension());
  if (samples == 0) throw InputError("convexity check needs at least one sample");
  if (box.lo.size() != n || box.hi.size() != n) throw InputError("box dimension mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(box.lo[i] <= box.hi[i])) throw InputError("box has lo > hi");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ConvexityReport report;
  report.min_eigenvalue_seen = std::numeric_limits<double>::infinity();
  Vector x(n);
  Vector worst;
  for (std::size_t s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(p.hessian(x), Eigen::EigenvaluesOnly);
    const double lowest = eig.eigenvalues().minCoeff();
    if (lowest < report.min_eigenvalue_seen) {
      report.min_eigenvalue_seen = lowest;
      worst = x;
    }
  }
  if (report.min_eigenvalue_seen < -1e-8) report.witness = worst;
  return report;
}

}  // namespace projfeas
