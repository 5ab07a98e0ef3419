#ifndef PROJFEAS_POLYNOMIAL_HPP
#define PROJFEAS_POLYNOMIAL_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace projfeas {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One term c * x^alpha of a polynomial.
struct Monomial {
  std::vector<int> exponents;
  double coefficient = 0.0;

  int total_degree() const;
  bool operator==(const Monomial&) const = default;
};

/// Sparse multivariate polynomial over R^n.
///
/// Terms are kept in graded lexicographic order with distinct exponent
/// vectors and nonzero coefficients, so two polynomials holding the same
/// terms evaluate bit-identically. Instances are immutable.
class Polynomial {
 public:
  /// The zero polynomial on R^dimension.
  explicit Polynomial(std::size_t dimension);

  /// Builds a polynomial from a term list. Terms sharing an exponent vector
  /// are merged; zero coefficients are dropped.
  /// Throws InputError on a dimension mismatch, a negative exponent or a
  /// non-finite coefficient.
  Polynomial(std::size_t dimension, std::vector<Monomial> terms);

  static Polynomial constant(std::size_t dimension, double value);
  /// The coordinate function x_index.
  static Polynomial variable(std::size_t dimension, std::size_t index);

  std::size_t dimension() const noexcept { return dimension_; }
  std::span<const Monomial> terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Maximum total degree over the terms; 0 for the zero polynomial.
  int degree() const noexcept { return degree_; }

  double evaluate(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  /// Symmetric by construction: the upper triangle is computed and mirrored.
  Matrix hessian(const Vector& x) const;

  /// Partial derivative with respect to x_index, as a polynomial.
  Polynomial derivative(std::size_t index) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double scale) const;
  friend Polynomial operator*(double scale, const Polynomial& p) { return p * scale; }

  bool operator==(const Polynomial&) const = default;

 private:
  void check_point(const Vector& x) const;

  std::size_t dimension_;
  std::vector<Monomial> terms_;
  int degree_ = 0;
};

/// Axis-aligned box [lo, hi].
struct Box {
  Vector lo;
  Vector hi;
};

struct ConvexityReport {
  double min_eigenvalue_seen = 0.0;
  /// Point where the Hessian had an eigenvalue below -1e-8, if any.
  std::optional<Vector> witness;

  bool suspicious() const noexcept { return witness.has_value(); }
};

/// Samples the Hessian at `samples` seeded uniform points of `box` and
/// reports the smallest eigenvalue seen. A heuristic, never a certificate.
ConvexityReport sample_convexity_check(const Polynomial& p, const Box& box,
                                       std::size_t samples, std::uint64_t seed);

}  // namespace projfeas

#endif  // PROJFEAS_POLYNOMIAL_HPP
