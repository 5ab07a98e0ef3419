#ifndef PROJFEAS_TESTS_PROPERTIES_HPP
#define PROJFEAS_TESTS_PROPERTIES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "projfeas/catalog.hpp"
#include "projfeas/rates.hpp"
#include "projfeas/sets.hpp"
#include "support.hpp"

// Randomized property suites shared by the unit tests and the acceptance run.
namespace testing_support {

struct NamedSet {
  std::string label;
  projfeas::ConvexSet set;
};

// Every catalog set except the ex3.2 chain, whose solution set {0} has no
// Slater point and no well-conditioned projection.
inline std::vector<NamedSet> catalog_sets() {
  std::vector<NamedSet> out;
  for (const char* id : {"ex5.1", "ex5.3", "ex5.3:alpha=0", "ex5.5", "ex5.7", "ex5.7:d=4", "ex5.8", "ex5.8:n=3"}) {
    const auto e = projfeas::catalog::lookup(id);
    for (const auto& s : e.problem.sets()) out.push_back({e.id + "/" + s.name(), s});
  }
  return out;
}

struct ProjectionStats {
  std::string label;
  double member_residual = 0.0;  // max residual of projected points
  double idempotence = 0.0;      // max ||P(Px) - Px||
  double expansion = -1.0;       // max ||Px - Py|| - ||x - y||
  double variational = -1.0;     // max <x - Px, c - Px> over members c
};

inline std::vector<ProjectionStats> projection_properties(std::uint64_t seed, int trials = 200, int members = 50) {
  using projfeas::Vector;
  std::mt19937_64 rng(seed);
  std::vector<ProjectionStats> out;
  for (const auto& [label, set] : catalog_sets()) {
    const std::size_t n = set.dimension();
    ProjectionStats s{label};
    std::vector<Vector> cs;
    for (int i = 0; i < members; ++i) cs.push_back(projfeas::project(set, random_point(rng, n, -3.0, 3.0)));
    for (const auto& c : cs) s.member_residual = std::max(s.member_residual, set.residual(c));
    for (int t = 0; t < trials; ++t) {
      const Vector x = random_point(rng, n, -3.0, 3.0);
      const Vector y = random_point(rng, n, -3.0, 3.0);
      const Vector px = projfeas::project(set, x);
      const Vector py = projfeas::project(set, y);
      s.idempotence = std::max(s.idempotence, (projfeas::project(set, px) - px).norm());
      s.expansion = std::max(s.expansion, (px - py).norm() - (x - y).norm());
      if (t < 20) {
        for (const auto& c : cs) s.variational = std::max(s.variational, (x - px).dot(c - px));
      }
    }
    out.push_back(s);
  }
  return out;
}

struct GridStats {
  std::string label;
  double worst = 0.0;  // max |distance - brute force| over the queries
};

// Brute-force distance from the boundary cells of a 1e-3 grid on [-3, 3]^2.
inline std::vector<GridStats> grid_distance_errors(std::uint64_t seed, int queries = 20) {
  using projfeas::Vector;
  const double step = 1e-3;
  const int cells = 6000;
  std::mt19937_64 rng(seed);
  std::vector<GridStats> out;
  for (const auto& [label, set] : catalog_sets()) {
    if (set.dimension() != 2) continue;
    std::vector<char> inside(static_cast<std::size_t>(cells + 1) * (cells + 1));
    Vector g(2);
    for (int i = 0; i <= cells; ++i) {
      for (int j = 0; j <= cells; ++j) {
        g << -3.0 + i * step, -3.0 + j * step;
        inside[static_cast<std::size_t>(i) * (cells + 1) + j] = set.residual(g) <= 0.0;
      }
    }
    auto at = [&](int i, int j) { return inside[static_cast<std::size_t>(i) * (cells + 1) + j] != 0; };
    std::vector<Vector> boundary;
    for (int i = 0; i <= cells; ++i) {
      for (int j = 0; j <= cells; ++j) {
        if (!at(i, j)) continue;
        const bool edge = i == 0 || j == 0 || i == cells || j == cells || !at(i - 1, j) || !at(i + 1, j) ||
                          !at(i, j - 1) || !at(i, j + 1);
        if (edge) boundary.push_back(vec({-3.0 + i * step, -3.0 + j * step}));
      }
    }
    GridStats s{label, boundary.empty() ? std::numeric_limits<double>::infinity() : 0.0};
    for (int q = 0; q < queries && !boundary.empty(); ++q) {
      const Vector x = random_point(rng, 2, -1.5, 1.5);
      double brute = std::numeric_limits<double>::infinity();
      if (set.residual(x) <= 0.0) {
        brute = 0.0;
      } else {
        for (const auto& b : boundary) brute = std::min(brute, (x - b).norm());
      }
      s.worst = std::max(s.worst, std::abs(projfeas::distance(set, x) - brute));
    }
    out.push_back(s);
  }
  return out;
}

// Largest beta_k - bound_k over random sequences obeying
// beta_{k+1} <= beta_k (1 - delta_k beta_k^p).
inline double recurrence_worst_excess(std::uint64_t seed, int sequences = 1000) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < sequences; ++s) {
    const double p = 0.1 + 2.9 * u(rng);
    const double beta0 = 0.01 + 5.0 * u(rng);
    std::vector<double> deltas;
    std::vector<double> betas{beta0};
    for (int k = 0; k < 200; ++k) {
      const double b = betas.back();
      const double bp = std::pow(b, p);
      const double delta = std::min(1e6, bp > 0.0 ? u(rng) / bp * 0.99 : u(rng));
      const double slack = s % 3 == 0 ? 1.0 : u(rng);
      deltas.push_back(delta);
      betas.push_back(std::min(b * (1.0 - delta * bp) * slack, b * (1.0 - delta * bp)));
    }
    const auto bound = projfeas::recurrence_bound(beta0, p, deltas);
    for (std::size_t k = 1; k < betas.size(); ++k) worst = std::max(worst, betas[k] - bound[k - 1]);
  }
  return worst;
}

}  // namespace testing_support

#endif  // PROJFEAS_TESTS_PROPERTIES_HPP
