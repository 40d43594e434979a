#include "ballmapper/metric.hpp"

#include <algorithm>
#include <cmath>

#include "ballmapper/error.hpp"

namespace ballmapper {

std::string_view metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::euclidean:
      return "euclidean";
    case MetricKind::manhattan:
      return "manhattan";
    case MetricKind::chebyshev:
      return "chebyshev";
  }
  return "unknown";
}

MetricKind parse_metric(std::string_view name) {
  if (name == "euclidean") return MetricKind::euclidean;
  if (name == "manhattan") return MetricKind::manhattan;
  if (name == "chebyshev") return MetricKind::chebyshev;
  throw InvalidInput("unknown metric '" + std::string(name) + "'");
}

namespace detail {

double euclidean(const double* x, const double* y, std::size_t dim) {
  double sum = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double diff = x[j] - y[j];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double manhattan(const double* x, const double* y, std::size_t dim) {
  double sum = 0.0;
  for (std::size_t j = 0; j < dim; ++j) sum += std::abs(x[j] - y[j]);
  return sum;
}

double chebyshev(const double* x, const double* y, std::size_t dim) {
  double best = 0.0;
  for (std::size_t j = 0; j < dim; ++j) best = std::max(best, std::abs(x[j] - y[j]));
  return best;
}

}  // namespace detail

double distance(MetricKind kind, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidInput("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                       std::to_string(y.size()));
  }
  if (x.empty()) throw InvalidInput("vectors must have dimension >= 1");
  return detail::distance_unchecked(kind, x.data(), y.data(), x.size());
}

std::string_view axiom_name(Axiom axiom) {
  switch (axiom) {
    case Axiom::non_negativity:
      return "non-negativity";
    case Axiom::identity:
      return "identity";
    case Axiom::symmetry:
      return "symmetry";
    case Axiom::triangle:
      return "triangle";
  }
  return "unknown";
}

AxiomReport check_metric_axioms(const DistanceFunction& d,
                                const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw InvalidInput("axiom check needs at least one point");
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw InvalidInput("axiom check points differ in dimension");
  }

  const std::size_t n = points.size();
  std::vector<double> dm(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dm[i * n + j] = d(points[i], points[j]);

  AxiomReport report;
  constexpr double tol = kAxiomTolerance;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dij = dm[i * n + j];
      if (dij < -tol) report.violations.push_back({Axiom::non_negativity, {i, j}, dij, 0.0});
      const bool same = points[i] == points[j];
      if (same != (std::abs(dij) <= tol)) {
        report.violations.push_back({Axiom::identity, {i, j}, dij, 0.0});
      }
      if (i < j && std::abs(dij - dm[j * n + i]) > tol) {
        report.violations.push_back({Axiom::symmetry, {i, j}, dij, dm[j * n + i]});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const double lhs = dm[i * n + k];
        const double rhs = dm[i * n + j] + dm[j * n + k];
        if (lhs > rhs + tol) report.violations.push_back({Axiom::triangle, {i, j, k}, lhs, rhs});
      }
    }
  }
  return report;
}

AxiomReport check_metric_axioms(MetricKind kind,
                                const std::vector<std::vector<double>>& points) {
  return check_metric_axioms(
      [kind](std::span<const double> x, std::span<const double> y) { return distance(kind, x, y); },
      points);
}

}  // namespace ballmapper
