#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ballmapper {

enum class MetricKind { euclidean, manhattan, chebyshev };

std::string_view metric_name(MetricKind kind);

/// Parses "euclidean" | "manhattan" | "chebyshev". Throws InvalidInput otherwise.
MetricKind parse_metric(std::string_view name);

/// Distance between two equal-length vectors. Throws InvalidInput on a
/// dimension mismatch or empty vectors.
double distance(MetricKind kind, std::span<const double> x, std::span<const double> y);

namespace detail {

// Unchecked kernels. Callers guarantee x.size() == y.size().
double euclidean(const double* x, const double* y, std::size_t dim);
double manhattan(const double* x, const double* y, std::size_t dim);
double chebyshev(const double* x, const double* y, std::size_t dim);

inline double distance_unchecked(MetricKind kind, const double* x, const double* y,
                                 std::size_t dim) {
  switch (kind) {
    case MetricKind::euclidean:
      return euclidean(x, y, dim);
    case MetricKind::manhattan:
      return manhattan(x, y, dim);
    case MetricKind::chebyshev:
      return chebyshev(x, y, dim);
  }
  return 0.0;
}

}  // namespace detail

enum class Axiom { non_negativity, identity, symmetry, triangle };

std::string_view axiom_name(Axiom axiom);

struct AxiomViolation {
  Axiom axiom;
  std::vector<std::size_t> witness;  // point indices (2 for pairs, 3 for triples)
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AxiomReport {
  std::vector<AxiomViolation> violations;

  bool ok() const { return violations.empty(); }
};

using DistanceFunction =
    std::function<double(std::span<const double>, std::span<const double>)>;

inline constexpr double kAxiomTolerance = 1e-9;

/// Exhaustive axiom check: non-negativity, identity and symmetry over all
/// ordered pairs, triangle inequality over all ordered triples. The identity
/// axiom compares d(x, y) == 0 against bitwise equality of the inputs.
/// Comparisons use an absolute tolerance of kAxiomTolerance.
AxiomReport check_metric_axioms(const DistanceFunction& d,
                                const std::vector<std::vector<double>>& points);
AxiomReport check_metric_axioms(MetricKind kind,
                                const std::vector<std::vector<double>>& points);

}  // namespace ballmapper
