#pragma once

// Multiplicative bounding factors for a declared bias set.

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "multibias/bias_model.hpp"
#include "multibias/error.hpp"

namespace multibias {

using ParameterValues = std::map<std::string, double>;

/// g(a, b) = ab / (a + b - 1), the bounding factor of a parameter pair.
inline double g(double a, double b) {
  if (!(a >= 1.0) || !(b >= 1.0))
    throw Error(ErrorCode::DomainError, "g(a, b) requires a >= 1 and b >= 1");
  if (std::isinf(a) && std::isinf(b)) return a;
  if (std::isinf(a)) return b;
  if (std::isinf(b)) return a;
  // ab/(a+b-1) = 1 + 1/(1/p + 1/q + 1/pq): every step is monotone under
  // rounding, so g never decreases as an argument grows and never drops below 1.
  const double p = a - 1.0;
  const double q = b - 1.0;
  return 1.0 + 1.0 / (1.0 / p + 1.0 / q + 1.0 / (p * q));
}

struct BoundTerm {
  enum class Form { GTerm, Single };
  Form form = Form::Single;
  std::size_t first = 0;   // parameter index into the bias set
  std::size_t second = 0;  // GTerm only

  bool operator==(const BoundTerm&) const = default;
};

struct BoundExpression {
  std::vector<BoundTerm> terms;
  BiasSet bias_set;

  /// Product of the terms at `values`, indexed like `bias_set.parameters()`.
  double evaluate(const std::vector<double>& values) const {
    double product = 1.0;
    for (const auto& t : terms)
      product *= t.form == BoundTerm::Form::GTerm ? g(values.at(t.first), values.at(t.second))
                                                  : values.at(t.first);
    return product;
  }
};

inline BoundExpression bound_expression(const BiasSet& set) {
  BoundExpression expr{{}, set};
  for (const auto& group : set.factor_groups()) {
    if (group.size() == 2)
      expr.terms.push_back({BoundTerm::Form::GTerm, group[0], group[1]});
    else
      expr.terms.push_back({BoundTerm::Form::Single, group[0], group[0]});
  }
  return expr;
}

/// Orders `values` by the bias set's parameter list, rejecting unknown,
/// missing and sub-unit entries.
inline std::vector<double> ordered_values(const BiasSet& set, const ParameterValues& values) {
  for (const auto& [name, v] : values)
    if (!set.find(name))
      throw Error(ErrorCode::UnknownParameter, "unknown parameter " + name, name);

  std::vector<double> out;
  out.reserve(set.parameters().size());
  for (const auto& p : set.parameters()) {
    auto it = values.find(p.name);
    if (it == values.end())
      throw Error(ErrorCode::MissingParameter, "missing parameter " + p.name, p.name);
    if (std::isnan(it->second) || it->second < 1.0)
      throw Error(ErrorCode::DomainError,
                  "parameter " + p.name + " must be >= 1", p.name);
    out.push_back(it->second);
  }
  return out;
}

inline double multi_bound(const BiasSet& set, const ParameterValues& values) {
  return bound_expression(set).evaluate(ordered_values(set, values));
}

struct VaryAxis {
  std::string name;
  std::vector<double> values;
};

struct BoundGrid {
  VaryAxis rows;
  VaryAxis cols;
  std::vector<std::vector<double>> cells;  // cells[i][j] at (rows.values[i], cols.values[j])
};

inline BoundGrid grid_table(const BiasSet& set, const VaryAxis& rows, const VaryAxis& cols,
                            const ParameterValues& fixed) {
  if (rows.name == cols.name)
    throw Error(ErrorCode::DomainError, "the two varied parameters must differ", rows.name);
  for (const auto* axis : {&rows, &cols}) {
    if (!set.find(axis->name))
      throw Error(ErrorCode::UnknownParameter, "unknown parameter " + axis->name, axis->name);
    if (fixed.count(axis->name))
      throw Error(ErrorCode::DomainError,
                  axis->name + " is both varied and fixed", axis->name);
  }

  const auto expr = bound_expression(set);
  ParameterValues values = fixed;
  values[rows.name] = 1.0;
  values[cols.name] = 1.0;
  auto ordered = ordered_values(set, values);
  const std::size_t ri = *set.find(rows.name);
  const std::size_t ci = *set.find(cols.name);

  BoundGrid grid{rows, cols, {}};
  grid.cells.assign(rows.values.size(), std::vector<double>(cols.values.size()));
  for (std::size_t i = 0; i < rows.values.size(); ++i) {
    for (std::size_t j = 0; j < cols.values.size(); ++j) {
      ordered[ri] = rows.values[i];
      ordered[ci] = cols.values[j];
      if (std::isnan(ordered[ri]) || ordered[ri] < 1.0)
        throw Error(ErrorCode::DomainError, "parameter " + rows.name + " must be >= 1",
                    rows.name);
      if (std::isnan(ordered[ci]) || ordered[ci] < 1.0)
        throw Error(ErrorCode::DomainError, "parameter " + cols.name + " must be >= 1",
                    cols.name);
      grid.cells[i][j] = expr.evaluate(ordered);
    }
  }
  return grid;
}

struct AdjustedEstimate {
  double estimate;
  double lo;
  double hi;
  double bound;
};

/// Shifts an estimate and its interval toward the null by the bound: divides
/// when the point estimate is >= 1, multiplies when it is < 1.
inline AdjustedEstimate adjust_estimate(const BiasSet& set, const ParameterValues& values,
                                        double estimate, double lo, double hi) {
  if (!(estimate > 0.0) || !(lo > 0.0) || !(hi > 0.0))
    throw Error(ErrorCode::DomainError, "estimate and limits must be positive");
  if (!(lo <= estimate && estimate <= hi))
    throw Error(ErrorCode::DomainError, "expected lo <= estimate <= hi");
  const double b = multi_bound(set, values);
  if (estimate >= 1.0) return {estimate / b, lo / b, hi / b, b};
  return {estimate * b, lo * b, hi * b, b};
}

}  // namespace multibias
