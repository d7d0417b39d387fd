#pragma once

// Multi-bias E-values.
//
// Setting every sensitivity parameter of a bias set to a common value x turns
// its bound into f(x) = x^n / (2x - 1)^k: each g-term contributes
// x^2 / (2x - 1), each risk-ratio factor contributes x, and an odds-ratio
// misclassification factor read on the square-root scale contributes x^2.
// The E-value is the x at which f(x) reaches the (oriented) observed ratio.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "multibias/bias_model.hpp"
#include "multibias/error.hpp"
#include "multibias/root_finding.hpp"

namespace multibias {

enum class EffectScale { RiskRatio, OddsRatio, HazardRatio };

struct EffectEstimate {
  EffectScale scale = EffectScale::RiskRatio;
  double point = 1.0;
  std::optional<double> lo;
  std::optional<double> hi;
  bool rare_outcome = false;  // odds ratios only

  static EffectEstimate RR(double point, std::optional<double> lo = std::nullopt,
                           std::optional<double> hi = std::nullopt) {
    return {EffectScale::RiskRatio, point, lo, hi, false};
  }
  static EffectEstimate OR(double point, bool rare, std::optional<double> lo = std::nullopt,
                           std::optional<double> hi = std::nullopt) {
    return {EffectScale::OddsRatio, point, lo, hi, rare};
  }
};

namespace detail {

inline void validate_estimate(const EffectEstimate& est) {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(est.point))
    throw Error(ErrorCode::DomainError, "estimate must be positive and finite");
  if (est.lo && !positive(*est.lo))
    throw Error(ErrorCode::DomainError, "lower limit must be positive and finite");
  if (est.hi && !positive(*est.hi))
    throw Error(ErrorCode::DomainError, "upper limit must be positive and finite");
  if ((est.lo && *est.lo > est.point) || (est.hi && *est.hi < est.point))
    throw Error(ErrorCode::DomainError, "expected lo <= estimate <= hi");
}

}  // namespace detail

/// Converts an estimate to the (approximate) risk-ratio scale. Odds ratios for
/// a rare outcome are read as risk ratios; otherwise the square root is taken.
inline EffectEstimate to_risk_ratio(const EffectEstimate& est) {
  if (est.scale == EffectScale::HazardRatio)
    throw Error(ErrorCode::DomainError,
                "hazard ratios are not supported; supply a risk ratio or odds ratio");
  detail::validate_estimate(est);
  EffectEstimate out = est;
  out.scale = EffectScale::RiskRatio;
  out.rare_outcome = false;
  if (est.scale == EffectScale::OddsRatio && !est.rare_outcome) {
    out.point = std::sqrt(est.point);
    if (out.lo) out.lo = std::sqrt(*out.lo);
    if (out.hi) out.hi = std::sqrt(*out.hi);
  }
  return out;
}

struct EValuePolynomial {
  int n = 0;  // numerator degree
  int k = 0;  // power of (2x - 1) in the denominator

  double operator()(double x) const { return std::pow(x, n) / std::pow(2.0 * x - 1.0, k); }
  double log_value(double x) const { return n * std::log(x) - k * std::log(2.0 * x - 1.0); }

  bool operator==(const EValuePolynomial&) const = default;
};

inline EValuePolynomial evalue_polynomial(const BiasSet& set) {
  EValuePolynomial poly;
  for (const auto& group : set.factor_groups()) {
    if (group.size() == 2) {
      poly.n += 2;
      poly.k += 1;
    } else {
      poly.n += set.parameters()[group[0]].evalue_degree;
    }
  }
  return poly;
}

namespace detail {

inline void validate_solve(const EValuePolynomial& poly, double target) {
  if (poly.n < 1 || poly.k < 0 || poly.n < 2 * poly.k)
    throw Error(ErrorCode::DomainError, "polynomial is not increasing on [1, inf)");
  if (!(target >= 1.0) || !std::isfinite(target))
    throw Error(ErrorCode::DomainError, "E-value target must be finite and >= 1");
}

inline double pair_evalue(double b) { return b + std::sqrt(b * (b - 1.0)); }

}  // namespace detail

/// Exact solution when one exists: pure risk-ratio products (k = 0) and
/// pure g-term products (n = 2k).
inline std::optional<double> solve_closed_form(const EValuePolynomial& poly, double target) {
  detail::validate_solve(poly, target);
  if (target == 1.0) return 1.0;
  if (poly.k == 0) return std::pow(target, 1.0 / poly.n);
  if (poly.n == 2 * poly.k)
    return detail::pair_evalue(poly.k == 1 ? target : std::pow(target, 1.0 / poly.k));
  return std::nullopt;
}

/// Bracketed bisection on log f, valid for every constructible polynomial.
inline double solve_by_bisection(const EValuePolynomial& poly, double target) {
  detail::validate_solve(poly, target);
  if (target == 1.0) return 1.0;
  const double log_target = std::log(target);
  auto f = [&poly](double x) { return poly.log_value(x); };
  auto bracket = roots::expand_upward(f, log_target, 1.0, 2.0);
  if (!bracket)
    throw Error(ErrorCode::DomainError, "could not bracket the E-value");
  return roots::bisect_increasing(f, log_target, *bracket);
}

inline double solve_polynomial(const EValuePolynomial& poly, double target) {
  if (auto x = solve_closed_form(poly, target)) return *x;
  return solve_by_bisection(poly, target);
}

struct EValueResult {
  double point_evalue = 1.0;
  std::optional<double> lo_evalue;
  std::optional<double> hi_evalue;
  std::vector<std::string> parameter_names;
  EffectEstimate risk_ratio;  // input on the risk-ratio scale, original orientation
  double true_value = 1.0;
};

/// E-value for the point estimate and for the confidence limit nearer the
/// null. Protective estimates are inverted first (the interval and the true
/// value with them); a target at or below 1 has E-value 1.
inline EValueResult multi_evalue(const BiasSet& set, const EffectEstimate& est,
                                 double true_value = 1.0) {
  if (!(true_value > 0.0) || !std::isfinite(true_value))
    throw Error(ErrorCode::DomainError, "true value must be positive and finite");
  EValueResult res;
  res.risk_ratio = to_risk_ratio(est);
  res.true_value = true_value;
  res.parameter_names = set.parameter_names();

  const auto& rr = res.risk_ratio;
  const bool protective = rr.point < 1.0;
  const double point = protective ? 1.0 / rr.point : rr.point;
  const double truth = protective ? 1.0 / true_value : true_value;
  std::optional<double> near;
  if (protective && rr.hi) near = 1.0 / *rr.hi;
  if (!protective && rr.lo) near = *rr.lo;

  const auto poly = evalue_polynomial(set);
  auto solve = [&](double value) {
    const double target = value / truth;
    return target <= 1.0 ? 1.0 : solve_polynomial(poly, target);
  };

  res.point_evalue = solve(point);
  if (near) {
    const double e = solve(*near);
    if (protective)
      res.hi_evalue = e;
    else
      res.lo_evalue = e;
  }
  return res;
}

struct CurveRow {
  double rr;
  std::string biases;
  double evalue;
};

inline std::vector<CurveRow> evalue_curve(const std::vector<BiasSet>& sets,
                                          const std::vector<double>& rr_values) {
  std::vector<CurveRow> rows;
  rows.reserve(sets.size() * rr_values.size());
  for (const auto& set : sets) {
    for (double rr : rr_values) {
      if (!(rr >= 1.0))
        throw Error(ErrorCode::DomainError, "curve risk ratios must be >= 1");
      rows.push_back({rr, set.label(), multi_evalue(set, EffectEstimate::RR(rr)).point_evalue});
    }
  }
  return rows;
}

}  // namespace multibias
