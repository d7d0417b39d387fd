#pragma once

// Brute-force checks of the bounds on small, fully enumerated populations.
//
// A World is a joint distribution over (U_c, U_s, A, Y, S, M) built from
// conditional probability tables that follow the causal ordering
//
//   U_c -> A -> U_s -> Y -> M -> S     (S after M only when selection acts
//                                        on a misclassified exposure)
//
// so the independences each bound assumes hold exactly by construction. M is
// the misclassified outcome Y* or exposure A*, or identically 0 when no
// misclassification is modelled. Every quantity below is an exact population
// functional of the table; there is no sampling.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "multibias/bias_model.hpp"
#include "multibias/bound.hpp"
#include "multibias/error.hpp"

namespace multibias::oracle {

enum class SelectionMode { None, General, Selected };
enum class MeasurementMode { None, Outcome, Exposure };

/// Strata lighter than this are treated as empty.
inline constexpr double kMinMass = 1e-9;
/// Arithmetic slack allowed when checking an exact bound.
inline constexpr double kBoundSlack = 1e-12;

struct WorldConfig {
  bool confounding = true;
  /// None means everyone is selected (S = 1).
  SelectionMode selection = SelectionMode::General;
  MeasurementMode misclassification = MeasurementMode::None;
  /// Misclassification arises before selection.
  bool misclassification_first = false;
  int confounder_levels = 0;  // 0 draws |U_c| from {2, 3}
  int selection_levels = 0;   // 0 draws |U_s| from {2, 3}
  /// Upper limit on P(Y = 1 | A, U_c, U_s).
  double rare_outcome_ceiling = 1.0;

  bool operator==(const WorldConfig&) const = default;
};

/// Conditional probability tables, flattened row-major in the listed order.
struct WorldTables {
  int confounder_levels = 2;
  int selection_levels = 2;
  std::vector<double> confounder;        // P(U_c = i)                          [i]
  std::vector<double> exposure;          // P(A = 1 | U_c = i)                  [i]
  std::vector<double> selection_factor;  // P(U_s = j | A = a, U_c = i)         [a][i][j]
  std::vector<double> selection;         // P(S = 1 | E = e, U_c = i, U_s = j)  [e][i][j]
                                         //   E is A*, when selection acts on it, else A
  std::vector<double> outcome;           // P(Y = 1 | A = a, U_c = i, U_s = j)  [a][i][j]
  std::vector<double> measurement;       // P(M = 1 | A = a, Y = y, S = s)      [a][y][s]
};

struct Cell {
  int uc, us, a, y, s, m;
};

inline bool selection_on_misclassified_exposure(const WorldConfig& c) {
  return c.misclassification_first && c.selection == SelectionMode::General &&
         c.misclassification == MeasurementMode::Exposure;
}

class World {
 public:
  static World from_tables(const WorldConfig& config, WorldTables tables) {
    World w;
    w.config_ = config;
    w.tables_ = std::move(tables);
    w.validate();
    w.build_joint();
    return w;
  }

  const WorldConfig& config() const noexcept { return config_; }
  const WorldTables& tables() const noexcept { return tables_; }
  int confounder_levels() const noexcept { return tables_.confounder_levels; }
  int selection_levels() const noexcept { return tables_.selection_levels; }

  double probability(const Cell& c) const { return joint_[index(c)]; }
  const std::vector<double>& joint() const noexcept { return joint_; }

  template <class Pred>
  double mass(Pred&& pred) const {
    double total = 0.0;
    for_each_cell([&](const Cell& c, double p) {
      if (pred(c)) total += p;
    });
    return total;
  }

  /// P(event | given); throws DegenerateStratum when `given` is (nearly) empty.
  template <class Event, class Given>
  double conditional(Event&& event, Given&& given) const {
    double num = 0.0, den = 0.0;
    for_each_cell([&](const Cell& c, double p) {
      if (!given(c)) return;
      den += p;
      if (event(c)) num += p;
    });
    if (den < kMinMass)
      throw Error(ErrorCode::DegenerateStratum, "conditioning stratum has no mass");
    return num / den;
  }

  template <class Fn>
  void for_each_cell(Fn&& fn) const {
    std::size_t i = 0;
    for (int uc = 0; uc < tables_.confounder_levels; ++uc)
      for (int us = 0; us < tables_.selection_levels; ++us)
        for (int a = 0; a < 2; ++a)
          for (int y = 0; y < 2; ++y)
            for (int s = 0; s < 2; ++s)
              for (int m = 0; m < 2; ++m) fn(Cell{uc, us, a, y, s, m}, joint_[i++]);
  }

 private:
  World() = default;

  std::size_t index(const Cell& c) const {
    const int ns = tables_.selection_levels;
    return static_cast<std::size_t>(
        (((((c.uc * ns + c.us) * 2 + c.a) * 2 + c.y) * 2 + c.s) * 2) + c.m);
  }

  void validate() const {
    const auto& t = tables_;
    const int nc = t.confounder_levels, ns = t.selection_levels;
    auto fail = [](const std::string& what) {
      throw Error(ErrorCode::DomainError, "invalid world tables: " + what);
    };
    if (nc < 1 || ns < 1) fail("support sizes must be positive");
    auto sized = [](const std::vector<double>& v, int n) {
      return v.size() == static_cast<std::size_t>(n);
    };
    if (!sized(t.confounder, nc) || !sized(t.exposure, nc) ||
        !sized(t.selection_factor, 2 * nc * ns) || !sized(t.selection, 2 * nc * ns) ||
        !sized(t.outcome, 2 * nc * ns) || !sized(t.measurement, 8))
      fail("table sizes do not match the support");
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    for (const auto* v : {&t.confounder, &t.exposure, &t.selection_factor, &t.selection,
                          &t.outcome, &t.measurement})
      if (!std::all_of(v->begin(), v->end(), prob)) fail("entries must lie in [0, 1]");
    for (double p : t.exposure)
      if (p <= 0.0 || p >= 1.0) fail("positivity requires 0 < P(A = 1 | U_c) < 1");

    auto near = [](double x, double y) { return std::abs(x - y) <= 1e-12; };
    double sum = 0.0;
    for (double p : t.confounder) sum += p;
    if (!near(sum, 1.0)) fail("P(U_c) must sum to 1");
    for (int a = 0; a < 2; ++a)
      for (int i = 0; i < nc; ++i) {
        double s = 0.0;
        for (int j = 0; j < ns; ++j) s += t.selection_factor[(a * nc + i) * ns + j];
        if (!near(s, 1.0)) fail("P(U_s | A, U_c) must sum to 1");
      }

    // Declared independences.
    const auto& c = config_;
    if (!c.confounding)
      for (int i = 1; i < nc; ++i)
        if (t.exposure[i] != t.exposure[0]) fail("A must not depend on U_c without confounding");
    if (c.selection == SelectionMode::None)
      for (double p : t.selection)
        if (p != 1.0) fail("P(S = 1) must be 1 without selection");
    const bool s_ignores_uc = c.selection == SelectionMode::General ||
                              (c.selection == SelectionMode::Selected && !c.confounding);
    if (s_ignores_uc)
      for (int e = 0; e < 2; ++e)
        for (int i = 1; i < nc; ++i)
          for (int j = 0; j < ns; ++j)
            if (t.selection[(e * nc + i) * ns + j] != t.selection[(e * nc) * ns + j])
              fail("S must not depend on U_c given (A, U_s)");
    if (c.selection == SelectionMode::Selected)
      for (std::size_t k = 0; k < static_cast<std::size_t>(nc * ns); ++k)
        if (t.selection_factor[k] != t.selection_factor[nc * ns + k])
          fail("U_s must not depend on A when targeting the selected population");
    if (c.misclassification_first)
      for (int k = 0; k < 4; ++k)
        if (t.measurement[2 * k] != t.measurement[2 * k + 1])
          fail("measurement must not depend on S when it precedes selection");
  }

  void build_joint() {
    const auto& t = tables_;
    const int nc = t.confounder_levels, ns = t.selection_levels;
    const bool s_on_m = selection_on_misclassified_exposure(config_);
    const bool measured = config_.misclassification != MeasurementMode::None;
    auto bern = [](double p1, int v) { return v ? p1 : 1.0 - p1; };

    joint_.assign(static_cast<std::size_t>(nc * ns * 16), 0.0);
    for (int uc = 0; uc < nc; ++uc)
      for (int us = 0; us < ns; ++us)
        for (int a = 0; a < 2; ++a)
          for (int y = 0; y < 2; ++y)
            for (int s = 0; s < 2; ++s)
              for (int m = 0; m < 2; ++m) {
                const int e = s_on_m ? m : a;
                double p = t.confounder[uc] * bern(t.exposure[uc], a) *
                           t.selection_factor[(a * nc + uc) * ns + us] *
                           bern(t.outcome[(a * nc + uc) * ns + us], y) *
                           bern(t.selection[(e * nc + uc) * ns + us], s);
                p *= measured ? bern(t.measurement[(a * 2 + y) * 2 + s], m) : (m == 0 ? 1.0 : 0.0);
                joint_[index(Cell{uc, us, a, y, s, m})] = p;
              }
  }

  WorldConfig config_;
  WorldTables tables_;
  std::vector<double> joint_;
};

// ---------------------------------------------------------------------------
// Bias sets matching a world's structure

inline BiasSet natural_bias_set(const WorldConfig& c) {
  std::vector<BiasSpec> specs;
  if (c.confounding) specs.emplace_back(Confounding{});
  std::optional<BiasSpec> sel, mis;
  if (c.selection == SelectionMode::General) sel = Selection{};
  if (c.selection == SelectionMode::Selected)
    sel = Selection{SelectionPopulation::Selected, RiskDirection::None, false};
  if (c.misclassification == MeasurementMode::Outcome)
    mis = Misclassification{MisclassifiedVariable::Outcome, false, false};
  if (c.misclassification == MeasurementMode::Exposure)
    mis = Misclassification{MisclassifiedVariable::Exposure, true, false};
  if (c.misclassification_first) std::swap(sel, mis);
  if (sel) specs.push_back(*sel);
  if (mis) specs.push_back(*mis);
  if (specs.empty())
    throw Error(ErrorCode::InfeasibleConfig, "world config activates no bias structure");
  return build_bias_set(specs);
}

struct NamedStructure {
  const char* name;
  WorldConfig config;
};

inline const std::vector<NamedStructure>& named_structures() {
  using M = MeasurementMode;
  using S = SelectionMode;
  static const std::vector<NamedStructure> all = {
      {"confounding", {true, S::None, M::None, false}},
      {"selection", {false, S::General, M::None, false}},
      {"selected", {false, S::Selected, M::None, false}},
      {"confounding-selection", {true, S::General, M::None, false}},
      {"result1", {true, S::General, M::Outcome, false}},
      {"result1-alt", {true, S::General, M::Outcome, true}},
      {"result2", {true, S::General, M::Exposure, false}},
      {"result2-alt", {true, S::General, M::Exposure, true}},
      {"result3", {true, S::Selected, M::Outcome, false}},
      {"result3-exposure", {true, S::Selected, M::Exposure, false}},
  };
  return all;
}

inline WorldConfig structure_config(const std::string& name) {
  for (const auto& s : named_structures())
    if (name == s.name) return s.config;
  throw Error(ErrorCode::DomainError, "unknown structure " + name, name);
}

// ---------------------------------------------------------------------------
// Compatibility between a world and the assumptions of a bias set

namespace detail {

inline bool is_exposure(const Cell& c, bool use_m, int v) { return (use_m ? c.m : c.a) == v; }
inline bool is_outcome(const Cell& c, bool use_m, int v) { return (use_m ? c.m : c.y) == v; }

/// Exposure and outcome variables seen by the selection layer.
struct SelectionVariables {
  bool exposure_is_m = false;
  bool outcome_is_m = false;
};

inline SelectionVariables selection_variables(const BiasSet& set) {
  SelectionVariables v;
  if (set.declared_before(BiasKind::Misclassification, BiasKind::Selection)) {
    const auto* m = set.get<Misclassification>();
    v.exposure_is_m = m->variable == MisclassifiedVariable::Exposure;
    v.outcome_is_m = m->variable == MisclassifiedVariable::Outcome;
  }
  return v;
}

inline void mismatch(const std::string& why) {
  throw Error(ErrorCode::StructureMismatch, "world does not satisfy the bias set: " + why);
}

inline void check_compatible(const World& w, const BiasSet& set) {
  const auto& c = w.config();
  const auto* sel = set.get<Selection>();
  const auto* mis = set.get<Misclassification>();

  if (c.confounding && !set.has(BiasKind::Confounding)) mismatch("confounding is present");

  if (c.selection != SelectionMode::None) {
    if (!sel) mismatch("selection bias is present");
    const bool selected = sel->population == SelectionPopulation::Selected;
    if (selected != (c.selection == SelectionMode::Selected))
      mismatch("selection population differs");
  }

  const MeasurementMode declared =
      !mis ? MeasurementMode::None
           : (mis->variable == MisclassifiedVariable::Outcome ? MeasurementMode::Outcome
                                                              : MeasurementMode::Exposure);
  if (declared != c.misclassification) mismatch("misclassified variable differs");
  if (mis && sel && c.selection != SelectionMode::None &&
      set.declared_before(BiasKind::Misclassification, BiasKind::Selection) !=
          c.misclassification_first)
    mismatch("order of selection and misclassification differs");

  // A risk-direction simplification drops one selection factor; that factor
  // must really be <= 1 in this world.
  if (sel && sel->direction != RiskDirection::None && c.selection != SelectionMode::None) {
    const auto v = selection_variables(set);
    const int dropped = sel->direction == RiskDirection::IncreasedRisk ? 0 : 1;
    auto ex = [&](const Cell& x) { return is_exposure(x, v.exposure_is_m, dropped); };
    const double selected_risk = w.conditional(
        [&](const Cell& x) { return is_outcome(x, v.outcome_is_m, 1); },
        [&](const Cell& x) { return ex(x) && x.s == 1; });
    const double total_risk =
        w.conditional([&](const Cell& x) { return is_outcome(x, v.outcome_is_m, 1); }, ex);
    const bool ok = dropped == 0 ? selected_risk >= total_risk : selected_risk <= total_risk;
    if (!ok) mismatch("risk-direction assumption fails");
  }
}

inline double safe_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

inline double max_over_min(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return safe_ratio(*hi, *lo);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact sensitivity parameters

inline ParameterValues extract_parameters(const World& w, const BiasSet& set) {
  using detail::is_exposure;
  using detail::is_outcome;
  detail::check_compatible(w, set);

  const int nc = w.confounder_levels(), ns = w.selection_levels();
  const auto sv = detail::selection_variables(set);
  const bool mis_in_selected =
      set.declared_before(BiasKind::Selection, BiasKind::Misclassification);
  auto in_s = [mis_in_selected](const Cell& c) { return !mis_in_selected || c.s == 1; };
  auto y1 = [](const Cell& c) { return c.y == 1; };
  auto m1 = [](const Cell& c) { return c.m == 1; };

  ParameterValues out;
  for (const auto& p : set.parameters()) {
    const std::string& n = p.name;
    double v = 1.0;

    if (n == "RRAUc") {
      std::vector<double> r;
      for (int u = 0; u < nc; ++u) {
        auto uc = [u](const Cell& c) { return c.uc == u; };
        r.push_back(detail::safe_ratio(
            w.conditional(uc, [](const Cell& c) { return c.a == 1; }),
            w.conditional(uc, [](const Cell& c) { return c.a == 0; })));
      }
      v = *std::max_element(r.begin(), r.end());
    } else if (n == "RRUcY") {
      v = 0.0;
      for (int a = 0; a < 2; ++a) {
        std::vector<double> risk;
        for (int u = 0; u < nc; ++u)
          risk.push_back(w.conditional(y1, [a, u](const Cell& c) { return c.a == a && c.uc == u; }));
        v = std::max(v, detail::max_over_min(risk));
      }
    } else if (n == "RRUsYA1" || n == "RRUsYA0") {
      const int a = n.back() - '0';
      std::vector<double> risk;
      for (int u = 0; u < ns; ++u)
        risk.push_back(w.conditional(
            [&](const Cell& c) { return is_outcome(c, sv.outcome_is_m, 1); },
            [&](const Cell& c) { return is_exposure(c, sv.exposure_is_m, a) && c.us == u; }));
      v = detail::max_over_min(risk);
    } else if (n == "RRSUsA1" || n == "RRSUsA0") {
      // A = 1 compares S = 1 to S = 0; A = 0 compares S = 0 to S = 1.
      const int a = n.back() - '0';
      auto ex = [&](const Cell& c) { return is_exposure(c, sv.exposure_is_m, a); };
      const double unselected = w.mass([&](const Cell& c) { return ex(c) && c.s == 0; });
      if (unselected > 0.0) {
        const int top = a == 1 ? 1 : 0;
        v = 0.0;
        for (int u = 0; u < ns; ++u) {
          auto us = [u](const Cell& c) { return c.us == u; };
          const double num = w.conditional(us, [&](const Cell& c) { return ex(c) && c.s == top; });
          const double den =
              w.conditional(us, [&](const Cell& c) { return ex(c) && c.s == 1 - top; });
          v = std::max(v, detail::safe_ratio(num, den));
        }
      }
    } else if (n == "RRSYA1" || n == "RRSYA0") {
      // S = U: selection itself is the selection factor.
      const int a = n.back() - '0';
      std::vector<double> risk;
      for (int s = 0; s < 2; ++s) {
        auto stratum = [&](const Cell& c) { return is_exposure(c, sv.exposure_is_m, a) && c.s == s; };
        if (w.mass(stratum) > 0.0)
          risk.push_back(w.conditional([&](const Cell& c) { return is_outcome(c, sv.outcome_is_m, 1); },
                                       stratum));
      }
      v = detail::max_over_min(risk);
    } else if (n == "RRAUscS" || n == "RRAUsS") {
      const bool joint = n == "RRAUscS";
      v = 0.0;
      for (int i = 0; i < (joint ? nc : 1); ++i)
        for (int j = 0; j < ns; ++j) {
          auto u = [&](const Cell& c) { return (!joint || c.uc == i) && c.us == j; };
          const double num = w.conditional(u, [](const Cell& c) { return c.a == 1 && c.s == 1; });
          const double den = w.conditional(u, [](const Cell& c) { return c.a == 0 && c.s == 1; });
          v = std::max(v, detail::safe_ratio(num, den));
        }
    } else if (n == "RRUscYS" || n == "RRUsYS") {
      const bool joint = n == "RRUscYS";
      v = 0.0;
      for (int a = 0; a < 2; ++a) {
        std::vector<double> risk;
        for (int i = 0; i < (joint ? nc : 1); ++i)
          for (int j = 0; j < ns; ++j)
            risk.push_back(w.conditional(y1, [&](const Cell& c) {
              return c.a == a && c.s == 1 && (!joint || c.uc == i) && c.us == j;
            }));
        v = std::max(v, detail::max_over_min(risk));
      }
    } else if (n == "RRAYy" || n == "RRAYyS") {
      v = 0.0;
      for (int y = 0; y < 2; ++y) {
        const double exposed =
            w.conditional(m1, [&](const Cell& c) { return c.y == y && c.a == 1 && in_s(c); });
        const double unexposed =
            w.conditional(m1, [&](const Cell& c) { return c.y == y && c.a == 0 && in_s(c); });
        v = std::max(v, detail::safe_ratio(exposed, unexposed));
      }
    } else if (n == "ORYAa" || n == "ORYAaS") {
      // s'_y and f'_y: P(A* = 1 | Y = y, A = 1 or 0)
      std::array<double, 2> sens{}, fpos{};
      for (int y = 0; y < 2; ++y) {
        sens[y] = w.conditional(m1, [&](const Cell& c) { return c.y == y && c.a == 1 && in_s(c); });
        fpos[y] = w.conditional(m1, [&](const Cell& c) { return c.y == y && c.a == 0 && in_s(c); });
      }
      auto r = detail::safe_ratio;
      v = std::max({r(r(sens[1], 1 - sens[1]), r(sens[0], 1 - sens[0])),
                    r(r(fpos[1], 1 - fpos[1]), r(fpos[0], 1 - fpos[0])),
                    r(r(fpos[1], fpos[0]), r(1 - sens[1], 1 - sens[0])),
                    r(r(sens[1], sens[0]), r(1 - fpos[1], 1 - fpos[0]))});
    } else if (n == "RRYAa" || n == "RRYAaS") {
      v = 0.0;
      for (int a = 0; a < 2; ++a) {
        const double cases =
            w.conditional(m1, [&](const Cell& c) { return c.y == 1 && c.a == a && in_s(c); });
        const double controls =
            w.conditional(m1, [&](const Cell& c) { return c.y == 0 && c.a == a && in_s(c); });
        v = std::max(v, detail::safe_ratio(cases, controls));
      }
    } else {
      throw Error(ErrorCode::StructureMismatch, "no extraction rule for " + n, n);
    }
    // Misclassification maxima can fall below 1; the bound only needs an
    // upper value, so they are floored at 1.
    out[n] = std::max(v, 1.0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Observed and causal risk ratios

struct RiskRatios {
  double observed;
  double truth;           // P(Y_1 = 1) / P(Y_0 = 1)
  double truth_selected;  // P(Y_1 = 1 | S = 1) / P(Y_0 = 1 | S = 1)
};

inline double observed_rr(const World& w) {
  const auto mode = w.config().misclassification;
  auto risk = [&](int a) {
    if (mode == MeasurementMode::Exposure)
      return w.conditional([](const Cell& c) { return c.y == 1; },
                           [a](const Cell& c) { return c.m == a && c.s == 1; });
    const bool outcome_m = mode == MeasurementMode::Outcome;
    return w.conditional([outcome_m](const Cell& c) { return (outcome_m ? c.m : c.y) == 1; },
                         [a](const Cell& c) { return c.a == a && c.s == 1; });
  };
  return risk(1) / risk(0);
}

inline RiskRatios observed_and_true_rr(const World& w, const BiasSet& set) {
  detail::check_compatible(w, set);
  const int nc = w.confounder_levels(), ns = w.selection_levels();
  auto y1 = [](const Cell& c) { return c.y == 1; };

  // g-formula over U_c, with U_s allowed to sit downstream of A.
  auto potential_risk = [&](int a) {
    double total = 0.0;
    for (int i = 0; i < nc; ++i) {
      const double pu = w.mass([i](const Cell& c) { return c.uc == i; });
      if (pu == 0.0) continue;
      double inner = 0.0;
      for (int j = 0; j < ns; ++j) {
        const double pus = w.conditional([j](const Cell& c) { return c.us == j; },
                                         [a, i](const Cell& c) { return c.a == a && c.uc == i; });
        if (pus == 0.0) continue;
        inner += pus * w.conditional(y1, [a, i, j](const Cell& c) {
          return c.a == a && c.uc == i && c.us == j;
        });
      }
      total += pu * inner;
    }
    return total;
  };

  // Standardized within S = 1 over the joint U_sc.
  auto selected_risk = [&](int a) {
    const double selected = w.mass([](const Cell& c) { return c.s == 1; });
    if (selected < kMinMass)
      throw Error(ErrorCode::DegenerateStratum, "nobody is selected");
    double total = 0.0;
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < ns; ++j) {
        const double pu = w.mass([i, j](const Cell& c) { return c.s == 1 && c.uc == i && c.us == j; });
        if (pu == 0.0) continue;
        total += pu / selected * w.conditional(y1, [a, i, j](const Cell& c) {
          return c.a == a && c.s == 1 && c.uc == i && c.us == j;
        });
      }
    return total;
  };

  return {observed_rr(w), potential_risk(1) / potential_risk(0),
          selected_risk(1) / selected_risk(0)};
}

// ---------------------------------------------------------------------------
// Verification

struct VerifyReport {
  double ratio = 1.0;       // observed RR / targeted causal RR
  double bound = 1.0;
  bool holds = true;
  double slack = 0.0;       // bound - ratio
  double prevalence = 0.0;  // max P(Y = 1 | A, U_c, U_s)
  bool approximate = false; // rare-outcome approximation (exposure misclassification)
  bool selected_target = false;
};

inline double max_outcome_prevalence(const World& w) {
  double p = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < w.confounder_levels(); ++i)
      for (int j = 0; j < w.selection_levels(); ++j)
        p = std::max(p, w.conditional([](const Cell& c) { return c.y == 1; },
                                      [a, i, j](const Cell& c) {
                                        return c.a == a && c.uc == i && c.us == j;
                                      }));
  return p;
}

inline VerifyReport verify_bound(const World& w, const BiasSet& set) {
  VerifyReport r;
  const auto rr = observed_and_true_rr(w, set);
  r.selected_target = set.targets_selected_population();
  r.ratio = rr.observed / (r.selected_target ? rr.truth_selected : rr.truth);
  r.bound = multi_bound(set, extract_parameters(w, set));
  r.slack = r.bound - r.ratio;
  r.holds = r.ratio <= r.bound + kBoundSlack;
  r.prevalence = max_outcome_prevalence(w);
  const auto* m = set.get<Misclassification>();
  r.approximate = m && m->variable == MisclassifiedVariable::Exposure;
  return r;
}

// ---------------------------------------------------------------------------
// Random worlds

namespace detail {

/// Portable uniform draws straight from the 64-bit engine.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int level() { return 2 + static_cast<int>(engine_() % 2); }
  std::vector<double> simplex(int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& x : v) total += (x = -std::log1p(-unit()));
    for (auto& x : v) x /= total;
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

inline WorldTables draw_tables(const WorldConfig& c, Draws& d) {
  WorldTables t;
  const int nc = t.confounder_levels = c.confounder_levels > 0 ? c.confounder_levels : d.level();
  const int ns = t.selection_levels = c.selection_levels > 0 ? c.selection_levels : d.level();
  const std::size_t block = static_cast<std::size_t>(nc * ns);

  t.confounder = d.simplex(nc);
  const double shared_exposure = d.uniform(0.05, 0.95);
  for (int i = 0; i < nc; ++i)
    t.exposure.push_back(c.confounding ? d.uniform(0.05, 0.95) : shared_exposure);

  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < nc; ++i) {
      auto row = d.simplex(ns);
      t.selection_factor.insert(t.selection_factor.end(), row.begin(), row.end());
    }
  if (c.selection == SelectionMode::Selected)
    std::copy_n(t.selection_factor.begin(), block, t.selection_factor.begin() + block);

  t.selection.assign(2 * block, 1.0);
  if (c.selection != SelectionMode::None) {
    const bool ignores_uc = c.selection == SelectionMode::General || !c.confounding;
    for (int e = 0; e < 2; ++e)
      for (int i = 0; i < nc; ++i)
        for (int j = 0; j < ns; ++j) {
          const std::size_t k = (e * nc + i) * ns + j;
          t.selection[k] = ignores_uc && i > 0 ? t.selection[(e * nc) * ns + j]
                                               : d.uniform(0.05, 0.95);
        }
  }

  for (std::size_t k = 0; k < 2 * block; ++k)
    t.outcome.push_back(c.rare_outcome_ceiling * d.uniform(0.01, 0.99));

  t.measurement.assign(8, 0.0);
  if (c.misclassification != MeasurementMode::None)
    for (int k = 0; k < 4; ++k) {
      t.measurement[2 * k] = d.uniform(0.05, 0.95);
      t.measurement[2 * k + 1] = c.misclassification_first ? t.measurement[2 * k]
                                                           : d.uniform(0.05, 0.95);
    }
  return t;
}

/// The misclassification bounds compare the misclassified ratio with the
/// true-variable ratio in the stratum where measurement happens; they hold
/// when that true-variable ratio is at least 1.
inline bool measurement_layer_nonnegative(const World& w) {
  const auto& c = w.config();
  if (c.misclassification == MeasurementMode::None) return true;
  const bool total_population =
      c.misclassification_first && c.selection == SelectionMode::General;
  auto risk = [&](int a) {
    return w.conditional([](const Cell& x) { return x.y == 1; },
                         [&](const Cell& x) { return x.a == a && (total_population || x.s == 1); });
  };
  return risk(1) >= risk(0);
}

}  // namespace detail

inline constexpr int kMaxWorldAttempts = 1000;

/// Draws a world with the requested structure, deterministic per seed.
/// Draws with a near-empty stratum, or whose measurement layer runs against
/// the direction the misclassification bounds require, are redrawn.
inline World generate_world(const WorldConfig& config, std::uint64_t seed) {
  if (!(config.rare_outcome_ceiling > 0.0 && config.rare_outcome_ceiling <= 1.0))
    throw Error(ErrorCode::DomainError, "rare-outcome ceiling must lie in (0, 1]");
  for (int n : {config.confounder_levels, config.selection_levels})
    if (n != 0 && n != 2 && n != 3)
      throw Error(ErrorCode::DomainError, "latent support sizes must be 2 or 3");
  const auto set = natural_bias_set(config);

  detail::Draws draws(seed);
  for (int attempt = 0; attempt < kMaxWorldAttempts; ++attempt) {
    auto world = World::from_tables(config, detail::draw_tables(config, draws));
    try {
      if (!detail::measurement_layer_nonnegative(world)) continue;
      (void)extract_parameters(world, set);
      (void)observed_and_true_rr(world, set);
      (void)max_outcome_prevalence(world);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateStratum) continue;
      throw;
    }
    return world;
  }
  throw Error(ErrorCode::InfeasibleConfig,
              "no admissible world found; the rare-outcome ceiling may be too small");
}

}  // namespace multibias::oracle
