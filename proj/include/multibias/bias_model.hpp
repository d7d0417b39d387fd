#pragma once

// Declared biases and the sensitivity parameters they imply.
//
// A bias set is an ordered list of at most one confounding, one selection and
// one misclassification declaration. Declaration order is the order in which
// the biases arise in the data; it decides which parameters are conditioned on
// the selected stratum and which refer to a misclassified variable.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "multibias/error.hpp"

namespace multibias {

enum class BiasKind { Confounding, Selection, Misclassification };
enum class SelectionPopulation { General, Selected };
enum class RiskDirection { None, IncreasedRisk, DecreasedRisk };
enum class MisclassifiedVariable { Outcome, Exposure };
enum class Scale { RiskRatio, OddsRatio };

struct Confounding {
  bool operator==(const Confounding&) const = default;
};

struct Selection {
  SelectionPopulation population = SelectionPopulation::General;
  RiskDirection direction = RiskDirection::None;
  /// Selection acts directly on the selection factor (S = U_s).
  bool s_equals_u = false;

  bool operator==(const Selection&) const = default;
};

struct Misclassification {
  MisclassifiedVariable variable = MisclassifiedVariable::Outcome;
  // Only meaningful for exposure misclassification.
  bool rare_outcome = false;
  bool rare_exposure = false;

  bool operator==(const Misclassification&) const = default;
};

using BiasSpec = std::variant<Confounding, Selection, Misclassification>;

inline BiasKind kind_of(const BiasSpec& spec) {
  return static_cast<BiasKind>(spec.index());
}

inline std::string describe(const BiasSpec& spec) {
  if (std::holds_alternative<Confounding>(spec)) return "confounding";
  if (const auto* s = std::get_if<Selection>(&spec)) {
    std::string out = "selection(";
    out += s->population == SelectionPopulation::General ? "general" : "selected";
    if (s->direction == RiskDirection::IncreasedRisk) out += ", increased_risk";
    if (s->direction == RiskDirection::DecreasedRisk) out += ", decreased_risk";
    if (s->s_equals_u) out += ", s_equals_u";
    return out + ")";
  }
  const auto& m = std::get<Misclassification>(spec);
  std::string out = "misclassification(";
  out += m.variable == MisclassifiedVariable::Outcome ? "outcome" : "exposure";
  if (m.rare_outcome) out += ", rare_outcome";
  if (m.rare_exposure) out += ", rare_exposure";
  return out + ")";
}

struct Parameter {
  std::string name;            // argument name, e.g. RRUsYA1
  Scale scale = Scale::RiskRatio;
  std::string display_symbol;  // e.g. RR_UsY|A=1
  std::string latex;
  /// Power of x this parameter contributes when every parameter equals x
  /// (2 for an odds-ratio parameter read through the square-root approximation).
  int evalue_degree = 1;
  std::string bias_label;      // summary row label, e.g. "selection"

  bool operator==(const Parameter&) const = default;
};

class BiasSet;
BiasSet build_bias_set(const std::vector<BiasSpec>& specs);

/// Immutable result of `build_bias_set`.
class BiasSet {
 public:
  const std::vector<BiasSpec>& biases() const noexcept { return biases_; }
  const std::vector<Parameter>& parameters() const noexcept { return parameters_; }

  /// Parameter indices grouped by bound factor: a pair forms a g-term,
  /// a singleton multiplies the bound directly.
  const std::vector<std::vector<std::size_t>>& factor_groups() const noexcept {
    return groups_;
  }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < parameters_.size(); ++i)
      if (parameters_[i].name == name) return i;
    return std::nullopt;
  }

  std::vector<std::string> parameter_names() const {
    std::vector<std::string> names;
    names.reserve(parameters_.size());
    for (const auto& p : parameters_) names.push_back(p.name);
    return names;
  }

  template <class T>
  const T* get() const {
    for (const auto& b : biases_)
      if (const auto* v = std::get_if<T>(&b)) return v;
    return nullptr;
  }

  bool has(BiasKind kind) const {
    return std::any_of(biases_.begin(), biases_.end(),
                       [kind](const BiasSpec& b) { return kind_of(b) == kind; });
  }

  /// True when `first` is declared before `second`; both must be present.
  bool declared_before(BiasKind first, BiasKind second) const {
    std::optional<std::size_t> i, j;
    for (std::size_t k = 0; k < biases_.size(); ++k) {
      if (kind_of(biases_[k]) == first) i = k;
      if (kind_of(biases_[k]) == second) j = k;
    }
    return i && j && *i < *j;
  }

  bool targets_selected_population() const {
    const auto* s = get<Selection>();
    return s && s->population == SelectionPopulation::Selected;
  }

  /// Bias-set DSL rendering in declaration order.
  std::string label() const {
    std::string out;
    for (const auto& b : biases_) {
      if (!out.empty()) out += " + ";
      out += describe(b);
    }
    return out;
  }

  bool operator==(const BiasSet&) const = default;

 private:
  BiasSet() = default;
  friend BiasSet build_bias_set(const std::vector<BiasSpec>& specs);

  std::vector<BiasSpec> biases_;
  std::vector<Parameter> parameters_;
  std::vector<std::vector<std::size_t>> groups_;
};

namespace detail {

inline void validate_specs(const std::vector<BiasSpec>& specs) {
  if (specs.empty())
    throw Error(ErrorCode::DomainError, "a bias set needs at least one bias");
  bool seen[3] = {false, false, false};
  for (const auto& spec : specs) {
    auto k = static_cast<std::size_t>(kind_of(spec));
    if (seen[k])
      throw Error(ErrorCode::DuplicateBias,
                  "bias declared more than once: " + describe(spec), describe(spec));
    seen[k] = true;

    if (const auto* s = std::get_if<Selection>(&spec)) {
      if (s->population == SelectionPopulation::Selected &&
          (s->direction != RiskDirection::None || s->s_equals_u))
        throw Error(ErrorCode::SelectedPopulationConflict,
                    "risk-direction and S = U simplifications apply only to the "
                    "general population");
    }
    if (const auto* m = std::get_if<Misclassification>(&spec)) {
      if (m->variable == MisclassifiedVariable::Exposure) {
        if (!m->rare_outcome)
          throw Error(ErrorCode::RareOutcomeRequired,
                      "exposure misclassification bounds require a rare outcome");
      } else if (m->rare_outcome || m->rare_exposure) {
        throw Error(ErrorCode::DomainError,
                    "rare_outcome and rare_exposure apply only to exposure "
                    "misclassification");
      }
    }
  }
}

}  // namespace detail

inline BiasSet build_bias_set(const std::vector<BiasSpec>& specs) {
  detail::validate_specs(specs);

  BiasSet set;
  set.biases_ = specs;

  const auto* conf = set.get<Confounding>();
  const auto* sel = set.get<Selection>();
  const auto* mis = set.get<Misclassification>();
  const bool selected = sel && sel->population == SelectionPopulation::Selected;

  // Selection declared after misclassification refers to the misclassified variable.
  const bool mis_first =
      set.declared_before(BiasKind::Misclassification, BiasKind::Selection);
  const bool on_y_star = mis_first && mis->variable == MisclassifiedVariable::Outcome;
  const bool on_a_star = mis_first && mis->variable == MisclassifiedVariable::Exposure;
  // Misclassification declared after selection happens within S = 1.
  const bool mis_in_selected =
      set.declared_before(BiasKind::Selection, BiasKind::Misclassification);

  auto add = [&set](Parameter p) {
    set.parameters_.push_back(std::move(p));
    return set.parameters_.size() - 1;
  };

  if (conf && !selected) {
    auto a = add({"RRAUc", Scale::RiskRatio, "RR_AUc", "\\text{RR}_{AU_c}", 1,
                  "confounding"});
    auto b = add({"RRUcY", Scale::RiskRatio, "RR_UcY", "\\text{RR}_{U_cY}", 1,
                  "confounding"});
    set.groups_.push_back({a, b});
  }

  if (selected) {
    // Inference in the selected population: confounding and selection share
    // one joint factor U_sc (or U_s alone).
    const bool joint = conf != nullptr;
    const std::string u = joint ? "Usc" : "Us";
    const std::string u_tex = joint ? "U_{sc}" : "U_s";
    const std::string label = joint ? "confounding and selection" : "selection";
    auto a = add({"RRA" + u + "S", Scale::RiskRatio, "RR_A" + u + "|S",
                  "\\text{RR}_{A" + u_tex + " \\mid S = 1}", 1, label});
    auto b = add({"RR" + u + "YS", Scale::RiskRatio, "RR_" + u + "Y|S",
                  "\\text{RR}_{" + u_tex + "Y \\mid S = 1}", 1, label});
    set.groups_.push_back({a, b});
  } else if (sel) {
    const std::string y = on_y_star ? "Y*" : "Y";
    const std::string y_tex = on_y_star ? "Y^*" : "Y";
    const std::string e = on_a_star ? "A*" : "A";
    const std::string e_tex = on_a_star ? "A^*" : "A";
    std::vector<int> levels;
    if (sel->direction != RiskDirection::DecreasedRisk) levels.push_back(1);
    if (sel->direction != RiskDirection::IncreasedRisk) levels.push_back(0);
    for (int a : levels) {
      const std::string lv = std::to_string(a);
      if (sel->s_equals_u) {
        auto i = add({"RRSYA" + lv, Scale::RiskRatio, "RR_S" + y + "|" + e + "=" + lv,
                      "\\text{RR}_{S" + y_tex + " \\mid " + e_tex + " = " + lv + "}", 1,
                      "selection"});
        set.groups_.push_back({i});
      } else {
        auto i = add({"RRUsYA" + lv, Scale::RiskRatio,
                      "RR_Us" + y + "|" + e + "=" + lv,
                      "\\text{RR}_{U_s" + y_tex + " \\mid " + e_tex + " = " + lv + "}", 1,
                      "selection"});
        auto j = add({"RRSUsA" + lv, Scale::RiskRatio, "RR_SUs|" + e + "=" + lv,
                      "\\text{RR}_{SU_s \\mid " + e_tex + " = " + lv + "}", 1,
                      "selection"});
        set.groups_.push_back({i, j});
      }
    }
  }

  if (mis) {
    const std::string s = mis_in_selected ? "S" : "";
    const std::string s_sym = mis_in_selected ? ",S" : "";
    const std::string s_tex = mis_in_selected ? ", S = 1" : "";
    std::size_t i = 0;
    if (mis->variable == MisclassifiedVariable::Outcome) {
      i = add({"RRAYy" + s, Scale::RiskRatio, "RR_AY*|y" + s_sym,
               "\\text{RR}_{AY^* \\mid y" + s_tex + "}", 1, "outcome misclassification"});
    } else if (mis->rare_exposure) {
      i = add({"RRYAa" + s, Scale::RiskRatio, "RR_YA*|a" + s_sym,
               "\\text{RR}_{YA^* \\mid a" + s_tex + "}", 1, "exposure misclassification"});
    } else {
      i = add({"ORYAa" + s, Scale::OddsRatio, "OR_YA*|a" + s_sym,
               "\\text{OR}_{YA^* \\mid a" + s_tex + "}", 2, "exposure misclassification"});
    }
    set.groups_.push_back({i});
  }

  return set;
}

struct SummaryRow {
  std::string bias;
  std::string output;    // display symbol
  std::string argument;  // parameter name
  std::optional<std::string> latex;
};

inline std::vector<SummaryRow> parameter_summary(const BiasSet& set, bool include_latex) {
  std::vector<SummaryRow> rows;
  for (const auto& p : set.parameters())
    rows.push_back({p.bias_label, p.display_symbol, p.name,
                    include_latex ? std::optional<std::string>(p.latex) : std::nullopt});
  return rows;
}

}  // namespace multibias
