#pragma once

// Text form of a bias set:
//
//   confounding + selection(general, increased_risk) + misclassification(exposure, rare_outcome)
//
// Clauses are separated by '+' in declaration order; options are
// comma-separated inside parentheses.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "multibias/bias_model.hpp"
#include "multibias/error.hpp"

namespace multibias::dsl {

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] inline void fail(const std::string& msg, const std::string& token = {}) {
  throw Error(ErrorCode::ParseError, msg, token);
}

inline std::vector<std::string> split_options(std::string_view body) {
  std::vector<std::string> out;
  if (trim(body).empty()) return out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == ',') {
      auto tok = trim(body.substr(start, i - start));
      if (tok.empty()) fail("empty option in bias clause");
      out.push_back(tok);
      start = i + 1;
    }
  }
  return out;
}

inline BiasSpec parse_clause(const std::string& clause) {
  if (clause.empty()) fail("empty bias clause");
  std::string name = clause;
  std::vector<std::string> options;
  if (auto open = clause.find('('); open != std::string::npos) {
    if (clause.back() != ')') fail("unbalanced parentheses in '" + clause + "'", clause);
    name = trim(std::string_view(clause).substr(0, open));
    auto body = std::string_view(clause).substr(open + 1, clause.size() - open - 2);
    if (body.find_first_of("()") != std::string_view::npos)
      fail("unbalanced parentheses in '" + clause + "'", clause);
    options = split_options(body);
  } else if (clause.find(')') != std::string::npos) {
    fail("unbalanced parentheses in '" + clause + "'", clause);
  }

  auto once = [](bool& seen, const std::string& tok) {
    if (seen) fail("conflicting or repeated option '" + tok + "'", tok);
    seen = true;
  };

  if (name == "confounding") {
    if (!options.empty()) fail("confounding takes no options", options.front());
    return Confounding{};
  }

  if (name == "selection") {
    Selection s;
    bool population = false, direction = false, su = false;
    for (const auto& o : options) {
      if (o == "general" || o == "selected") {
        once(population, o);
        s.population = o == "general" ? SelectionPopulation::General : SelectionPopulation::Selected;
      } else if (o == "increased_risk" || o == "decreased_risk") {
        once(direction, o);
        s.direction = o == "increased_risk" ? RiskDirection::IncreasedRisk
                                            : RiskDirection::DecreasedRisk;
      } else if (o == "s_equals_u") {
        once(su, o);
        s.s_equals_u = true;
      } else {
        fail("unknown selection option '" + o + "'", o);
      }
    }
    return s;
  }

  if (name == "misclassification") {
    Misclassification m;
    bool variable = false, ro = false, re = false;
    for (const auto& o : options) {
      if (o == "outcome" || o == "exposure") {
        once(variable, o);
        m.variable = o == "outcome" ? MisclassifiedVariable::Outcome : MisclassifiedVariable::Exposure;
      } else if (o == "rare_outcome") {
        once(ro, o);
        m.rare_outcome = true;
      } else if (o == "rare_exposure") {
        once(re, o);
        m.rare_exposure = true;
      } else {
        fail("unknown misclassification option '" + o + "'", o);
      }
    }
    if (!variable) fail("misclassification needs 'outcome' or 'exposure'");
    return m;
  }

  fail("unknown bias '" + name + "'", name);
}

}  // namespace detail

inline std::vector<BiasSpec> parse_specs(std::string_view text) {
  std::vector<BiasSpec> specs;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '+') {
      specs.push_back(detail::parse_clause(detail::trim(text.substr(start, i - start))));
      start = i + 1;
    }
  }
  return specs;
}

inline BiasSet parse_bias_set(std::string_view text) { return build_bias_set(parse_specs(text)); }

/// Splits on commas outside parentheses, e.g. a list of bias-set strings.
inline std::vector<std::string> split_top_level(std::string_view text) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '(') ++depth;
    if (i < text.size() && text[i] == ')') --depth;
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      auto item = detail::trim(text.substr(start, i - start));
      if (!item.empty()) out.push_back(item);
      start = i + 1;
    }
  }
  return out;
}

}  // namespace multibias::dsl
