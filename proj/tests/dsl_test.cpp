#include <gtest/gtest.h>

#include "multibias/dsl.hpp"

using namespace multibias;

namespace {

ErrorCode parse_error(const char* text) {
  try {
    dsl::parse_bias_set(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ErrorCode::DomainError;
}

}  // namespace

TEST(Dsl, ParsesAllOptions) {
  auto specs = dsl::parse_specs(
      " confounding +selection( general ,increased_risk, s_equals_u)+ "
      "misclassification(exposure, rare_outcome, rare_exposure) ");
  ASSERT_EQ(specs.size(), 3u);
  EXPECT_TRUE(std::holds_alternative<Confounding>(specs[0]));
  EXPECT_EQ(std::get<Selection>(specs[1]),
            (Selection{SelectionPopulation::General, RiskDirection::IncreasedRisk, true}));
  EXPECT_EQ(std::get<Misclassification>(specs[2]),
            (Misclassification{MisclassifiedVariable::Exposure, true, true}));
}

TEST(Dsl, DefaultsAndEmptyParentheses) {
  auto specs = dsl::parse_specs("confounding() + selection + selection()");
  EXPECT_EQ(std::get<Selection>(specs[1]), Selection{});
  EXPECT_EQ(std::get<Selection>(specs[2]), Selection{});
}

TEST(Dsl, DeclarationOrderIsKept) {
  auto s = dsl::parse_bias_set("misclassification(outcome) + selection(general)");
  EXPECT_TRUE(s.declared_before(BiasKind::Misclassification, BiasKind::Selection));
}

TEST(Dsl, LabelParsesBack) {
  const char* text = "confounding + selection(selected) + misclassification(exposure, rare_outcome)";
  auto s = dsl::parse_bias_set(text);
  EXPECT_EQ(s.label(), text);
  EXPECT_EQ(dsl::parse_bias_set(s.label()), s);
}

TEST(Dsl, RejectsUnknownTokens) {
  EXPECT_EQ(parse_error("confounder"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error("selection(general, increased risk)"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error("misclassification(outcome, rare)"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error("confounding(general)"), ErrorCode::ParseError);
}

TEST(Dsl, RejectsMalformedText) {
  EXPECT_EQ(parse_error(""), ErrorCode::ParseError);
  EXPECT_EQ(parse_error("confounding +"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error("selection(general"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error("selection general)"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error("selection(general,)"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error("selection((general))"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error("misclassification"), ErrorCode::ParseError);
}

TEST(Dsl, RejectsConflictingOptions) {
  EXPECT_EQ(parse_error("selection(general, selected)"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error("selection(increased_risk, decreased_risk)"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error("misclassification(outcome, exposure)"), ErrorCode::ParseError);
}

TEST(Dsl, BuilderErrorsPassThrough) {
  EXPECT_EQ(parse_error("confounding + confounding"), ErrorCode::DuplicateBias);
  EXPECT_EQ(parse_error("misclassification(exposure)"), ErrorCode::RareOutcomeRequired);
  EXPECT_EQ(parse_error("selection(selected, s_equals_u)"), ErrorCode::SelectedPopulationConflict);
}

TEST(Dsl, SplitTopLevel) {
  auto parts = dsl::split_top_level(
      "confounding, selection(general, increased_risk) + misclassification(outcome) ,");
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0], "confounding");
  EXPECT_EQ(parts[1], "selection(general, increased_risk) + misclassification(outcome)");
}
