#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "multibias/bound.hpp"
#include "multibias/dsl.hpp"

using namespace multibias;

namespace {

BiasSet set_of(const char* text) { return dsl::parse_bias_set(text); }

const char* kHiv = "confounding + selection(general, increased_risk)";
const char* kLeukemia = "confounding + misclassification(exposure, rare_outcome)";

ErrorCode bound_error(const BiasSet& s, const ParameterValues& v, std::string* subject = nullptr) {
  try {
    multi_bound(s, v);
  } catch (const Error& e) {
    if (subject) *subject = e.subject();
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::ParseError;
}

}  // namespace

TEST(G, Values) {
  EXPECT_DOUBLE_EQ(g(1, 5), 1.0);
  EXPECT_NEAR(g(2, 2), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(g(3, 3), 1.8, 1e-15);
  EXPECT_NEAR(g(2.3, 2.5), 5.75 / 3.8, 1e-15);
}

TEST(G, Symmetric) {
  EXPECT_DOUBLE_EQ(g(1.7, 4.2), g(4.2, 1.7));
}

TEST(G, InfiniteArgumentsReduceToTheOther) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(g(inf, 3), 3);
  EXPECT_EQ(g(2, inf), 2);
  EXPECT_EQ(g(inf, inf), inf);
}

TEST(G, RejectsBelowOne) {
  EXPECT_THROW(g(0.9, 2), Error);
  EXPECT_THROW(g(2, std::nan("")), Error);
}

TEST(BoundExpression, TermShapes) {
  using F = BoundTerm::Form;
  auto shapes = [](const char* text) {
    std::vector<F> out;
    for (const auto& t : bound_expression(set_of(text)).terms) out.push_back(t.form);
    return out;
  };
  EXPECT_EQ(shapes("confounding + selection(general) + misclassification(outcome)"),
            (std::vector<F>{F::GTerm, F::GTerm, F::GTerm, F::Single}));
  EXPECT_EQ(shapes("confounding + selection(selected) + misclassification(outcome)"),
            (std::vector<F>{F::GTerm, F::Single}));
  EXPECT_EQ(shapes("confounding"), (std::vector<F>{F::GTerm}));
  EXPECT_EQ(shapes("selection(general, s_equals_u)"), (std::vector<F>{F::Single, F::Single}));
}

TEST(MultiBound, Hiv) {
  EXPECT_NEAR(multi_bound(set_of(kHiv),
                          {{"RRAUc", 2.3}, {"RRUcY", 2.5}, {"RRUsYA1", 3}, {"RRSUsA1", 2}}),
              2.269737, 1e-6);
  EXPECT_NEAR(multi_bound(set_of(kHiv),
                          {{"RRAUc", 2}, {"RRUcY", 2.5}, {"RRUsYA1", 3}, {"RRSUsA1", 2}}),
              2.142857, 1e-6);
}

TEST(MultiBound, Leukemia) {
  EXPECT_NEAR(multi_bound(set_of(kLeukemia), {{"RRAUc", 2}, {"RRUcY", 1.22}, {"ORYAa", 1.59}}),
              1.747568, 1e-6);
}

TEST(MultiBound, DecreasedRiskAllTwos) {
  auto s = set_of("confounding + selection(general, decreased_risk) + misclassification(outcome)");
  ParameterValues v;
  for (const auto& n : s.parameter_names()) v[n] = 2;
  EXPECT_NEAR(multi_bound(s, v), 3.555556, 1e-6);
}

TEST(MultiBound, SelectionOnly) {
  EXPECT_NEAR(multi_bound(set_of("selection(general)"),
                          {{"RRUsYA1", 2}, {"RRSUsA1", 1.7}, {"RRUsYA0", 2}, {"RRSUsA0", 1.5}}),
              1.511111, 1e-6);
}

TEST(MultiBound, OrderingChangesLabelsNotMagnitude) {
  auto a = set_of("confounding + selection(general) + misclassification(exposure, rare_outcome)");
  auto b = set_of("confounding + misclassification(exposure, rare_outcome) + selection(general)");
  ParameterValues va{{"RRAUc", 1.4}, {"RRUcY", 2.2},   {"RRUsYA1", 3.1}, {"RRSUsA1", 1.2},
                     {"RRUsYA0", 1.9}, {"RRSUsA0", 2.7}, {"ORYAaS", 1.35}};
  ParameterValues vb = va;
  vb.erase("ORYAaS");
  vb["ORYAa"] = 1.35;
  EXPECT_EQ(multi_bound(a, va), multi_bound(b, vb));
}

TEST(MultiBound, Errors) {
  auto s = set_of(kHiv);
  std::string subject;
  EXPECT_EQ(bound_error(s, {{"RRAUc", 2.3}, {"RRUcY", 2.5}, {"RRUsYA1", 3}}, &subject),
            ErrorCode::MissingParameter);
  EXPECT_EQ(subject, "RRSUsA1");
  EXPECT_EQ(bound_error(s, {{"RRAUc", 2.3}, {"RRUcY", 2.5}, {"RRUsYA1", 3}, {"RRSUsA1", 2},
                            {"RRUsYA0", 2}},
                        &subject),
            ErrorCode::UnknownParameter);
  EXPECT_EQ(subject, "RRUsYA0");
  EXPECT_EQ(bound_error(s, {{"RRAUc", 0.5}, {"RRUcY", 2.5}, {"RRUsYA1", 3}, {"RRSUsA1", 2}}),
            ErrorCode::DomainError);
  EXPECT_EQ(bound_error(s, {{"RRAUc", std::nan("")}, {"RRUcY", 2.5}, {"RRUsYA1", 3},
                            {"RRSUsA1", 2}}),
            ErrorCode::DomainError);
}

TEST(MultiBound, InfiniteParameterFollowsG) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_DOUBLE_EQ(multi_bound(set_of("confounding"), {{"RRAUc", inf}, {"RRUcY", 2.5}}), 2.5);
}

TEST(Grid, HivCorners) {
  VaryAxis v{"RRAUc", {}};
  for (int i = 0; i < 8; ++i) v.values.push_back(1.25 + 0.25 * i);
  VaryAxis w = v;
  w.name = "RRUcY";
  auto grid = grid_table(set_of(kHiv), v, w, {{"RRUsYA1", 3}, {"RRSUsA1", 2}});
  ASSERT_EQ(grid.cells.size(), 8u);
  EXPECT_NEAR(grid.cells[0][0], 1.5625, 1e-12);
  EXPECT_NEAR(grid.cells[7][7], 2.7, 1e-12);
  EXPECT_EQ(grid.cells[2][5], grid.cells[5][2]);
}

TEST(Grid, ConfoundingTenTen) {
  auto grid = grid_table(set_of("confounding"), {"RRAUc", {10}}, {"RRUcY", {10}}, {});
  EXPECT_NEAR(grid.cells[0][0], 100.0 / 19.0, 1e-12);
}

TEST(Grid, Validation) {
  auto s = set_of(kHiv);
  const ParameterValues fixed{{"RRUsYA1", 3}, {"RRSUsA1", 2}};
  EXPECT_THROW(grid_table(s, {"RRAUc", {2}}, {"RRAUc", {2}}, fixed), Error);
  EXPECT_THROW(grid_table(s, {"RRAUc", {2}}, {"RRUsYA1", {2}}, fixed), Error);
  EXPECT_THROW(grid_table(s, {"RRAUc", {2}}, {"Nope", {2}}, fixed), Error);
  EXPECT_THROW(grid_table(s, {"RRAUc", {0.5}}, {"RRUcY", {2}}, fixed), Error);
  EXPECT_THROW(grid_table(s, {"RRAUc", {2}}, {"RRUcY", {2}}, {{"RRUsYA1", 3}}), Error);
}

TEST(Adjust, Hiv) {
  auto r = adjust_estimate(set_of(kHiv),
                           {{"RRAUc", 2.3}, {"RRUcY", 2.5}, {"RRUsYA1", 3}, {"RRSUsA1", 2}},
                           6.75, 2.79, 16.31);
  EXPECT_NEAR(r.lo, 1.229, 5e-4);
}

TEST(Adjust, LeukemiaMultiplies) {
  auto r = adjust_estimate(set_of(kLeukemia), {{"RRAUc", 2}, {"RRUcY", 1.22}, {"ORYAa", 1.59}},
                           0.51, 0.30, 0.89);
  EXPECT_NEAR(r.estimate, 0.891, 5e-4);
  EXPECT_NEAR(r.lo, 0.524, 5e-4);
  EXPECT_NEAR(r.hi, 1.555, 5e-4);
}

TEST(Adjust, UnitBoundIsIdentity) {
  auto r = adjust_estimate(set_of("confounding"), {{"RRAUc", 1}, {"RRUcY", 7}}, 2.0, 1.5, 3.0);
  EXPECT_EQ(r.estimate, 2.0);
  EXPECT_EQ(r.lo, 1.5);
  EXPECT_EQ(r.hi, 3.0);
}

TEST(Adjust, RejectsBadInterval) {
  const ParameterValues v{{"RRAUc", 2}, {"RRUcY", 2}};
  EXPECT_THROW(adjust_estimate(set_of("confounding"), v, 2.0, 2.5, 3.0), Error);
  EXPECT_THROW(adjust_estimate(set_of("confounding"), v, 0.0, 0.0, 3.0), Error);
}
