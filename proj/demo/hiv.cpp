// Confounding plus selection on an odds ratio of 6.75 (2.79, 16.31) for a
// rare outcome: the bound, the shifted interval, and the E-values.

#include <cstdio>

#include "multibias/multibias.hpp"

int main() {
  using namespace multibias;

  const auto biases = build_bias_set(
      {Confounding{}, Selection{SelectionPopulation::General, RiskDirection::IncreasedRisk}});

  const ParameterValues values = {
      {"RRAUc", 2.3}, {"RRUcY", 2.5}, {"RRUsYA1", 3.0}, {"RRSUsA1", 2.0}};
  const auto shifted = adjust_estimate(biases, values, 6.75, 2.79, 16.31);
  std::printf("bound             %.6f\n", shifted.bound);
  std::printf("shifted estimate  %.2f (%.2f, %.2f)\n", shifted.estimate, shifted.lo, shifted.hi);

  const auto ev = multi_evalue(biases, EffectEstimate::OR(6.75, true, 2.79, 16.31));
  std::printf("E-value           %.6f (lower limit %.6f)\n", ev.point_evalue, *ev.lo_evalue);

  const auto ev2 = multi_evalue(biases, EffectEstimate::OR(6.75, true, 2.79, 16.31), 2.0);
  std::printf("E-value, true 2   %.6f (lower limit %.6f)\n", ev2.point_evalue, *ev2.lo_evalue);
  return 0;
}
