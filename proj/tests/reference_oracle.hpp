#pragma once

// Second implementation of the oracle quantities, written directly from the
// factorized tables instead of the enumerated joint. Covers the
// confounding-only, general-selection-then-outcome-misclassification and
// selected-population-then-outcome-misclassification structures.

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "multibias/oracle.hpp"

namespace reference {

struct Tables {
  const multibias::oracle::WorldTables& t;
  int nc() const { return t.confounder_levels; }
  int ns() const { return t.selection_levels; }
  double pc(int i) const { return t.confounder[i]; }
  double pa(int a, int i) const { return a ? t.exposure[i] : 1 - t.exposure[i]; }
  double pus(int j, int a, int i) const { return t.selection_factor[(a * nc() + i) * ns() + j]; }
  double ps(int s, int a, int i, int j) const {
    const double p = t.selection[(a * nc() + i) * ns() + j];
    return s ? p : 1 - p;
  }
  double py(int a, int i, int j) const { return t.outcome[(a * nc() + i) * ns() + j]; }
  double pm(int a, int y, int s) const { return t.measurement[(a * 2 + y) * 2 + s]; }
};

inline double ratio(double a, double b) {
  return b > 0 ? a / b : (a > 0 ? std::numeric_limits<double>::infinity() : 0.0);
}

inline double max_ratio_over_levels(const std::vector<double>& v) {
  double hi = 0, lo = std::numeric_limits<double>::infinity();
  for (double x : v) {
    hi = std::max(hi, x);
    lo = std::min(lo, x);
  }
  return ratio(hi, lo);
}

/// RRAUc and RRUcY from the tables.
inline std::map<std::string, double> confounding_parameters(const multibias::oracle::World& w) {
  const Tables T{w.tables()};
  std::map<std::string, double> out;
  double pa1 = 0, pa0 = 0;
  for (int i = 0; i < T.nc(); ++i) {
    pa1 += T.pc(i) * T.pa(1, i);
    pa0 += T.pc(i) * T.pa(0, i);
  }
  double rrau = 0;
  for (int i = 0; i < T.nc(); ++i)
    rrau = std::max(rrau, ratio(T.pc(i) * T.pa(1, i) / pa1, T.pc(i) * T.pa(0, i) / pa0));
  out["RRAUc"] = std::max(1.0, rrau);

  double rruy = 0;
  for (int a = 0; a < 2; ++a) {
    std::vector<double> risk;
    for (int i = 0; i < T.nc(); ++i) {
      double r = 0;
      for (int j = 0; j < T.ns(); ++j) r += T.pus(j, a, i) * T.py(a, i, j);
      risk.push_back(r);
    }
    rruy = std::max(rruy, max_ratio_over_levels(risk));
  }
  out["RRUcY"] = std::max(1.0, rruy);
  return out;
}

/// Parameters of confounding + selection(general) + misclassification(outcome).
inline std::map<std::string, double> result1_parameters(const multibias::oracle::World& w) {
  const Tables T{w.tables()};
  auto out = confounding_parameters(w);

  for (int a = 0; a < 2; ++a) {
    const std::string lv = std::to_string(a);
    std::vector<double> risk;
    std::vector<double> sel[2];  // unnormalized P(U_s = j, A = a, S = s)
    for (int j = 0; j < T.ns(); ++j) {
      double num = 0, den = 0, s1 = 0, s0 = 0;
      for (int i = 0; i < T.nc(); ++i) {
        const double w0 = T.pc(i) * T.pa(a, i) * T.pus(j, a, i);
        num += w0 * T.py(a, i, j);
        den += w0;
        s1 += w0 * T.ps(1, a, i, j);
        s0 += w0 * T.ps(0, a, i, j);
      }
      risk.push_back(num / den);
      sel[1].push_back(s1);
      sel[0].push_back(s0);
    }
    out["RRUsYA" + lv] = std::max(1.0, max_ratio_over_levels(risk));

    double tot1 = 0, tot0 = 0;
    for (int j = 0; j < T.ns(); ++j) {
      tot1 += sel[1][j];
      tot0 += sel[0][j];
    }
    double rrsu = 0;
    for (int j = 0; j < T.ns(); ++j) {
      const double p1 = sel[1][j] / tot1, p0 = sel[0][j] / tot0;
      rrsu = std::max(rrsu, a == 1 ? ratio(p1, p0) : ratio(p0, p1));
    }
    out["RRSUsA" + lv] = std::max(1.0, rrsu);
  }

  double rray = 0;
  for (int y = 0; y < 2; ++y) rray = std::max(rray, ratio(T.pm(1, y, 1), T.pm(0, y, 1)));
  out["RRAYyS"] = std::max(1.0, rray);
  return out;
}

inline double potential_risk(const multibias::oracle::World& w, int a) {
  const Tables T{w.tables()};
  double r = 0;
  for (int i = 0; i < T.nc(); ++i)
    for (int j = 0; j < T.ns(); ++j) r += T.pc(i) * T.pus(j, a, i) * T.py(a, i, j);
  return r;
}

inline double true_rr(const multibias::oracle::World& w) {
  return potential_risk(w, 1) / potential_risk(w, 0);
}

/// P(Y* = 1 | A = 1, S = 1) / P(Y* = 1 | A = 0, S = 1) when S ignores Y.
inline double observed_outcome_rr(const multibias::oracle::World& w) {
  const Tables T{w.tables()};
  auto risk = [&](int a) {
    double y1 = 0, tot = 0;
    for (int i = 0; i < T.nc(); ++i)
      for (int j = 0; j < T.ns(); ++j) {
        const double p = T.pc(i) * T.pa(a, i) * T.pus(j, a, i) * T.ps(1, a, i, j);
        y1 += p * T.py(a, i, j);
        tot += p;
      }
    const double py1 = y1 / tot;
    return py1 * T.pm(a, 1, 1) + (1 - py1) * T.pm(a, 0, 1);
  };
  return risk(1) / risk(0);
}

/// Parameters and selected-population causal ratio for
/// confounding + selection(selected) + misclassification(outcome).
struct Result3 {
  std::map<std::string, double> parameters;
  double truth_selected;
};

inline Result3 result3(const multibias::oracle::World& w) {
  const Tables T{w.tables()};
  Result3 r;
  // Unnormalized P(U_c = i, U_s = j, A = a, S = 1); U_s ignores A here.
  auto joint = [&](int i, int j, int a) {
    return T.pc(i) * T.pa(a, i) * T.pus(j, 0, i) * T.ps(1, a, i, j);
  };
  double tot[2] = {0, 0};
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < T.nc(); ++i)
      for (int j = 0; j < T.ns(); ++j) tot[a] += joint(i, j, a);

  double rrau = 0;
  double rruy = 0;
  std::vector<double> risk[2];
  for (int i = 0; i < T.nc(); ++i)
    for (int j = 0; j < T.ns(); ++j) {
      rrau = std::max(rrau, ratio(joint(i, j, 1) / tot[1], joint(i, j, 0) / tot[0]));
      risk[0].push_back(T.py(0, i, j));
      risk[1].push_back(T.py(1, i, j));
    }
  rruy = std::max(max_ratio_over_levels(risk[0]), max_ratio_over_levels(risk[1]));
  r.parameters["RRAUscS"] = std::max(1.0, rrau);
  r.parameters["RRUscYS"] = std::max(1.0, rruy);
  double rray = 0;
  for (int y = 0; y < 2; ++y) rray = std::max(rray, ratio(T.pm(1, y, 1), T.pm(0, y, 1)));
  r.parameters["RRAYyS"] = std::max(1.0, rray);

  double n1 = 0, n0 = 0;
  for (int i = 0; i < T.nc(); ++i)
    for (int j = 0; j < T.ns(); ++j) {
      const double pu = joint(i, j, 0) + joint(i, j, 1);
      n1 += pu * T.py(1, i, j);
      n0 += pu * T.py(0, i, j);
    }
  r.truth_selected = n1 / n0;
  return r;
}

}  // namespace reference
