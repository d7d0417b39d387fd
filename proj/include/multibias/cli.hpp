#pragma once

// Command-line front end. `run_cli` takes the arguments after the program
// name and returns the process exit code: 0 success, 2 usage or validation
// error, 1 anything else.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multibias/bias_model.hpp"
#include "multibias/bound.hpp"
#include "multibias/dsl.hpp"
#include "multibias/error.hpp"
#include "multibias/evalue.hpp"
#include "multibias/format.hpp"
#include "multibias/oracle.hpp"

namespace multibias::cli {

inline constexpr int kSchemaVersion = 1;

namespace detail {

using nlohmann::json;

inline double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || text.empty())
    throw Error(ErrorCode::ParseError, "invalid number '" + text + "' for " + what, what);
  return v;
}

inline std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorCode::ParseError, "expected NAME=VALUE, got '" + text + "'", text);
  return {text.substr(0, eq), text.substr(eq + 1)};
}

inline ParameterValues parse_params(const std::vector<std::string>& items) {
  ParameterValues values;
  for (const auto& item : items) {
    auto [name, value] = split_assignment(item);
    if (values.count(name))
      throw Error(ErrorCode::ParseError, "parameter " + name + " given more than once", name);
    values[name] = parse_number(value, name);
  }
  return values;
}

/// NAME=start:stop:step or NAME=v1,v2,...
inline VaryAxis parse_vary(const std::string& text) {
  auto [name, spec] = split_assignment(text);
  VaryAxis axis{name, {}};
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= spec.size(); ++i)
      if (i == spec.size() || spec[i] == ':') {
        parts.push_back(spec.substr(start, i - start));
        start = i + 1;
      }
    if (parts.size() != 3)
      throw Error(ErrorCode::ParseError, "expected NAME=start:stop:step, got '" + text + "'", name);
    const double lo = parse_number(parts[0], name);
    const double hi = parse_number(parts[1], name);
    const double step = parse_number(parts[2], name);
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(hi))
      throw Error(ErrorCode::ParseError, "bad range for " + name, name);
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-10));
    if (n > 100000) throw Error(ErrorCode::ParseError, "range for " + name + " is too long", name);
    for (std::size_t i = 0; i <= n; ++i) axis.values.push_back(lo + static_cast<double>(i) * step);
  } else {
    for (const auto& v : dsl::split_top_level(spec)) axis.values.push_back(parse_number(v, name));
    if (axis.values.empty())
      throw Error(ErrorCode::ParseError, "no values given for " + name, name);
  }
  return axis;
}

inline std::string summary_text(const BiasSet& set, bool latex) {
  const auto rows = parameter_summary(set, latex);
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> cols(latex ? 4 : 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    names.push_back(std::to_string(i + 1));
    cols[0].push_back(rows[i].bias);
    cols[1].push_back(rows[i].output);
    cols[2].push_back(rows[i].argument);
    if (latex) cols[3].push_back(*rows[i].latex);
  }
  std::vector<std::string> headers = {"bias", "output", "argument"};
  if (latex) headers.push_back("latex");
  return format::table(names, headers, cols);
}

inline json summary_json(const BiasSet& set, bool latex) {
  json rows = json::array();
  for (const auto& r : parameter_summary(set, latex)) {
    json row = {{"bias", r.bias}, {"output", r.output}, {"argument", r.argument}};
    if (r.latex) row["latex"] = *r.latex;
    rows.push_back(row);
  }
  return {{"schema_version", kSchemaVersion}, {"biases", set.label()}, {"parameters", rows}};
}

inline json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

inline std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : sep) + s;
  return out;
}

inline void check_format(const std::string& fmt, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (fmt == a) return;
  throw Error(ErrorCode::ParseError, "unsupported format '" + fmt + "'", fmt);
}

// ---------------------------------------------------------------------------

struct BoundArgs {
  std::string biases;
  std::vector<std::string> params;
  std::optional<double> est, lo, hi;
  std::string format = "text";
};

inline void cmd_bound(const BoundArgs& a, std::ostream& out) {
  check_format(a.format, {"text", "json"});
  const auto set = dsl::parse_bias_set(a.biases);
  const auto values = parse_params(a.params);
  const double b = multi_bound(set, values);
  std::optional<AdjustedEstimate> adj;
  if (a.est) {
    if (!a.lo || !a.hi)
      throw Error(ErrorCode::ParseError, "--est needs both --lo and --hi");
    adj = adjust_estimate(set, values, *a.est, *a.lo, *a.hi);
  }

  if (a.format == "json") {
    json j = {{"schema_version", kSchemaVersion}, {"biases", set.label()}, {"bound", b},
              {"parameters", values}};
    if (adj)
      j["adjusted"] = {{"estimate", adj->estimate}, {"lo", adj->lo}, {"hi", adj->hi}};
    out << j.dump() << '\n';
    return;
  }
  out << format::significant(b) << '\n';
  if (adj)
    out << "adjusted estimate " << format::significant(adj->estimate) << " ("
        << format::significant(adj->lo) << ", " << format::significant(adj->hi) << ")\n";
}

struct EValueArgs {
  std::string biases;
  double est = 1.0;
  std::string measure = "RR";
  bool rare = false;
  std::optional<double> lo, hi;
  double truth = 1.0;
  bool quiet = false;
  std::string format = "text";
};

inline void cmd_evalue(const EValueArgs& a, std::ostream& out) {
  check_format(a.format, {"text", "json"});
  const auto set = dsl::parse_bias_set(a.biases);
  EffectEstimate est;
  if (a.measure == "RR")
    est.scale = EffectScale::RiskRatio;
  else if (a.measure == "OR")
    est.scale = EffectScale::OddsRatio;
  else if (a.measure == "HR")
    est.scale = EffectScale::HazardRatio;
  else
    throw Error(ErrorCode::ParseError, "unknown measure '" + a.measure + "'", a.measure);
  if (a.rare && est.scale != EffectScale::OddsRatio)
    throw Error(ErrorCode::ParseError, "--rare applies only to odds ratios");
  est.point = a.est;
  est.lo = a.lo;
  est.hi = a.hi;
  est.rare_outcome = a.rare;

  const auto res = multi_evalue(set, est, a.truth);
  const auto& rr = res.risk_ratio;

  if (a.format == "json") {
    json j = {{"schema_version", kSchemaVersion},
              {"biases", set.label()},
              {"point", rr.point},
              {"lo", optional_json(rr.lo)},
              {"hi", optional_json(rr.hi)},
              {"evalue_point", res.point_evalue},
              {"evalue_lo", optional_json(res.lo_evalue)},
              {"evalue_hi", optional_json(res.hi_evalue)},
              {"parameters", res.parameter_names},
              {"true_value", res.true_value}};
    out << j.dump() << '\n';
    return;
  }

  if (!a.quiet) {
    if (a.truth != 1.0)
      out << "Non-null E-value: the least bias that would move the estimate and interval to a "
             "true value of "
          << format::significant(a.truth) << " instead of to the null.\n";
    out << "This multi-bias E-value refers simultaneously to parameters "
        << join(res.parameter_names, ", ") << ".\n";
  }
  out << format::table({"RR", "Multi-bias e-values"}, {"point", "lower", "upper"},
                       {format::numeric_column({rr.point, res.point_evalue}),
                        format::numeric_column({rr.lo, res.lo_evalue}),
                        format::numeric_column({rr.hi, res.hi_evalue})});
}

struct SummaryArgs {
  std::string biases;
  bool latex = false;
  std::string format = "text";
};

inline void cmd_summary(const SummaryArgs& a, std::ostream& out) {
  check_format(a.format, {"text", "json"});
  const auto set = dsl::parse_bias_set(a.biases);
  if (a.format == "json")
    out << summary_json(set, a.latex).dump() << '\n';
  else
    out << summary_text(set, a.latex);
}

struct GridArgs {
  std::string biases;
  std::vector<std::string> vary;
  std::vector<std::string> params;
  std::optional<int> round;
  std::string format = "text";
};

inline void cmd_grid(const GridArgs& a, std::ostream& out) {
  check_format(a.format, {"text", "csv", "json"});
  const auto set = dsl::parse_bias_set(a.biases);
  if (a.vary.size() != 2)
    throw Error(ErrorCode::ParseError, "grid needs exactly two --vary axes");
  const auto rows = parse_vary(a.vary[0]);
  const auto cols = parse_vary(a.vary[1]);
  auto grid = grid_table(set, rows, cols, parse_params(a.params));
  if (a.round) {
    if (*a.round < 0 || *a.round > 15)
      throw Error(ErrorCode::ParseError, "--round must lie in [0, 15]");
    const double scale = std::pow(10.0, *a.round);
    for (auto& row : grid.cells)
      for (auto& v : row) v = std::nearbyint(v * scale) / scale;  // ties to even
  }

  if (a.format == "json") {
    json j = {{"schema_version", kSchemaVersion},
              {"biases", set.label()},
              {"rows", {{"name", rows.name}, {"values", rows.values}}},
              {"cols", {{"name", cols.name}, {"values", cols.values}}},
              {"fixed", parse_params(a.params)},
              {"cells", grid.cells}};
    out << j.dump() << '\n';
    return;
  }
  if (a.format == "csv") {
    out << format::csv_field(rows.name + "/" + cols.name);
    for (double c : cols.values) out << ',' << format::exact(c);
    out << '\n';
    for (std::size_t i = 0; i < rows.values.size(); ++i) {
      out << format::exact(rows.values[i]);
      for (double v : grid.cells[i]) out << ',' << format::exact(v);
      out << '\n';
    }
    return;
  }
  std::vector<std::string> row_names, headers;
  for (double r : rows.values) row_names.push_back(format::significant(r));
  for (double c : cols.values) headers.push_back(format::significant(c));
  std::vector<std::vector<std::string>> columns;
  for (std::size_t j = 0; j < cols.values.size(); ++j) {
    std::vector<std::optional<double>> col;
    for (const auto& row : grid.cells) col.emplace_back(row[j]);
    columns.push_back(format::numeric_column(col));
  }
  out << format::table(row_names, headers, columns);
}

struct CurveArgs {
  std::vector<std::string> bias_sets;
  double rr_min = 1.0;
  double rr_max = 7.0;
  int points = 61;
  std::string format = "csv";
};

inline void cmd_curve(const CurveArgs& a, std::ostream& out) {
  check_format(a.format, {"text", "csv", "json"});
  std::vector<BiasSet> sets;
  for (const auto& item : a.bias_sets)
    for (const auto& text : dsl::split_top_level(item)) sets.push_back(dsl::parse_bias_set(text));
  if (sets.empty()) throw Error(ErrorCode::ParseError, "no bias sets given");
  if (a.points < 1) throw Error(ErrorCode::ParseError, "--points must be at least 1");
  if (!(a.rr_max >= a.rr_min)) throw Error(ErrorCode::ParseError, "--rr-max is below --rr-min");
  std::vector<double> rr;
  for (int i = 0; i < a.points; ++i)
    rr.push_back(a.points == 1 ? a.rr_min
                               : a.rr_min + (a.rr_max - a.rr_min) * i / (a.points - 1));
  const auto rows = evalue_curve(sets, rr);

  if (a.format == "json") {
    json j = {{"schema_version", kSchemaVersion}, {"rows", json::array()}};
    for (const auto& r : rows)
      j["rows"].push_back({{"rr", r.rr}, {"biases", r.biases}, {"evalue", r.evalue}});
    out << j.dump() << '\n';
  } else if (a.format == "csv") {
    out << "rr,biases,evalue\n";
    for (const auto& r : rows)
      out << format::exact(r.rr) << ',' << format::csv_field(r.biases) << ','
          << format::exact(r.evalue) << '\n';
  } else {
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> cols(3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      names.push_back(std::to_string(i + 1));
      cols[0].push_back(format::significant(rows[i].rr));
      cols[1].push_back(format::significant(rows[i].evalue));
      cols[2].push_back(rows[i].biases);
    }
    out << format::table(names, {"rr", "evalue", "biases"}, cols);
  }
}

struct VerifyArgs {
  std::string structure = "result1";
  long long worlds = 1000;
  std::uint64_t seed = 1;
  double rare_ceiling = 1.0;
  int confounder_levels = 0;
  int selection_levels = 0;
  std::string format = "jsonl";
};

inline void cmd_verify(const VerifyArgs& a, std::ostream& out) {
  check_format(a.format, {"jsonl", "summary"});
  if (a.worlds < 0) throw Error(ErrorCode::ParseError, "--worlds must be nonnegative");
  auto config = oracle::structure_config(a.structure);
  config.rare_outcome_ceiling = a.rare_ceiling;
  config.confounder_levels = a.confounder_levels;
  config.selection_levels = a.selection_levels;
  const auto set = oracle::natural_bias_set(config);

  long long violations = 0;
  double worst = 0.0;
  for (long long i = 0; i < a.worlds; ++i) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(i);
    const auto world = oracle::generate_world(config, seed);
    const auto r = oracle::verify_bound(world, set);
    if (!r.holds) ++violations;
    worst = std::max(worst, r.ratio / r.bound);
    if (a.format == "jsonl")
      out << json{{"seed", seed},         {"structure", a.structure}, {"ratio", r.ratio},
                  {"bound", r.bound},     {"slack", r.slack},         {"prevalence", r.prevalence},
                  {"holds", r.holds}}
                 .dump()
          << '\n';
  }
  if (a.format == "summary")
    out << "structure " << a.structure << "\nbiases " << set.label() << "\nworlds " << a.worlds
        << "\nviolations " << violations << "\nmax ratio/bound " << format::significant(worst)
        << '\n';
}

inline void print_expected(const std::string& biases, std::ostream& err) {
  try {
    const auto set = dsl::parse_bias_set(biases);
    err << "expected parameters:\n" << summary_text(set, false);
  } catch (const Error&) {
  }
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounds and E-values for combined confounding, selection and misclassification", "multibias"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  const std::string spec_help =
      "Bias set, e.g. \"confounding + selection(general, increased_risk)\"";

  detail::BoundArgs bound;
  auto* b = app.add_subcommand("bound", "Bounding factor for given parameter values");
  b->add_option("--biases", bound.biases, spec_help)->required();
  b->add_option("--param", bound.params, "NAME=VALUE, repeatable");
  b->add_option("--est", bound.est, "Estimate to shift by the bound");
  b->add_option("--lo", bound.lo, "Lower confidence limit");
  b->add_option("--hi", bound.hi, "Upper confidence limit");
  b->add_option("--format", bound.format, "text or json");

  detail::EValueArgs ev;
  auto* e = app.add_subcommand("evalue", "Multi-bias E-value");
  e->add_option("--biases", ev.biases, spec_help)->required();
  e->add_option("--est", ev.est, "Point estimate")->required();
  e->add_option("--measure", ev.measure, "RR or OR");
  e->add_flag("--rare", ev.rare, "Outcome is rare (odds ratios)");
  e->add_option("--lo", ev.lo, "Lower confidence limit");
  e->add_option("--hi", ev.hi, "Upper confidence limit");
  e->add_option("--true", ev.truth, "True value to explain away to (default 1)");
  e->add_flag("--quiet", ev.quiet, "Print only the matrix");
  e->add_option("--format", ev.format, "text or json");

  detail::SummaryArgs sum;
  auto* s = app.add_subcommand("summary", "Parameters a bias set requires");
  s->add_option("--biases", sum.biases, spec_help)->required();
  s->add_flag("--latex", sum.latex, "Add a LaTeX column");
  s->add_option("--format", sum.format, "text or json");

  detail::GridArgs grid;
  auto* gr = app.add_subcommand("grid", "Bounds over two varied parameters");
  gr->add_option("--biases", grid.biases, spec_help)->required();
  gr->add_option("--vary", grid.vary, "NAME=start:stop:step or NAME=v1,v2,...; give twice")
      ->required();
  gr->add_option("--param", grid.params, "Fixed NAME=VALUE, repeatable");
  gr->add_option("--round", grid.round, "Round cells to this many decimals");
  gr->add_option("--format", grid.format, "text, csv or json");

  detail::CurveArgs curve;
  auto* c = app.add_subcommand("curve", "E-values over a range of observed risk ratios");
  c->add_option("--bias-sets", curve.bias_sets, "Comma-separated bias sets; repeatable")
      ->required();
  c->add_option("--rr-min", curve.rr_min, "Smallest risk ratio (default 1)");
  c->add_option("--rr-max", curve.rr_max, "Largest risk ratio (default 7)");
  c->add_option("--points", curve.points, "Number of risk ratios (default 61)");
  c->add_option("--format", curve.format, "csv, json or text");

  detail::VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Check bounds on random exact populations");
  std::string names;
  for (const auto& st : oracle::named_structures()) names += std::string(names.empty() ? "" : ", ") + st.name;
  v->add_option("--structure", ver.structure, "One of: " + names);
  v->add_option("--worlds", ver.worlds, "Number of populations (default 1000)");
  v->add_option("--seed", ver.seed, "First seed; population i uses seed + i");
  v->add_option("--rare-ceiling", ver.rare_ceiling, "Upper limit on outcome risk");
  v->add_option("--confounder-levels", ver.confounder_levels, "Levels of U_c (2 or 3; 0 draws)");
  v->add_option("--selection-levels", ver.selection_levels, "Levels of U_s (2 or 3; 0 draws)");
  v->add_option("--format", ver.format, "jsonl or summary");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex, out, err);
    return 2;
  }

  std::string biases;
  try {
    if (b->parsed()) {
      biases = bound.biases;
      detail::cmd_bound(bound, out);
    }
    if (e->parsed()) detail::cmd_evalue(ev, out);
    if (s->parsed()) detail::cmd_summary(sum, out);
    if (gr->parsed()) {
      biases = grid.biases;
      detail::cmd_grid(grid, out);
    }
    if (c->parsed()) detail::cmd_curve(curve, out);
    if (v->parsed()) detail::cmd_verify(ver, out);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    if (ex.code() == ErrorCode::MissingParameter || ex.code() == ErrorCode::UnknownParameter)
      detail::print_expected(biases, err);
    return 2;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace multibias::cli
