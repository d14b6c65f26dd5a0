#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "transforma/pipeline.hpp"
#include "transforma/report.hpp"

namespace transforma {

// Sweep spec (JSON), one of:
//   {"mode": "iso_value", "branches": [1, 3], "from": -0.3, "to": 0.1, "samples": 21}
//     v_a += t/Λ_a and v_b -= t/Λ_b for t in [from, to]: Λ·v stays fixed.
//   {"mode": "scale", "from": 0, "to": 1, "samples": 11}
//     v -> t·v.
struct SweepSpec {
  enum class Mode { IsoValue, Scale };
  Mode mode = Mode::Scale;
  std::size_t toward = 0;  // zero-based branch receiving value (iso-value)
  std::size_t away = 0;    // zero-based branch giving value up (iso-value)
  double from = 0.0;
  double to = 1.0;
  std::size_t samples = 11;

  double parameter(std::size_t k) const {
    if (samples == 1) return from;
    return from + (to - from) * static_cast<double>(k) / static_cast<double>(samples - 1);
  }
};

inline SweepSpec parse_sweep_spec(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw Error(ErrorKind::Parse, std::string("malformed sweep spec: ") + err.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "sweep spec must be a JSON object");
  SweepSpec spec;
  const std::string mode = doc.value("mode", std::string("scale"));
  if (mode == "iso_value") {
    spec.mode = SweepSpec::Mode::IsoValue;
    const auto it = doc.find("branches");
    if (it == doc.end() || !it->is_array() || it->size() != 2 || !(*it)[0].is_number_integer() ||
        !(*it)[1].is_number_integer())
      throw Error(ErrorKind::Parse, "iso_value sweep needs 'branches': [a, b]");
    const auto a = (*it)[0].get<std::int64_t>(), b = (*it)[1].get<std::int64_t>();
    if (a < 1 || b < 1 || a == b) throw Error(ErrorKind::Parse, "iso_value branches must be distinct and 1-based");
    spec.toward = static_cast<std::size_t>(a - 1);
    spec.away = static_cast<std::size_t>(b - 1);
  } else if (mode == "scale") {
    spec.mode = SweepSpec::Mode::Scale;
  } else {
    throw Error(ErrorKind::Parse, "unknown sweep mode '" + mode + "'");
  }
  auto number = [&](const char* key, double fallback) {
    const auto it = doc.find(key);
    if (it == doc.end()) return fallback;
    if (!it->is_number()) throw Error(ErrorKind::Parse, std::string("'") + key + "' must be a number");
    return it->get<double>();
  };
  spec.from = number("from", spec.from);
  spec.to = number("to", spec.to);
  if (const auto it = doc.find("samples"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 1)
      throw Error(ErrorKind::Parse, "'samples' must be a positive integer");
    spec.samples = static_cast<std::size_t>(it->get<std::int64_t>());
  }
  return spec;
}

struct SweepRow {
  std::size_t index = 0;
  double parameter = 0.0;
  Vector basket;
  double basket_value = std::nan("");
  double exploitation = std::nan("");
  double rate = std::nan("");
  double price_scale = std::nan("");
  Vector coefficients;
  Vector capital;
  std::string status = "ok";
};

struct SweepResult {
  std::size_t n = 0;
  std::vector<SweepRow> rows;
  std::optional<double> exploitation_spread;  // iso-value sweeps only

  /// Iso-value sweeps must keep e fixed to within this tolerance.
  static constexpr double kExploitationTolerance = 1e-9;

  bool consistent() const {
    return !exploitation_spread || *exploitation_spread <= kExploitationTolerance;
  }
};

inline SweepRow sweep_sample(const Economy& base, const LaborValues& lambda, const SweepSpec& spec,
                             std::size_t k, const SolveOptions& options) {
  SweepRow row;
  row.index = k;
  row.parameter = spec.parameter(k);
  row.basket = base.wage_basket;
  if (spec.mode == SweepSpec::Mode::Scale) {
    for (double& x : row.basket) x *= row.parameter;
  } else {
    row.basket[spec.toward] += row.parameter / lambda[spec.toward];
    row.basket[spec.away] -= row.parameter / lambda[spec.away];
  }
  if (std::any_of(row.basket.begin(), row.basket.end(), [](double x) { return x < 0.0; })) {
    row.status = "negative_basket";
    return row;
  }
  row.basket_value = dot(lambda.values, row.basket);

  Economy e = base;
  e.wage_basket = row.basket;
  e.exact.reset();
  try {
    const ValidatedEconomy ve = validate(std::move(e));
    const WageStructure ws = wage_structure(lambda, ve->wage_basket);
    row.basket_value = ws.basket_value;
    row.exploitation = ws.exploitation;
    const UnitValueTable table = unit_value_table(ve, lambda, ws);
    const PriceEigenSystem ps = profit_rate(build_share_matrix(table.per_capital()), options.eigen);
    row.rate = ps.rate;
    const Solution s = solve(ve, options);
    row.price_scale = s.allocation.price_scale;
    row.coefficients = s.allocation.price_coefficients;
    row.capital = s.allocation.capital;
  } catch (const Error& err) {
    row.status = err.kind() == ErrorKind::WageExceedsValue ? "infeasible" : std::string(to_string(err.kind()));
  }
  return row;
}

/// Solves one scenario per basket of the family. Failed samples are kept
/// with a status instead of being dropped.
inline SweepResult run_sweep(const ValidatedEconomy& ve, const SweepSpec& spec,
                             const SolveOptions& options = {}) {
  const Economy& base = ve.economy();
  if (spec.mode == SweepSpec::Mode::IsoValue && (spec.toward >= base.n || spec.away >= base.n))
    throw Error(ErrorKind::Structural, "sweep branch index out of range");
  const LaborValues lambda = labor_values(ve);

  SweepResult result;
  result.n = base.n;
  result.rows.reserve(spec.samples);
  for (std::size_t k = 0; k < spec.samples; ++k)
    result.rows.push_back(sweep_sample(base, lambda, spec, k, options));

  if (spec.mode == SweepSpec::Mode::IsoValue) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& row : result.rows) {
      if (std::isnan(row.exploitation)) continue;
      lo = std::min(lo, row.exploitation);
      hi = std::max(hi, row.exploitation);
    }
    if (lo <= hi) result.exploitation_spread = hi - lo;
  }
  return result;
}

/// CSV: comma separated, header row, '.' decimals, LF line endings.
inline std::string sweep_csv(const SweepResult& result, int digits = 15) {
  const std::size_t n = result.n;
  std::string out = "index,parameter";
  for (std::size_t i = 0; i < n; ++i) out += ",v_" + std::to_string(i + 1);
  out += ",basket_value,e,r,q_star";
  for (std::size_t i = 0; i < n; ++i) out += ",x_" + std::to_string(i + 1);
  for (std::size_t i = 0; i < n; ++i) out += ",K_" + std::to_string(i + 1);
  out += ",status\n";

  auto field = [&](double x) { return std::isnan(x) ? std::string() : format_number(x, digits); };
  for (const auto& row : result.rows) {
    out += std::to_string(row.index) + "," + field(row.parameter);
    for (std::size_t i = 0; i < n; ++i) out += "," + field(row.basket[i]);
    out += "," + field(row.basket_value) + "," + field(row.exploitation) + "," + field(row.rate) + "," +
           field(row.price_scale);
    for (std::size_t i = 0; i < n; ++i) out += "," + (row.coefficients.empty() ? "" : field(row.coefficients[i]));
    for (std::size_t i = 0; i < n; ++i) out += "," + (row.capital.empty() ? "" : field(row.capital[i]));
    out += "," + row.status + "\n";
  }
  return out;
}

}  // namespace transforma
