#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "transforma/economy.hpp"
#include "transforma/error.hpp"
#include "transforma/rational.hpp"

namespace transforma {

// Scenario document (JSON):
//
//   {
//     "n": 3,
//     "A": [["186/450", "54/21", "30/60"], ...],
//     "l": ["18/450", "12/21", "30/60"],
//     "v": [2, 0, "1/6"],
//     "K_T": 2.37022,              // or "auto"; optional
//     "fully_consumed": [2],       // 1-based; mandatory when n >= 3
//     "labels": ["Wheat", "Iron", "Meat"],
//     "allow_zero_labor": false    // optional
//   }
//
// Numbers are JSON numbers or strings holding "p/q" or a decimal literal.

namespace detail {

struct ParsedNumber {
  double value = 0.0;
  std::optional<Rational> exact;
};

inline ParsedNumber parse_number(const nlohmann::json& j, const std::string& where) {
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    try {
      const Rational r = Rational::parse(text);
      // Decimal literals get the correctly rounded double, not num/den.
      double value = r.to_double();
      if (text.find('/') == std::string::npos) {
        const auto t = detail::trim(text);
        std::from_chars(t.data(), t.data() + t.size(), value);
      }
      return {value, r};
    } catch (const Error& err) {
      throw Error(ErrorKind::Parse, where + ": " + err.what());
    }
  }
  if (j.is_number_integer() || j.is_number_unsigned()) {
    const auto v = j.get<std::int64_t>();
    return {static_cast<double>(v), Rational(v)};
  }
  if (j.is_number_float()) {
    const double v = j.get<double>();
    try {
      return {v, Rational::from_double(v)};
    } catch (const Error&) {
      return {v, std::nullopt};
    }
  }
  throw Error(ErrorKind::Parse, where + ": expected a number or a rational string");
}

inline const nlohmann::json& require(const nlohmann::json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw Error(ErrorKind::Parse, std::string("missing field '") + key + "'");
  return *it;
}

inline nlohmann::ordered_json render_number(double value, const std::optional<Rational>& exact) {
  if (exact) {
    if (exact->denominator() == 1) return exact->numerator();
    try {
      if (Rational::from_double(value) == *exact) return value;
    } catch (const Error&) {
    }
    return exact->str();
  }
  return value;
}

}  // namespace detail

/// Parses a scenario document. The result is not yet validated; negative
/// entries, dimension mismatches and a wrong fully_consumed cardinality are
/// rejected here already.
inline Economy parse_scenario(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw Error(ErrorKind::Parse, std::string("malformed scenario: ") + err.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "scenario must be a JSON object");

  const auto& n_field = detail::require(doc, "n");
  if (!n_field.is_number_integer() || n_field.get<std::int64_t>() < 1)
    throw Error(ErrorKind::Parse, "'n' must be a positive integer");

  Economy e;
  e.n = static_cast<std::size_t>(n_field.get<std::int64_t>());
  bool all_exact = true;
  ExactInputs exact;

  const auto& a_field = detail::require(doc, "A");
  if (!a_field.is_array() || a_field.size() != e.n)
    throw Error(ErrorKind::Dimension, "'A' must have n = " + std::to_string(e.n) + " rows");
  e.technology = Matrix(e.n, e.n);
  exact.technology = DenseMatrix<Rational>(e.n, e.n);
  for (std::size_t i = 0; i < e.n; ++i) {
    const auto& row = a_field[i];
    if (!row.is_array() || row.size() != e.n)
      throw Error(ErrorKind::Dimension, "row " + std::to_string(i + 1) + " of 'A' must have " +
                                            std::to_string(e.n) + " entries");
    for (std::size_t j = 0; j < e.n; ++j) {
      const auto num = detail::parse_number(
          row[j], "A[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]");
      e.technology(i, j) = num.value;
      if (num.exact) exact.technology(i, j) = *num.exact;
      else all_exact = false;
    }
  }

  auto read_vector = [&](const char* key, Vector& out, std::vector<Rational>& out_exact) {
    const auto& field = detail::require(doc, key);
    if (!field.is_array() || field.size() != e.n)
      throw Error(ErrorKind::Dimension,
                  std::string("'") + key + "' must have n = " + std::to_string(e.n) + " entries");
    out.resize(e.n);
    out_exact.resize(e.n);
    for (std::size_t i = 0; i < e.n; ++i) {
      const auto num = detail::parse_number(field[i], std::string(key) + "[" + std::to_string(i + 1) + "]");
      out[i] = num.value;
      if (num.exact) out_exact[i] = *num.exact;
      else all_exact = false;
    }
  };
  read_vector("l", e.labor, exact.labor);
  read_vector("v", e.wage_basket, exact.wage_basket);

  if (auto it = doc.find("K_T"); it != doc.end()) {
    if (!(it->is_string() && it->get<std::string>() == "auto")) {
      const auto num = detail::parse_number(*it, "K_T");
      e.total_capital = num.value;
      if (num.exact) exact.total_capital = *num.exact;
      else all_exact = false;
    }
  }

  if (auto it = doc.find("fully_consumed"); it != doc.end()) {
    if (!it->is_array()) throw Error(ErrorKind::Parse, "'fully_consumed' must be an array");
    for (const auto& idx : *it) {
      if (!idx.is_number_integer()) throw Error(ErrorKind::Parse, "'fully_consumed' entries must be integers");
      const auto k = idx.get<std::int64_t>();
      if (k < 1 || static_cast<std::size_t>(k) > e.n)
        throw Error(ErrorKind::Structural, "fully_consumed index " + std::to_string(k) + " out of range");
      e.fully_consumed.push_back(static_cast<std::size_t>(k - 1));
    }
    std::sort(e.fully_consumed.begin(), e.fully_consumed.end());
    if (std::adjacent_find(e.fully_consumed.begin(), e.fully_consumed.end()) != e.fully_consumed.end())
      throw Error(ErrorKind::Structural, "fully_consumed lists a branch twice");
  } else if (e.n >= 3) {
    throw Error(ErrorKind::Parse, "missing field 'fully_consumed' (mandatory when n >= 3)");
  }

  if (auto it = doc.find("labels"); it != doc.end()) {
    if (!it->is_array()) throw Error(ErrorKind::Parse, "'labels' must be an array of strings");
    for (const auto& s : *it) {
      if (!s.is_string()) throw Error(ErrorKind::Parse, "'labels' must be an array of strings");
      e.labels.push_back(s.get<std::string>());
    }
  }
  if (auto it = doc.find("allow_zero_labor"); it != doc.end()) {
    if (!it->is_boolean()) throw Error(ErrorKind::Parse, "'allow_zero_labor' must be a boolean");
    e.allow_zero_labor = it->get<bool>();
  }

  if (e.n >= 2) detail::check_structure(e);
  detail::check_entries(e);
  if (all_exact) e.exact = std::move(exact);
  return e;
}

/// Writes an economy back out in scenario format. Exact inputs are emitted
/// as rationals, so parse_scenario(render_scenario(e)) reproduces them.
inline std::string render_scenario(const Economy& e) {
  nlohmann::ordered_json doc;
  doc["n"] = e.n;
  const ExactInputs* x = e.exact ? &*e.exact : nullptr;
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < e.n; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < e.n; ++j)
      row.push_back(detail::render_number(
          e.technology(i, j), x ? std::optional<Rational>(x->technology(i, j)) : std::nullopt));
    a.push_back(row);
  }
  doc["A"] = a;

  auto vec = [&](const Vector& v, const std::vector<Rational>* ex) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(detail::render_number(v[i], ex ? std::optional<Rational>((*ex)[i]) : std::nullopt));
    return out;
  };
  doc["l"] = vec(e.labor, x ? &x->labor : nullptr);
  doc["v"] = vec(e.wage_basket, x ? &x->wage_basket : nullptr);

  if (e.total_capital) doc["K_T"] = detail::render_number(*e.total_capital, x ? x->total_capital : std::nullopt);
  else doc["K_T"] = "auto";

  nlohmann::ordered_json fc = nlohmann::ordered_json::array();
  for (std::size_t k : e.fully_consumed) fc.push_back(k + 1);
  doc["fully_consumed"] = fc;
  if (!e.labels.empty()) doc["labels"] = e.labels;
  if (e.allow_zero_labor) doc["allow_zero_labor"] = true;
  return doc.dump(2) + "\n";
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
  return ss.str();
}

inline Economy load_scenario(const std::string& path) { return parse_scenario(read_text_file(path)); }

}  // namespace transforma
