#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "transforma/pipeline.hpp"

namespace transforma {

enum class ReportFormat { Text, Csv };

struct ReportOptions {
  int digits = 9;
  ReportFormat format = ReportFormat::Text;
};

inline std::string format_number(double x, int digits) {
  if (std::isinf(x)) return x > 0 ? "infinite" : "-infinite";
  if (std::isnan(x)) return "undefined";
  if (x == 0.0) return "0";  // also folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

/// A labelled numeric table. Totals are summed at full precision before
/// formatting.
struct Table {
  std::string title;
  std::string corner;
  std::vector<std::string> columns;
  std::vector<std::pair<std::string, Vector>> rows;
  bool totals = false;
  std::vector<bool> total_columns;  // empty: every column gets a total

  Vector total_row() const {
    Vector t(columns.size(), 0.0);
    for (const auto& r : rows)
      for (std::size_t c = 0; c < t.size(); ++c) t[c] += r.second[c];
    return t;
  }
};

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline void render_text_table(std::string& out, const Table& t, int digits) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{t.corner};
  header.insert(header.end(), t.columns.begin(), t.columns.end());
  cells.push_back(header);
  for (const auto& [label, values] : t.rows) {
    std::vector<std::string> row{label};
    for (double v : values) row.push_back(format_number(v, digits));
    cells.push_back(std::move(row));
  }
  if (t.totals) {
    const Vector tot = t.total_row();
    std::vector<std::string> row{"Total"};
    for (std::size_t c = 0; c < tot.size(); ++c) {
      const bool show = t.total_columns.empty() || t.total_columns[c];
      row.push_back(show ? format_number(tot[c], digits) : "");
    }
    cells.push_back(std::move(row));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());

  out += t.title + "\n";
  for (const auto& row : cells) {
    std::string line = "  ";
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string pad(width[c] - row[c].size(), ' ');
      line += c == 0 ? row[c] + pad : "  " + pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  out += "\n";
}

inline void render_csv_table(std::string& out, const std::string& section, const Table& t, int digits) {
  for (const auto& [label, values] : t.rows)
    for (std::size_t c = 0; c < values.size(); ++c)
      out += section + "," + csv_field(label) + "," + csv_field(t.columns[c]) + "," +
             format_number(values[c], digits) + "\n";
  if (t.totals) {
    const Vector tot = t.total_row();
    for (std::size_t c = 0; c < tot.size(); ++c)
      if (t.total_columns.empty() || t.total_columns[c])
        out += section + ",Total," + csv_field(t.columns[c]) + "," + format_number(tot[c], digits) + "\n";
  }
}

}  // namespace detail

/// Tables of a solved scenario, keyed by a short section name.
inline std::vector<std::pair<std::string, Table>> report_tables(const Solution& s) {
  const Economy& e = s.economy;
  const std::size_t n = e.n;
  const Allocation& a = s.allocation;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(e.label(i));
  std::vector<std::pair<std::string, Table>> tables;

  {
    Table t{"Value table for the production of one unit of each commodity", "", names, {}, true, {}};
    t.columns.push_back("pl");
    t.columns.push_back("w");
    for (std::size_t j = 0; j < n; ++j) {
      Vector row;
      for (std::size_t i = 0; i < n; ++i) row.push_back(s.table.per_unit.c(i, j));
      row.push_back(s.table.per_unit.surplus[j]);
      row.push_back(s.table.per_unit.output[j]);
      t.rows.emplace_back(names[j], std::move(row));
    }
    tables.emplace_back("unit_values", std::move(t));
  }

  // Wage outlays per branch: the variable part of the committed capital.
  Vector wages_value(n, 0.0), wages_price(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double per_capital = a.capital[i] / s.table.capital[i];
    for (std::size_t j = 0; j < n; ++j) {
      wages_value[i] += per_capital * s.table.variable(j, i);
      wages_price[i] += per_capital * s.table.variable(j, i) * a.price_coefficients[j];
    }
  }

  {
    Table t{"Distribution consistent with social need (values)", "", names, {}, true, {}};
    t.columns.insert(t.columns.end(), {"pl", "W", "Wages"});
    for (std::size_t i = 0; i < n; ++i) {
      Vector row;
      for (std::size_t j = 0; j < n; ++j) row.push_back(a.inputs(i, j));
      row.push_back(a.surplus_value[i]);
      row.push_back(a.output_value[i]);
      row.push_back(wages_value[i]);
      t.rows.emplace_back(names[i], std::move(row));
    }
    t.total_columns.assign(t.columns.size(), true);
    t.total_columns.back() = false;
    tables.emplace_back("distribution_values", std::move(t));
  }

  {
    Table t{"Distribution consistent with social need (prices)", "", names, {}, true, {}};
    t.columns.insert(t.columns.end(), {"S", "P", "Wages"});
    for (std::size_t i = 0; i < n; ++i) {
      Vector row;
      for (std::size_t j = 0; j < n; ++j) row.push_back(a.inputs(i, j) * a.price_coefficients[j]);
      row.push_back(a.profit[i]);
      row.push_back(a.output_price[i]);
      row.push_back(wages_price[i]);
      t.rows.emplace_back(names[i], std::move(row));
    }
    t.total_columns.assign(t.columns.size(), true);
    t.total_columns.back() = false;
    tables.emplace_back("distribution_prices", std::move(t));
  }

  {
    Table t{"Profit rate, transformation coefficients and capitals", "",
            {"r", "x", "K", "Kp", "Unit price"}, {}, true, {false, false, true, true, false}};
    for (std::size_t i = 0; i < n; ++i) {
      t.rows.emplace_back(names[i], Vector{s.prices.rate, a.price_coefficients[i], a.capital[i],
                                           a.capital_price[i],
                                           a.price_coefficients[i] * s.labor[i]});
    }
    tables.emplace_back("summary", std::move(t));
  }

  {
    Table t{"Augmented matrix A' = A + v l", "", names, {}, false, {}};
    for (std::size_t i = 0; i < n; ++i)
      t.rows.emplace_back(names[i], Vector(s.augmented.row(i).begin(), s.augmented.row(i).end()));
    tables.emplace_back("augmented_matrix", std::move(t));
  }

  {
    Table t{"Quantities", "", {"Lambda", "Lambda'", "g", "y", "y (value route)"}, {}, false, {}};
    for (std::size_t i = 0; i < n; ++i) {
      const double lp = s.augmented_values ? (*s.augmented_values)[i] : std::nan("");
      t.rows.emplace_back(names[i], Vector{s.labor[i], lp, s.quantities.gross[i], s.quantities.net[i],
                                           s.quantities.net_from_values[i]});
    }
    tables.emplace_back("quantities", std::move(t));
  }
  return tables;
}

inline std::vector<std::pair<std::string, double>> report_scalars(const Solution& s) {
  std::vector<std::pair<std::string, double>> out{
      {"Lambda.v", s.wages.basket_value},
      {"e", s.wages.exploitation},
      {"lambda", s.prices.lambda},
      {"r", s.prices.rate},
      {"q*", s.allocation.price_scale},
      {"K_T", s.total_capital},
      {"sum K", sum(s.allocation.capital)},
      {"sum Kp", sum(s.allocation.capital_price)},
      {"sum PL", sum(s.allocation.surplus_value)},
      {"sum S", sum(s.allocation.profit)},
      {"residual equality I", s.residuals.equality_one},
      {"residual equality II", s.residuals.equality_two},
      {"residual reproduction", s.residuals.reproduction},
      {"residual eigen", s.prices.eigen_residual()},
  };
  if (s.cross_solver_deviation) out.emplace_back("cross-solver deviation", *s.cross_solver_deviation);
  return out;
}

inline std::string render_report(const Solution& s, const ReportOptions& options = {}) {
  std::string out;
  const auto tables = report_tables(s);
  const auto scalars = report_scalars(s);
  if (options.format == ReportFormat::Csv) {
    out += "section,row,column,value\n";
    for (const auto& [name, value] : scalars)
      out += "scalar," + detail::csv_field(name) + ",value," + format_number(value, options.digits) + "\n";
    for (const auto& [section, table] : tables) detail::render_csv_table(out, section, table, options.digits);
    return out;
  }

  out += "Economy with " + std::to_string(s.economy.n) + " branches, solver: " +
         std::string(to_string(s.solver)) + "\n\n";
  for (const auto& [section, table] : tables) detail::render_text_table(out, table, options.digits);
  out += "Summary\n";
  std::size_t w = 0;
  for (const auto& kv : scalars) w = std::max(w, kv.first.size());
  for (const auto& [name, value] : scalars)
    out += "  " + name + std::string(w - name.size(), ' ') + "  " + format_number(value, options.digits) + "\n";
  if (!s.notices.empty()) {
    out += "\nNotices\n";
    for (const auto& note : s.notices) out += "  " + note + "\n";
  }
  return out;
}

inline std::string render_check(const CheckReport& report, int digits = 3) {
  std::string out;
  std::size_t w = 0;
  for (const auto& item : report.items) w = std::max(w, item.name.size());
  for (const auto& item : report.items) {
    out += std::string(item.passed ? "PASS  " : "FAIL  ") + item.name + std::string(w - item.name.size(), ' ') +
           "  observed " + format_number(item.observed, digits) + "  tolerance " +
           format_number(item.tolerance, digits);
    if (!item.note.empty()) out += "  (" + item.note + ")";
    out += "\n";
  }
  for (const auto& note : report.notices) out += "note: " + note + "\n";
  out += report.passed() ? "all checks passed\n" : "some checks failed\n";
  return out;
}

}  // namespace transforma
