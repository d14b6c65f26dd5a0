#pragma once

#include <string>

#include "transforma/transforma.hpp"

namespace fixture {

inline std::string scenario_path(const std::string& name) {
  return std::string(TRANSFORMA_SCENARIO_DIR) + "/" + name;
}

inline transforma::Economy load(const std::string& name) {
  return transforma::load_scenario(scenario_path(name));
}

inline transforma::Solution solve(const std::string& name, const transforma::SolveOptions& opts = {}) {
  return transforma::solve(transforma::validate(load(name)), opts);
}

/// Three-branch wheat/iron/meat technology shared by the reference scenarios.
inline transforma::Economy three_branch(transforma::Vector basket, double total_capital) {
  transforma::Economy e;
  e.n = 3;
  e.technology = transforma::Matrix{{186.0 / 450, 54.0 / 21, 30.0 / 60},
                                    {12.0 / 450, 6.0 / 21, 3.0 / 60},
                                    {9.0 / 450, 6.0 / 21, 15.0 / 60}};
  e.labor = {18.0 / 450, 12.0 / 21, 30.0 / 60};
  e.wage_basket = std::move(basket);
  e.total_capital = total_capital;
  e.fully_consumed = {1};
  e.labels = {"Wheat", "Iron", "Meat"};
  return e;
}

inline double rel(double a, double b) { return transforma::relative_gap(a, b); }

}  // namespace fixture
