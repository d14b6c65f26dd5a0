// transforma: labor values to production prices for simple-reproduction
// economies.
//
//   transforma solve <file> [--solver S] [--digits D] [--format F] [--normalize-to X] [-o out]
//   transforma check <file>
//   transforma sweep <file> --spec <sweepfile> -o <csv>
//
// Exit codes: 0 success, 1 domain or check failure, 2 I/O or usage error.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "transforma/transforma.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;

int report_error(const transforma::Error& err) {
  std::cerr << "error: " << transforma::to_string(err.kind()) << ": " << err.what() << "\n";
  return err.kind() == transforma::ErrorKind::Io ? kExitIo : kExitDomain;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw transforma::Error(transforma::ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw transforma::Error(transforma::ErrorKind::Io, "cannot write '" + path + "'");
}

transforma::ValidatedEconomy load(const std::string& path) {
  auto ve = transforma::validate(transforma::load_scenario(path));
  for (const auto& w : ve.warnings()) std::cerr << "warning: " << w << "\n";
  return ve;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transform labor values into production prices"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string solver = "direct";
  int digits = 9;
  std::string format = "text";
  std::optional<double> normalize_to;
  std::string output_path;
  std::string spec_path;

  auto* solve_cmd = app.add_subcommand("solve", "Solve a scenario and print the value and price tables");
  solve_cmd->add_option("file", scenario_path, "Scenario file")->required();
  solve_cmd->add_option("--solver", solver, "Allocation solver")
      ->check(CLI::IsMember({"direct", "iterative", "both"}));
  solve_cmd->add_option("--digits", digits, "Significant digits")->check(CLI::Range(1, 17));
  solve_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv"}));
  solve_cmd->add_option("--normalize-to", normalize_to, "Report for this total capital instead of K_T")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("-o,--output", output_path, "Also write the report to this file");

  auto* check_cmd = app.add_subcommand("check", "Run every solver and invariant check on a scenario");
  check_cmd->add_option("file", scenario_path, "Scenario file")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Solve a family of wage baskets and write CSV");
  sweep_cmd->add_option("file", scenario_path, "Scenario file")->required();
  sweep_cmd->add_option("--spec", spec_path, "Sweep spec file")->required();
  sweep_cmd->add_option("-o,--output", output_path, "CSV output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (*solve_cmd) {
      const auto ve = load(scenario_path);
      transforma::SolveOptions options;
      static const std::map<std::string, transforma::SolverChoice> choices{
          {"direct", transforma::SolverChoice::Direct},
          {"iterative", transforma::SolverChoice::Iterative},
          {"both", transforma::SolverChoice::Both}};
      options.solver = choices.at(solver);
      options.normalize_to = normalize_to;
      const auto solution = transforma::solve(ve, options);
      transforma::ReportOptions ropts;
      ropts.digits = digits;
      ropts.format = format == "csv" ? transforma::ReportFormat::Csv : transforma::ReportFormat::Text;
      const std::string text = transforma::render_report(solution, ropts);
      std::cout << text;
      if (!output_path.empty()) write_file(output_path, text);
      return kExitOk;
    }
    if (*check_cmd) {
      const auto ve = load(scenario_path);
      const auto report = transforma::run_checks(ve);
      std::cout << transforma::render_check(report);
      return report.passed() ? kExitOk : kExitDomain;
    }
    if (*sweep_cmd) {
      const auto ve = load(scenario_path);
      const auto spec = transforma::parse_sweep_spec(transforma::read_text_file(spec_path));
      const auto result = transforma::run_sweep(ve, spec);
      write_file(output_path, transforma::sweep_csv(result));
      std::size_t ok = 0;
      for (const auto& row : result.rows) ok += row.status == "ok";
      std::cout << "wrote " << result.rows.size() << " rows (" << ok << " solved) to " << output_path << "\n";
      if (!result.consistent()) {
        std::cerr << "error: exploitation rate varies by " << *result.exploitation_spread
                  << " across an iso-value sweep\n";
        return kExitDomain;
      }
      return kExitOk;
    }
  } catch (const transforma::Error& err) {
    return report_error(err);
  }
  return kExitOk;
}
