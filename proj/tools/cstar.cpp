// cstar <command> <spec.json> [--depth N] [--budget K] [--tol X] [--json PATH] [--seed S]

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cstar/error.hpp"
#include "cstar/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Covariant GNS dilations of finite-dimensional C*-dynamical systems"};
  std::string command;
  std::string path;
  std::string json_path;
  bool text_only = false;
  cstar::RunOptions options;
  std::size_t depth = options.depth;
  std::optional<std::size_t> budget;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;

  std::string choices;
  for (const auto& n : cstar::command_names()) choices += (choices.empty() ? "" : ", ") + n;
  app.add_option("command", command, "one of: " + choices)->required();
  app.add_option("spec", path, "system spec (JSON)")->required();
  app.add_option("--depth", depth, "tower depth N")->check(CLI::PositiveNumber);
  app.add_option("--budget", budget, "number of V_inf applications");
  app.add_option("--tol", tol, "base residual threshold")->check(CLI::PositiveNumber);
  app.add_option("--json", json_path, "write the JSON report here ('-' for stdout)");
  app.add_option("--seed", seed, "seed for randomized checks");
  app.add_flag("--quiet", text_only, "suppress the text summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (!cstar::is_command(command)) {
    std::cerr << "unknown command '" << command << "'; expected one of: " << choices << "\n";
    return 2;
  }
  options.depth = depth;
  options.budget = budget;
  options.tol = tol;
  options.seed = seed;

  cstar::Report report;
  try {
    const cstar::SystemSpec spec = cstar::parse_system(path);
    report = cstar::run(command, spec, options);
  } catch (const cstar::Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }

  if (json_path == "-") {
    std::cout << cstar::emit_report(report, cstar::Format::Json);
  } else {
    if (!json_path.empty()) {
      std::ofstream out(json_path);
      if (!out) {
        std::cerr << "cannot write " << json_path << "\n";
        return 2;
      }
      out << cstar::emit_report(report, cstar::Format::Json);
    }
    if (!text_only) std::cout << cstar::emit_report(report, cstar::Format::Text);
  }
  return cstar::exit_code(report);
}
