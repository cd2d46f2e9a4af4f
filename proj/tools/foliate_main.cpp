#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>

#include "foliate/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Foliation characteristic-class verifier"};
  std::string command;
  std::vector<std::string> positional;
  foliate::RunOptions options;
  std::string format = "text";
  app.add_option("command", command, "check-cocycle | singular-set | involutivity | adapted-check | chern-weil | gv | "
                                     "wo-cohomology | gf-verify")
      ->required();
  app.add_option("args", positional, "foliation file and/or q=<k>");
  app.add_option("--seed", options.seed, "random seed")->capture_default_str();
  app.add_option("--samples", options.samples, "sample points per sampled check")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--format", format, "output format")->capture_default_str()->check(CLI::IsMember({"text", "lines"}));
  app.add_option("--grid", options.grid, "density grid points per axis (odd)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (!foliate::is_command(command)) throw foliate::Error("usage", "unknown command '" + command + "'");
    std::map<std::string, std::string> args;
    std::optional<foliate::Document> doc;
    for (const auto& p : positional) {
      auto eq = p.find('=');
      if (eq != std::string::npos) {
        args[p.substr(0, eq)] = p.substr(eq + 1);
      } else if (!doc) {
        doc = foliate::parse_document_file(p);
      } else {
        throw foliate::Error("usage", "more than one foliation file");
      }
    }
    foliate::Report report = foliate::run_command(command, doc ? &*doc : nullptr, args, options);
    std::cout << foliate::emit(report, format == "lines" ? foliate::Format::Lines : foliate::Format::Text);
    return foliate::exit_status(report);
  } catch (const foliate::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
