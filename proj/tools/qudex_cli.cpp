#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qudex/extremal.hpp"
#include "qudex/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"extremal density-matrix spectra and entropy-energy bounds"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  std::string figure;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config path, '-' for stdin");
    sub->add_option("--seed", seed, "override the RNG seed");
    sub->add_option("--out", out, "output file (default: stdout)");
    sub->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  add_common(app.add_subcommand("spectrum",
                                "recover the spectrum at pure constants and "
                                "compare against the eigensolver"));
  add_common(app.add_subcommand("sweep",
                                "extremal branches along a parameter grid"));
  add_common(app.add_subcommand("surface",
                                "tabulate the entropy-energy slack surface"));
  add_common(app.add_subcommand("inequality",
                                "sample admissible states against the bounds"));
  CLI::App* fig = app.add_subcommand("figure", "named preset data sets");
  fig->add_option("name", figure, "fig1, fig2a, fig2b, fig2c, fig2d, fig3, fig4")
      ->required();
  add_common(fig);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    qudex::RunConfig cfg;
    if (!config_path.empty()) cfg = qudex::load_config_file(config_path);
    cfg.command = app.get_subcommands().front()->get_name();
    if (!figure.empty()) cfg.figure = figure;
    if (app.get_subcommands().front()->count("--seed") > 0) cfg.seed = seed;
    if (!out.empty()) cfg.out = out;
    if (!format.empty()) cfg.format = format;
    return qudex::dispatch(cfg, std::cerr);
  } catch (const qudex::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
