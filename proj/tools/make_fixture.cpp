// Writes a synthetic data set plus config.ini for trying out `audit report all`.
#include <iostream>

#include "CLI11.hpp"
#include "fixture.hpp"
#include "simaudit/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate synthetic audit inputs"};
  std::string out = "fixture";
  simaudit::fixture::Options opt;
  app.add_option("out", out, "Output directory");
  app.add_option("--seed", opt.seed, "Generator seed");
  app.add_option("--terms", opt.terms, "Number of terms");
  app.add_option("--topics", opt.topics, "Number of latent topics");
  app.add_option("--dim", opt.dim, "Text embedding dimension");
  app.add_option("--trials", opt.baseline_trials, "Baseline trials written to config.ini");
  CLI11_PARSE(app, argc, argv);
  try {
    simaudit::fixture::write(out, opt);
  } catch (const simaudit::Error& e) {
    std::cerr << "make_fixture: " << e.what() << '\n';
    return 3;
  }
  std::cout << "wrote " << out << '\n';
  return 0;
}
