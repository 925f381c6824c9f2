// entcheck: decide whether a tensor-product state is factorized or entangled.
//
//   entcheck --input state.txt [--format dense|sparse] [--method auto|thm2|thm4|thm5|oracle]
//            [--tol-mag X] [--tol-ang X] [--tol-rank X] [--no-oracle-check] [--pretty]
//   entcheck gen (--product|--random) --dims 2,3 [--seed N] [--zero-avoidance]
//            [--min-magnitude X] [--format dense|sparse] [--output PATH]
//
// Exit status: 0 factorized, 1 entangled, 2 error / inconclusive / oracle disagreement.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entcheck/entcheck.hpp"

namespace {

constexpr int kExitFactorized = 0;
constexpr int kExitEntangled = 1;
constexpr int kExitError = 2;

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double env_tolerance(const char* name, double fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0') throw std::invalid_argument(std::string(name) + " is not a number: " + raw);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factorization / entanglement test for pure tensor-product states"};
  app.require_subcommand(0, 1);

  std::string input, format = "dense", method = "auto";
  std::optional<double> tol_mag, tol_ang, tol_rank;
  bool no_oracle = false, pretty = false;
  app.add_option("--input", input, "State file ('-' for stdin)");
  app.add_option("--format", format, "Input format")->check(CLI::IsMember({"dense", "sparse"}));
  app.add_option("--method", method, "Criterion to apply")
      ->check(CLI::IsMember({"auto", "thm2", "thm4", "thm5", "oracle"}));
  app.add_option("--tol-mag", tol_mag, "Relative magnitude tolerance (default 1e-9, env ENTCHECK_TOL_MAG)");
  app.add_option("--tol-ang", tol_ang, "Angular tolerance in radians (default 1e-9)");
  app.add_option("--tol-rank", tol_rank, "Relative rank cutoff (default 1e-10)");
  app.add_flag("--no-oracle-check", no_oracle, "Skip the rank-oracle cross-check");
  app.add_flag("--pretty", pretty, "Append a human-readable table");

  auto* gen = app.add_subcommand("gen", "Write a seeded random state");
  bool product = false, random = false, zero_avoidance = false;
  std::vector<std::size_t> dims;
  std::uint64_t seed = 0;
  double min_magnitude = 0.0;
  std::string gen_format = "dense", output;
  auto* product_flag = gen->add_flag("--product", product, "Outer product of random factors");
  auto* random_flag = gen->add_flag("--random", random, "I.i.d. random coefficients");
  product_flag->excludes(random_flag);
  gen->add_option("--dims", dims, "Party dimensions, comma separated")->required()->delimiter(',');
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_flag("--zero-avoidance", zero_avoidance, "Product factors: moduli >= 0.1 and |sum| >= 1e-6");
  gen->add_option("--min-magnitude", min_magnitude, "Random entries: redraw below this modulus");
  gen->add_option("--format", gen_format, "Output format")->check(CLI::IsMember({"dense", "sparse"}));
  gen->add_option("--output", output, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (gen->parsed()) {
      if (product == random) throw std::invalid_argument("gen needs exactly one of --product or --random");
      const auto t = product ? entcheck::gen_product_state(dims, seed, zero_avoidance)
                             : entcheck::gen_random_state(dims, seed, min_magnitude);
      const std::string text = entcheck::write_state(t, entcheck::parse_format(gen_format));
      if (output.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + output + "'");
        out << text;
      }
      return 0;
    }

    if (input.empty()) throw std::invalid_argument("--input is required");
    entcheck::AnalysisConfig config;
    config.method = entcheck::parse_method(method);
    config.tol.eps_mag = tol_mag.value_or(env_tolerance("ENTCHECK_TOL_MAG", config.tol.eps_mag));
    if (tol_ang) config.tol.eps_ang = *tol_ang;
    if (tol_rank) config.tol.eps_rank = *tol_rank;
    config.oracle_check = !no_oracle;

    const auto state = entcheck::parse_state(read_input(input), entcheck::parse_format(format));
    const auto report = entcheck::analyze(state, config);
    std::cout << entcheck::render_report(report);
    if (pretty) std::cout << entcheck::render_table(report);

    if (report.oracle && !report.oracle->agrees) {
      std::cerr << "entcheck: criterion and rank oracle disagree\n"
                << entcheck::write_dense(state);
      return kExitError;
    }
    switch (report.outcome) {
      case entcheck::Outcome::factorized: return kExitFactorized;
      case entcheck::Outcome::entangled: return kExitEntangled;
      case entcheck::Outcome::inconclusive:
        std::cerr << "entcheck: inconclusive: " << report.reason << "\n";
        return kExitError;
    }
  } catch (const std::exception& e) {
    std::cerr << "entcheck: " << e.what() << "\n";
  }
  return kExitError;
}
