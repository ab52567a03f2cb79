// nshyd: run sweep and simulation scenarios, write CSV.
//
// Exit codes: 0 success, 2 invalid scenario or command line, 3 solver
// failure, 1 I/O error.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nshyd/errors.hpp"
#include "nshyd/runner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kIo = 1;
constexpr int kInvalid = 2;
constexpr int kSolver = 3;

using nshyd::scenario::Mode;

int execute(const std::string& file, const std::string& out, Mode expected, bool write) {
  const auto sc = nshyd::scenario::load(file);
  const char* name = sc.mode == Mode::Sweep ? "sweep" : "simulate";
  if (!write) {
    std::cout << file << ": valid " << name << " scenario\n";
    return kOk;
  }
  if (sc.mode != expected) {
    std::cerr << "error: " << file << " is a " << name << " scenario\n";
    return kInvalid;
  }
  const std::string path = out.empty() ? sc.output.path : out;
  if (path.empty()) {
    std::cerr << "error: no output file (use -o or output.path)\n";
    return kInvalid;
  }
  const auto table = nshyd::runner::run(sc);
  if (path == "-") nshyd::write_csv(std::cout, table);
  else nshyd::write_csv(path, table);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasistatic hydraulic actuator sweeps and arm simulations"};
  app.require_subcommand(1);
  std::string file, out;

  auto* sweep = app.add_subcommand("sweep", "Evaluate the force map over a velocity grid");
  sweep->add_option("scenario", file, "Scenario file")->required();
  sweep->add_option("-o,--output", out, "CSV file ('-' for stdout); defaults to output.path");

  auto* simulate = app.add_subcommand("simulate", "Step the arm scenario over its time horizon");
  simulate->add_option("scenario", file, "Scenario file")->required();
  simulate->add_option("-o,--output", out, "CSV file ('-' for stdout); defaults to output.path");

  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("scenario", file, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*sweep) return execute(file, out, Mode::Sweep, true);
    if (*simulate) return execute(file, out, Mode::Simulate, true);
    return execute(file, out, Mode::Sweep, false);
  } catch (const nshyd::scenario::ValidationError& e) {
    std::cerr << "error: invalid scenario " << file << "\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return kInvalid;
  } catch (const nshyd::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const nshyd::RegimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const nshyd::runner::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
}
