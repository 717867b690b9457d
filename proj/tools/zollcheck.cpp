// zollcheck: verification suites for the compactified tube model.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "zoll/error.hpp"
#include "zoll/report.hpp"

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

std::string checks_csv(const zoll::Report& report) {
  std::ostringstream out;
  out << "check,n,grid,tolerance,max_residual,verdict\n";
  for (const auto& c : report.checks) {
    const auto& m = c.metrics;
    out << c.name << ',' << m.value("n", 0) << ',' << m.value("grid", 0) << ',' << m.value("tolerance", 0.0) << ',';
    if (m.contains("max_residual") && m["max_residual"].is_number()) {
      out << m["max_residual"].get<double>();
    } else {
      out << "inf";
    }
    out << ',' << c.verdict << '\n';
  }
  return out.str();
}

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream file(path);
  if (!file) {
    std::cerr << "cannot write " << path << '\n';
    return exit_usage;
  }
  file << text;
  return 0;
}

int finish(const zoll::Report& report, const std::string& format, const std::string& path) {
  const std::string text = format == "csv" ? checks_csv(report) : report.to_json().dump(2) + "\n";
  if (const int rc = emit(text, path)) return rc;
  return report.passed() ? exit_pass : exit_fail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for the compactified tangent bundle of CP^n"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(zoll::tool_version));

  zoll::SuiteOptions suite;
  std::string out_path;
  std::string format = "json";
  const auto common = [&](CLI::App* cmd, bool with_suite) {
    cmd->add_option("--out", out_path, "Write the report to FILE");
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    if (with_suite) {
      cmd->add_option("--seed", suite.seed, "Random seed");
      cmd->add_option("--grid", suite.grid, "Samples per check (0: default)")->check(CLI::NonNegativeNumber);
      cmd->add_option("--tol", suite.tolerance, "Override check tolerances")->check(CLI::NonNegativeNumber);
    }
  };

  auto* verify = app.add_subcommand("verify-model", "Exhaustion, potential, leaf, HCMA, harmonicity and inverse checks");
  verify->add_option("--n", suite.n, "Dimension of CP^n (1..3)");
  common(verify, true);

  int cohomology_n = 2;
  auto* cohomology = app.add_subcommand("cohomology", "Cohomology tables of UM, D and X");
  cohomology->add_option("--n", cohomology_n, "Dimension of CP^n")->check(CLI::PositiveNumber);
  common(cohomology, false);

  auto* degrees = app.add_subcommand("degrees", "Restricted degrees, Morse index and vanishing orders");
  degrees->add_option("--n", suite.n, "Dimension of CP^n (1 or 2)");
  common(degrees, true);

  zoll::TubeProbeRequest probe;
  auto* tube = app.add_subcommand("tube-probe", "Radius of the adapted tube for a block model");
  tube->add_option("--model", probe.model, "cpn, sphere or block")->check(CLI::IsMember({"cpn", "sphere", "block"}));
  tube->add_option("--n", probe.n, "Dimension for cpn/sphere");
  tube->add_option("--curvature", probe.curvature, "Curvature of the block model");
  tube->add_option("--tau-max", probe.tau_max, "Largest probed tau");
  tube->add_option("--grid", probe.grid, "Sigma grid size");
  common(tube, false);

  std::string matrix_path;
  std::uint64_t involution_seed = 7;
  int involution_samples = 100000;
  auto* involution = app.add_subcommand("involution", "Anti-holomorphic involutions of CP^n");
  involution->require_subcommand(1);
  auto* classify = involution->add_subcommand("classify", "Classify [Z] -> [conj(A Z)]");
  classify->add_option("--matrix", matrix_path, "JSON file with the matrix A")->required()->check(CLI::ExistingFile);
  classify->add_option("--seed", involution_seed, "Random seed");
  classify->add_option("--grid", involution_samples, "Fixed-point trials")->check(CLI::PositiveNumber);
  common(classify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_pass : exit_usage;
  }

  try {
    if (*verify) return finish(zoll::verify_model(suite), format, out_path);
    if (*degrees) return finish(zoll::degrees(suite), format, out_path);
    if (*tube) return finish(zoll::tube_probe(probe), format, out_path);
    if (*cohomology) {
      // CSV unless JSON is asked for explicitly.
      if (cohomology->count("--format") > 0 && format == "json") return finish(zoll::cohomology_report(cohomology_n), format, out_path);
      const zoll::Report report = zoll::cohomology_report(cohomology_n);
      if (const int rc = emit(zoll::cohomology_csv(cohomology_n), out_path)) return rc;
      return report.passed() ? exit_pass : exit_fail;
    }
    if (*classify) {
      std::ifstream file(matrix_path);
      nlohmann::json matrix;
      try {
        file >> matrix;
      } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid JSON in " << matrix_path << ": " << e.what() << '\n';
        return exit_usage;
      }
      return finish(zoll::classify_involution(matrix, involution_seed, involution_samples), format, out_path);
    }
  } catch (const zoll::Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == zoll::ErrorCode::InvalidArgument ? exit_usage : exit_fail;
  }
  return exit_usage;
}
