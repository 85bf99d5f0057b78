#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "ssem/harness/config.hpp"
#include "ssem/harness/experiment.hpp"
#include "ssem/harness/output.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed_row = 1;
constexpr int exit_config = 2;

void report_row(const ssem::ConvergenceRow& r) {
  if (r.failed) {
    std::fprintf(stderr, "m=%-3zu p=%-4s FAILED: %s\n", r.m, r.p.c_str(), r.message.c_str());
    return;
  }
  std::fprintf(stderr, "m=%-3zu p=%-4s N_omega=%-5zu N_gamma=%-4zu l2=%.3e linf=%.3e cond=%.3e %.2fs%s\n", r.m,
               r.p.c_str(), r.n_omega, r.n_gamma, r.l2_error, r.linf_error, r.cond, r.seconds,
               r.at_floor() ? " floor" : "");
}

int execute(const ssem::ExperimentConfig& config) {
  const auto rows = ssem::run_experiment(config, report_row);
  try {
    if (config.out.empty())
      ssem::write_csv(rows, std::cout);
    else
      ssem::write_csv(rows, config.out);
  } catch (const ssem::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failed_row;
  }
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.failed;
  if (failed) {
    std::cerr << failed << " of " << rows.size() << " rows failed\n";
    return exit_failed_row;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smooth selection embedding solver: convergence studies on the built-in problems"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config_path, "Config file (flat key: value mapping)")->required();

  std::string problem, grids = "10:38:4", p_list = "2,4,6,8", out, smoother = "power";
  std::size_t time_nodes = 10;
  auto* study = app.add_subcommand("study", "Sweep grid sizes and smoother exponents for one problem");
  study->add_option("--problem", problem, "Problem id")->required();
  study->add_option("--grids", grids, "Grid sizes as lo:hi:step")->capture_default_str();
  study->add_option("--p", p_list, "Comma-separated smoother exponents")->capture_default_str();
  study->add_option("--smoother", smoother, "power or exp")->check(CLI::IsMember({"power", "exp"}));
  study->add_option("--time-nodes", time_nodes, "Time intervals for the parabolic problem")->capture_default_str();
  study->add_option("--out", out, "CSV output path (standard output if omitted)");

  std::string plot_in, plot_out;
  auto* plot = app.add_subcommand("plotdata", "Turn a convergence CSV into plot series");
  plot->add_option("--in", plot_in, "Convergence CSV")->required();
  plot->add_option("--out", plot_out, "Plot data output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*run) {
      ssem::ExperimentConfig config;
      try {
        config = ssem::load_config(config_path);
      } catch (const ssem::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
      }
      return execute(config);
    }
    if (*study) {
      ssem::ExperimentConfig config;
      try {
        config.problem = problem;
        config.grids = ssem::parse_grid_range(grids);
        if (smoother == "exp") {
          config.smoothers.push_back(ssem::SmootherSpec::exponential());
        } else {
          for (double p : ssem::parse_number_list(p_list)) {
            if (!(p >= 0.0)) throw ssem::ConfigError("p must be non-negative");
            config.smoothers.push_back(ssem::SmootherSpec::power(p));
          }
        }
        config.out = out;
        config.time_nodes = time_nodes;
        ssem::validate(config);
      } catch (const ssem::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
      }
      return execute(config);
    }
    if (*plot) {
      std::vector<ssem::ConvergenceRow> rows;
      try {
        rows = ssem::read_csv(plot_in);
      } catch (const ssem::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
      }
      ssem::emit_plot_data(rows, plot_out);
      return exit_ok;
    }
  } catch (const ssem::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failed_row;
  }
  return exit_config;
}
