// qvac: three-route verification sweeps over the Gaussian vacuum family.
//
// Subcommands:
//   sweep    run the (gamma, alpha) grid and emit a CSV/JSON report
//   verify   run the grid and exit 0 iff every row passes
//
// Exit codes: 0 pass, 1 verification failure, 2 configuration/IO error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qvac/sweep.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string output_path;
  std::string format;
  int fock_dim = 0;
  bool quiet = false;
};

qvac::SweepConfig load_config(const CliOptions& opts) {
  qvac::SweepConfig cfg;
  if (!opts.config_path.empty()) cfg = qvac::parse_config_file(opts.config_path);
  // Command-line flags override file values.
  if (!opts.output_path.empty()) cfg.output_path = opts.output_path;
  if (!opts.format.empty()) {
    if (opts.format == "csv")
      cfg.output_format = qvac::OutputFormat::csv;
    else if (opts.format == "json")
      cfg.output_format = qvac::OutputFormat::json;
    else
      throw qvac::config_error("format", "format must be 'csv' or 'json', got '" +
                                             opts.format + "'");
  }
  if (opts.fock_dim > 0) cfg.fock_dim = opts.fock_dim;
  qvac::validate(cfg);
  return cfg;
}

void write_report(const qvac::SweepReport& report, const std::string& path) {
  const std::string text = qvac::serialize(report);
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qvac::config_error("output_path", "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw qvac::config_error("output_path", "failed writing '" + path + "'");
}

int run_sweep_command(const CliOptions& opts) {
  const qvac::SweepConfig cfg = load_config(opts);
  const qvac::SweepReport report = qvac::run_sweep(cfg);
  write_report(report, cfg.output_path);
  if (!opts.quiet)
    std::cerr << "wrote " << report.rows.size() << " rows ("
              << (cfg.output_format == qvac::OutputFormat::csv ? "csv" : "json") << ") to "
              << cfg.output_path << "\n";
  return 0;
}

int run_verify_command(const CliOptions& opts) {
  const qvac::SweepConfig cfg = load_config(opts);
  const qvac::SweepReport report = qvac::run_sweep(cfg);
  if (!opts.output_path.empty()) write_report(report, cfg.output_path);
  const auto failures = qvac::failure_lines(report);
  for (const std::string& line : failures) std::cerr << line << "\n";
  if (!opts.quiet)
    std::cerr << "verified " << report.rows.size() << " rows: " << failures.size()
              << " failure(s)\n";
  return failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-route verifier for squeezed Gaussian vacuum states"};
  app.require_subcommand(1);

  CliOptions opts;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path, "configuration file (key = value lines)");
    cmd->add_option("--output", opts.output_path, "report path ('-' for stdout)");
    cmd->add_option("--format", opts.format, "report format: csv or json");
    cmd->add_option("--fock-dim", opts.fock_dim, "truncation dimension for the Fock route");
    cmd->add_flag("--quiet", opts.quiet, "suppress informational output");
  };
  CLI::App* sweep = app.add_subcommand("sweep", "run the grid and emit a report");
  CLI::App* verify = app.add_subcommand("verify", "run the grid and report pass/fail");
  add_common(sweep);
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sweep->parsed()) return run_sweep_command(opts);
    return run_verify_command(opts);
  } catch (const qvac::config_error& e) {
    std::cerr << "configuration error";
    if (!e.field.empty()) std::cerr << " [" << e.field << "]";
    std::cerr << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
