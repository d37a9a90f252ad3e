#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qvac/errors.hpp"
#include "qvac/fock.hpp"
#include "qvac/quadrature.hpp"
#include "qvac/state.hpp"
#include "qvac/thermo.hpp"
#include "qvac/uncertainty.hpp"

namespace qvac {

inline constexpr int kReportSchemaVersion = 1;

/// Pass/fail thresholds of a sweep. Route tolerances are relative
/// discrepancies against the closed forms; saturation tolerances are in
/// units of hbar. The Fock settings are looser: truncation is less precise.
struct RouteTolerances {
  double quad_rel = 1e-10;
  double fock_rel = 1e-7;
  double sur_closed = 1e-9;
  double sur_quad = 1e-9;
  double sur_fock = 1e-7;
};

enum class OutputFormat { csv, json };

struct SweepConfig {
  std::vector<double> gamma_values{0.5, 1.0, 2.0};
  std::vector<double> alpha_values{-std::numbers::pi / 3, -std::numbers::pi / 4,
                                   -std::numbers::pi / 6, 0.0,
                                   std::numbers::pi / 6,  std::numbers::pi / 4,
                                   std::numbers::pi / 3};
  double hbar = 1.0;
  double k_b = 1.0;
  double mass = 1.0;
  int fock_dim = 128;
  RouteTolerances tolerances;
  OutputFormat output_format = OutputFormat::csv;
  std::string output_path = "-";  // "-" means standard output
};

/// One grid point: all three routes plus every derived quantity. The
/// uncertainty and energy blocks emitted in reports come from the
/// closed-form route; the quad/fock routes enter the pass flag.
struct SweepRow {
  double gamma = 0.0;
  double alpha = 0.0;
  MomentSet closed, quad, fock;
  UncertaintyReport unc;
  EnergyReport energy;
  BogoliubovPair bogoliubov;
  double eq_residual = 0.0;  // achieved ||(p - i gamma e^{i alpha} q) x||
  StateClassification classification;
  std::optional<double> t_eff;
  bool computed = false;
  bool pass = false;
  std::string failure;  // empty when pass
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepRow> rows;
};

// ---------------------------------------------------------------------------
// configuration parsing: plain "key = value" lines, lists comma-separated,
// '#' starts a comment, every key optional.

namespace detail {

inline std::string trim(std::string_view sv) {
  const auto* ws = " \t\r\n";
  const auto b = sv.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = sv.find_last_not_of(ws);
  return std::string(sv.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw config_error(key, key + ": cannot parse number '" + t + "'");
  return v;
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss{text};
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw config_error(key, key + ": list is empty");
  return out;
}

}  // namespace detail

inline void validate(const SweepConfig& cfg) {
  if (cfg.gamma_values.empty())
    throw config_error("gamma_values", "gamma_values: list is empty");
  for (double g : cfg.gamma_values)
    if (!(g > 0.0))
      throw config_error("gamma_values",
                         "gamma_values: entries must be positive, got " + std::to_string(g));
  if (cfg.alpha_values.empty())
    throw config_error("alpha_values", "alpha_values: list is empty");
  for (double a : cfg.alpha_values)
    if (!(std::abs(a) < std::numbers::pi / 2 - kAlphaMargin))
      throw config_error("alpha_values",
                         "alpha_values: entries must lie strictly inside (-pi/2, pi/2), got " +
                             std::to_string(a));
  if (!(cfg.hbar > 0.0)) throw config_error("hbar", "hbar must be positive");
  if (!(cfg.k_b > 0.0)) throw config_error("k_b", "k_b must be positive");
  if (!(cfg.mass > 0.0)) throw config_error("mass", "mass must be positive");
  if (cfg.fock_dim < 4) throw config_error("fock_dim", "fock_dim must be >= 4");
  const RouteTolerances& t = cfg.tolerances;
  for (auto [name, v] : {std::pair<const char*, double>{"tol_quad", t.quad_rel},
                         {"tol_fock", t.fock_rel},
                         {"sur_tol_closed", t.sur_closed},
                         {"sur_tol_quad", t.sur_quad},
                         {"sur_tol_fock", t.sur_fock}})
    if (!(v > 0.0)) throw config_error(name, std::string(name) + " must be positive");
}

/// Parses configuration text. Unknown keys are configuration errors.
inline SweepConfig parse_config_text(const std::string& text, SweepConfig base = {}) {
  std::stringstream ss{text};
  std::string line;
  while (std::getline(ss, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("", "expected 'key = value', got '" + detail::trim(line) + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key == "gamma_values") {
      base.gamma_values = detail::parse_double_list(key, value);
    } else if (key == "alpha_values") {
      base.alpha_values = detail::parse_double_list(key, value);
    } else if (key == "hbar") {
      base.hbar = detail::parse_double(key, value);
    } else if (key == "k_b") {
      base.k_b = detail::parse_double(key, value);
    } else if (key == "mass") {
      base.mass = detail::parse_double(key, value);
    } else if (key == "fock_dim") {
      base.fock_dim = static_cast<int>(detail::parse_double(key, value));
    } else if (key == "tol_quad") {
      base.tolerances.quad_rel = detail::parse_double(key, value);
    } else if (key == "tol_fock") {
      base.tolerances.fock_rel = detail::parse_double(key, value);
    } else if (key == "sur_tol_closed") {
      base.tolerances.sur_closed = detail::parse_double(key, value);
    } else if (key == "sur_tol_quad") {
      base.tolerances.sur_quad = detail::parse_double(key, value);
    } else if (key == "sur_tol_fock") {
      base.tolerances.sur_fock = detail::parse_double(key, value);
    } else if (key == "output_format") {
      if (value == "csv")
        base.output_format = OutputFormat::csv;
      else if (value == "json")
        base.output_format = OutputFormat::json;
      else
        throw config_error(key, "output_format must be 'csv' or 'json', got '" + value + "'");
    } else if (key == "output_path") {
      base.output_path = value;
    } else {
      throw config_error(key, "unknown configuration key '" + key + "'");
    }
  }
  return base;
}

inline SweepConfig parse_config_file(const std::string& path, SweepConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw config_error("config", "cannot read configuration file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), std::move(base));
}

// ---------------------------------------------------------------------------
// sweep execution

namespace detail {

inline double rel_diff(double value, double reference) {
  const double denom = std::max(std::abs(reference), 1e-300);
  return std::abs(value - reference) / denom;
}

inline std::string format_brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

inline void check_routes(SweepRow& row, const SweepConfig& cfg, const PhysicalConstants& pc) {
  const RouteTolerances& tol = cfg.tolerances;
  std::string why;
  auto check = [&](bool ok, const std::string& text) {
    if (!ok) {
      if (!why.empty()) why += "; ";
      why += text;
    }
  };
  auto route_check = [&](const MomentSet& m, double rel_tol, const char* name) {
    const double worst = std::max({rel_diff(m.var_q, row.closed.var_q),
                                   rel_diff(m.var_p, row.closed.var_p),
                                   rel_diff(std::abs(m.correlator), std::abs(row.closed.correlator))});
    check(worst <= rel_tol, std::string(name) + " route deviates by " + format_brief(worst) +
                                " (tolerance " + format_brief(rel_tol) + ")");
  };
  route_check(row.quad, tol.quad_rel, "quadrature");
  route_check(row.fock, tol.fock_rel, "fock");
  const UncertaintyReport u_quad = evaluate_sur(row.quad, pc, tol.sur_quad);
  const UncertaintyReport u_fock = evaluate_sur(row.fock, pc, tol.sur_fock);
  check(row.unc.saturated, "closed-form sur_gap " + format_brief(row.unc.sur_gap));
  check(u_quad.saturated, "quadrature sur_gap " + format_brief(u_quad.sur_gap));
  check(u_fock.saturated, "fock sur_gap " + format_brief(u_fock.sur_gap));
  row.pass = why.empty();
  row.failure = std::move(why);
}

inline SweepRow compute_row(double gamma, double alpha, const FockRepresentation& rep,
                            const SweepConfig& cfg, const PhysicalConstants& pc) {
  SweepRow row;
  row.gamma = gamma;
  row.alpha = alpha;
  const VacuumParameters params{gamma, alpha};
  const GaussianState state = make_state(params, pc);
  row.closed = closed_form_moments(state);
  row.quad = quadrature_moments(state, default_rule(state));
  const FockStateVector vac = solve_vacuum_vector(rep, alpha);
  row.fock = fock_moments(rep, vac);
  row.eq_residual = vac.residual;
  row.unc = evaluate_sur(row.closed, pc, cfg.tolerances.sur_closed);
  row.energy = energy_decomposition(row.closed, params, pc);
  row.bogoliubov = bogoliubov_coefficients(alpha);
  row.classification = classify_state(params);
  row.t_eff = effective_temperature(row.energy, params, pc);
  row.computed = true;
  check_routes(row, cfg, pc);
  return row;
}

}  // namespace detail

/// Runs the grid. Rows come out sorted by (gamma, alpha) ascending; a failure
/// inside one row is recorded in that row without aborting the sweep.
inline SweepReport run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  SweepReport report;
  report.config = cfg;
  std::vector<double> gammas = cfg.gamma_values;
  std::vector<double> alphas = cfg.alpha_values;
  std::sort(gammas.begin(), gammas.end());
  std::sort(alphas.begin(), alphas.end());
  const PhysicalConstants pc{cfg.hbar, cfg.k_b, cfg.mass};
  for (double gamma : gammas) {
    const FockRepresentation rep = build_fock(gamma, pc, cfg.fock_dim);
    for (double alpha : alphas) {
      try {
        report.rows.push_back(detail::compute_row(gamma, alpha, rep, cfg, pc));
      } catch (const std::exception& e) {
        SweepRow row;
        row.gamma = gamma;
        row.alpha = alpha;
        row.computed = false;
        row.pass = false;
        row.failure = e.what();
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// report serialization

namespace detail {

/// 17 significant digits, always with a decimal point, locale-independent.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

inline void append_row_fields(std::string& out, const SweepRow& r, const SweepConfig& cfg,
                              bool json) {
  auto field = [&](const char* name, const std::string& value, bool last = false) {
    if (json) {
      out += '"';
      out += name;
      out += "\": ";
      out += value;
      if (!last) out += ", ";
    } else {
      out += value;
      if (!last) out += ',';
    }
  };
  auto num = [&](const char* name, double v, bool last = false) {
    field(name, std::isfinite(v) ? format_number(v) : (json ? "null" : "nan"), last);
  };
  field("schema_version", std::to_string(kReportSchemaVersion));
  num("gamma", r.gamma);
  num("alpha", r.alpha);
  num("hbar", cfg.hbar);
  num("mass", cfg.mass);
  num("var_q_closed", r.closed.var_q);
  num("var_q_quad", r.quad.var_q);
  num("var_q_fock", r.fock.var_q);
  num("var_p_closed", r.closed.var_p);
  num("var_p_quad", r.quad.var_p);
  num("var_p_fock", r.fock.var_p);
  num("corr_re_closed", r.closed.correlator.real());
  num("corr_im_closed", r.closed.correlator.imag());
  num("corr_mag_closed", std::abs(r.closed.correlator));
  num("corr_mag_quad", std::abs(r.quad.correlator));
  num("corr_mag_fock", std::abs(r.fock.correlator));
  num("up", r.unc.up);
  num("sur_gap", r.unc.sur_gap);
  num("hur_gap", r.unc.hur_gap);
  num("u_re", r.bogoliubov.u.real());
  num("u_im", r.bogoliubov.u.imag());
  num("v_re", r.bogoliubov.v.real());
  num("v_im", r.bogoliubov.v.imag());
  num("eq6_residual", r.eq_residual);
  num("kinetic", r.energy.kinetic);
  num("potential", r.energy.potential);
  num("total", r.energy.total);
  num("excess_ratio", r.energy.excess_ratio);
  if (r.t_eff)
    num("t_eff", *r.t_eff);
  else
    field("t_eff", json ? "null" : "");
  field("classification",
        json ? "\"" + std::string(to_string(r.classification.kind)) + "\""
             : std::string(to_string(r.classification.kind)));
  field("pass", r.pass ? "true" : "false", /*last=*/true);
}

}  // namespace detail

inline const char* csv_header() {
  return "schema_version,gamma,alpha,hbar,mass,"
         "var_q_closed,var_q_quad,var_q_fock,"
         "var_p_closed,var_p_quad,var_p_fock,"
         "corr_re_closed,corr_im_closed,corr_mag_closed,corr_mag_quad,corr_mag_fock,"
         "up,sur_gap,hur_gap,u_re,u_im,v_re,v_im,eq6_residual,"
         "kinetic,potential,total,excess_ratio,t_eff,classification,pass";
}

inline std::string to_csv(const SweepReport& report) {
  std::string out;
  out += csv_header();
  out += '\n';
  for (const SweepRow& r : report.rows) {
    detail::append_row_fields(out, r, report.config, /*json=*/false);
    out += '\n';
  }
  return out;
}

inline std::string to_json(const SweepReport& report) {
  const SweepConfig& cfg = report.config;
  std::string out = "{\n  \"schema_version\": ";
  out += std::to_string(kReportSchemaVersion);
  auto num_list = [&](const std::vector<double>& vs) {
    std::string s = "[";
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (i) s += ", ";
      s += detail::format_number(vs[i]);
    }
    return s + "]";
  };
  out += ",\n  \"config\": {\"gamma_values\": " + num_list(cfg.gamma_values);
  out += ", \"alpha_values\": " + num_list(cfg.alpha_values);
  out += ", \"hbar\": " + detail::format_number(cfg.hbar);
  out += ", \"k_b\": " + detail::format_number(cfg.k_b);
  out += ", \"mass\": " + detail::format_number(cfg.mass);
  out += ", \"fock_dim\": " + std::to_string(cfg.fock_dim);
  out += ", \"tol_quad\": " + detail::format_number(cfg.tolerances.quad_rel);
  out += ", \"tol_fock\": " + detail::format_number(cfg.tolerances.fock_rel);
  out += ", \"sur_tol_closed\": " + detail::format_number(cfg.tolerances.sur_closed);
  out += ", \"sur_tol_quad\": " + detail::format_number(cfg.tolerances.sur_quad);
  out += ", \"sur_tol_fock\": " + detail::format_number(cfg.tolerances.sur_fock);
  out += "},\n  \"rows\": [\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    out += "    {";
    detail::append_row_fields(out, report.rows[i], cfg, /*json=*/true);
    out += i + 1 < report.rows.size() ? "},\n" : "}\n";
  }
  out += "  ]\n}\n";
  return out;
}

inline std::string serialize(const SweepReport& report) {
  return report.config.output_format == OutputFormat::csv ? to_csv(report) : to_json(report);
}

/// One line per failed row, for the diagnostic stream.
inline std::vector<std::string> failure_lines(const SweepReport& report) {
  std::vector<std::string> lines;
  for (const SweepRow& r : report.rows) {
    if (r.pass) continue;
    lines.push_back("FAIL gamma=" + detail::format_number(r.gamma) +
                    " alpha=" + detail::format_number(r.alpha) + ": " +
                    (r.computed ? r.failure : "computation failed: " + r.failure));
  }
  return lines;
}

}  // namespace qvac
