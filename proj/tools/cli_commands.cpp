#include "cli_commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "polyens/ensemble.hpp"
#include "polyens/invertible.hpp"
#include "polyens/oracle.hpp"
#include "polyens/vandermonde.hpp"
#include "polyens/version.hpp"
#include "polyens/young.hpp"

namespace polyens::cli {

using nlohmann::json;

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

std::vector<Complex> parse_complex_list(const json& j, const std::string& key) {
  std::vector<Complex> out;
  if (!j.contains(key)) return out;
  const json& arr = j.at(key);
  if (!arr.is_array()) throw ConfigError(key + " must be an array");
  for (const json& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
        !e[1].is_number()) {
      throw ConfigError(key + " entries must be [re, im] pairs");
    }
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

struct NumericsConfig {
  std::size_t nodes_line = 0;  // 0 = per-kind default
  std::size_t nodes_circle = 256;
  std::size_t mc_samples = 100000;
  std::size_t quad_nodes = 120;
  std::uint64_t seed = 1;
};

struct EnsembleConfig {
  std::string kind;
  std::vector<double> a;
  double nu = 0.0;
};

struct Config {
  EnsembleConfig ensemble;
  NumericsConfig numerics;
  std::vector<Complex> zs, ys;
  unsigned max_boxes = 4;
  std::vector<std::size_t> n_values;
  json grid;
  std::string oracle_mode = "both";
  std::vector<std::string> providers;
  double tolerance = 1e-8;
  double oracle_tolerance = 1e-6;
};

Config parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (!doc.contains("schema_version") ||
      doc.at("schema_version").get<int>() != 1) {
    throw ConfigError("config requires schema_version 1");
  }
  if (!doc.contains("ensemble") || !doc.at("ensemble").is_object()) {
    throw ConfigError("config requires an ensemble object");
  }
  Config cfg;
  const json& ens = doc.at("ensemble");
  cfg.ensemble.kind = ens.value("kind", "");
  if (cfg.ensemble.kind != "gue_ext" && cfg.ensemble.kind != "chgue_ext") {
    throw ConfigError("ensemble.kind must be gue_ext or chgue_ext");
  }
  if (!ens.contains("a") || !ens.at("a").is_array() || ens.at("a").empty()) {
    throw ConfigError("ensemble.a must be a non-empty array of reals");
  }
  for (const json& v : ens.at("a")) {
    if (!v.is_number()) throw ConfigError("ensemble.a entries must be numbers");
    cfg.ensemble.a.push_back(v.get<double>());
  }
  cfg.ensemble.nu = ens.value("nu", 0.0);

  if (doc.contains("numerics")) {
    const json& num = doc.at("numerics");
    cfg.numerics.nodes_line = num.value("nodes_line", 0);
    cfg.numerics.nodes_circle = num.value("nodes_circle", 256);
    cfg.numerics.mc_samples = num.value("mc_samples", 100000);
    cfg.numerics.quad_nodes = num.value("quad_nodes", 120);
    cfg.numerics.seed = num.value("seed", 1);
  }
  cfg.zs = parse_complex_list(doc, "zs");
  cfg.ys = parse_complex_list(doc, "ys");
  cfg.max_boxes = doc.value("max_boxes", 4);
  if (doc.contains("n_values")) {
    for (const json& v : doc.at("n_values")) {
      cfg.n_values.push_back(v.get<std::size_t>());
    }
  }
  if (doc.contains("grid")) cfg.grid = doc.at("grid");
  if (doc.contains("oracle")) {
    cfg.oracle_mode = doc.at("oracle").value("mode", "both");
    cfg.numerics.quad_nodes = doc.at("oracle").value("nodes_axis",
                                                     cfg.numerics.quad_nodes);
  }
  if (doc.contains("providers")) {
    for (const json& p : doc.at("providers")) {
      cfg.providers.push_back(p.get<std::string>());
    }
  }
  cfg.tolerance = doc.value("tolerance", 1e-8);
  cfg.oracle_tolerance = doc.value("oracle_tolerance", 1e-6);
  return cfg;
}

unsigned integer_nu_for_sampling(const Config& cfg) {
  double nu = cfg.ensemble.nu;
  double rounded = std::round(nu);
  if (std::abs(nu - rounded) > 1e-12 || rounded < 0.0) {
    throw PreconditionError(
        "the chiral matrix model needs a non-negative integer nu for Monte "
        "Carlo sampling");
  }
  return static_cast<unsigned>(rounded);
}

SampleBatch sample_for(const Config& cfg, const InvertibleEnsemble& ens) {
  if (cfg.ensemble.kind == "gue_ext") {
    return sample_gue_ext(ens.source(), cfg.numerics.mc_samples,
                          cfg.numerics.seed);
  }
  return sample_chgue_ext(ens.source(), integer_nu_for_sampling(cfg),
                          cfg.numerics.mc_samples, cfg.numerics.seed);
}

InvertibleEnsemble build_ensemble(const Config& cfg,
                                  std::optional<std::size_t> take_n = {}) {
  std::vector<double> a = cfg.ensemble.a;
  if (take_n) {
    if (*take_n > a.size()) {
      throw ConfigError("n_values entry exceeds length of ensemble.a");
    }
    a.resize(*take_n);
  }
  InvertibleOptions opts;
  opts.line_nodes = cfg.numerics.nodes_line;
  opts.circle_points = cfg.numerics.nodes_circle;
  if (cfg.ensemble.kind == "gue_ext") return gue_ext(std::move(a), opts);
  return chgue_ext(std::move(a), Nu(cfg.ensemble.nu), opts);
}

struct ReportWriter {
  json report;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  ReportWriter(const std::string& command, const json& config) {
    report["schema_version"] = 1;
    report["toolkit_version"] = POLYENS_VERSION_STRING;
    report["command"] = command;
    report["inputs"] = config;
    report["outputs"] = json::object();
    report["diagnostics"] = json::object();
  }

  void finish(const NumericsConfig& num) {
    auto elapsed = std::chrono::steady_clock::now() - start;
    report["diagnostics"]["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    report["diagnostics"]["seed"] = num.seed;
    report["diagnostics"]["nodes_circle"] = num.nodes_circle;
  }
};

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text << std::endl;
  } else {
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot open output path " + out_path);
    out << text << std::endl;
  }
}

int cmd_zcheck(const Config& cfg, ReportWriter& rw) {
  InvertibleEnsemble ens = build_ensemble(cfg);
  double z_moments = partition_function(ens.base());
  double z_source =
      std::tgamma(static_cast<double>(ens.size()) + 1.0) *
      vandermonde(ens.source()).real();
  double gap = std::abs(z_moments - z_source) /
               std::max({1.0, std::abs(z_moments), std::abs(z_source)});
  rw.report["outputs"]["z_moment_formula"] = z_moments;
  rw.report["outputs"]["z_source_formula"] = z_source;
  rw.report["outputs"]["relative_gap"] = gap;
  rw.report["diagnostics"]["nodes_line"] = ens.line_nodes();
  return gap <= cfg.tolerance ? kOk : kNonConvergence;
}

int cmd_giambelli(const Config& cfg, ReportWriter& rw) {
  std::vector<std::size_t> ns = cfg.n_values;
  if (ns.empty()) ns.push_back(cfg.ensemble.a.size());
  json rows = json::array();
  double worst = 0.0;
  for (std::size_t n : ns) {
    InvertibleEnsemble ens = build_ensemble(cfg, n);
    MomentTable table = build_moment_table(
        ens.base(), n + cfg.max_boxes + cfg.max_boxes + 2);
    for (unsigned boxes = 1; boxes <= cfg.max_boxes; ++boxes) {
      for (const YoungDiagram& lam : diagrams_with_boxes(boxes)) {
        GiambelliCheck chk = giambelli_check(table, lam);
        json row;
        row["n"] = n;
        row["diagram"] = lam.parts();
        row["schur_expectation"] = chk.lhs;
        row["hook_determinant"] = chk.rhs_hooks;
        row["h_determinant"] = chk.rhs_h;
        row["gap_hooks"] = chk.gap_hooks;
        row["gap_h"] = chk.gap_h;
        rows.push_back(row);
        worst = std::max({worst, chk.gap_hooks, chk.gap_h});
      }
    }
  }
  rw.report["outputs"]["checks"] = rows;
  rw.report["outputs"]["max_gap"] = worst;
  return worst <= cfg.tolerance ? kOk : kNonConvergence;
}

int cmd_ratio(const Config& cfg, ReportWriter& rw) {
  InvertibleEnsemble ens = build_ensemble(cfg);
  const std::size_t m = cfg.zs.size();
  const std::size_t l = cfg.ys.size();
  std::vector<std::string> providers = cfg.providers;
  if (providers.empty()) providers = {"master", "special", "quad", "mc"};

  json out;
  json gaps;
  bool ok = true;

  Gated<Complex> master = ratio_expectation_full(ens, {cfg.zs, cfg.ys});
  out["master"] = complex_to_json(master.value);
  gaps["master_doubling"] = master.gap;

  auto provider_requested = [&](const std::string& name) {
    for (const std::string& p : providers) {
      if (p == name || p == "special") return true;
    }
    return false;
  };
  auto check_against_master = [&](const std::string& name, Complex v,
                                  double tol) {
    double gap = std::abs(v - master.value) /
                 std::max(1.0, std::abs(master.value));
    gaps[name + "_vs_master"] = gap;
    if (gap > tol) ok = false;
  };

  if (l == 0 && provider_requested("product")) {
    Gated<Complex> p = product_expectation_full(ens, cfg.zs);
    out["product"] = complex_to_json(p.value);
    gaps["product_doubling"] = p.gap;
    check_against_master("product", p.value, cfg.tolerance);
  }
  if (l == 1 && m >= 1 && provider_requested("bordered")) {
    Gated<Complex> b = ratio_m_plus_one_over_one_full(ens, cfg.zs, cfg.ys[0]);
    out["bordered"] = complex_to_json(b.value);
    gaps["bordered_doubling"] = b.gap;
    check_against_master("bordered", b.value, cfg.tolerance);
  }
  if (l == 1 && m == 0 && provider_requested("inverse")) {
    InverseExpectationForms inv = inverse_expectation_forms(ens.base(),
                                                            cfg.ys[0]);
    out["inverse"] = complex_to_json(inv.value);
    gaps["inverse_forms"] = inv.gap;
    check_against_master("inverse", inv.value, cfg.tolerance);
  }
  if (m == l && m >= 1 && provider_requested("equal_ratio")) {
    Complex eq = equal_ratio_expectation(
        cfg.zs, cfg.ys, [&](Complex z, Complex u) {
          return ratio_expectation(ens, {{z}, {u}});
        });
    out["equal_ratio"] = complex_to_json(eq);
    check_against_master("equal_ratio", eq, cfg.oracle_tolerance);
  }
  if (provider_requested("quad") && ens.size() <= 3) {
    auto f = [&](std::span<const double> xs) {
      Complex v = 1.0;
      for (const Complex& z : cfg.zs) {
        for (double x : xs) v *= (z - x);
      }
      for (const Complex& y : cfg.ys) {
        for (double x : xs) v /= (y - x);
      }
      return v;
    };
    Gated<Complex> q = quad_expect_full(ens.base(), f, cfg.numerics.quad_nodes);
    out["quad_oracle"] = complex_to_json(q.value);
    gaps["quad_doubling"] = q.gap;
    check_against_master("quad_oracle", q.value, cfg.oracle_tolerance);
  }
  if (provider_requested("mc")) {
    SampleBatch batch = sample_for(cfg, ens);
    McEstimate est = mc_expect_ratio(batch, cfg.zs, cfg.ys);
    out["mc_oracle"] = complex_to_json(est.mean);
    out["mc_std_error"] = est.std_error;
    double dist = std::abs(est.mean - master.value);
    gaps["mc_sigmas"] = est.std_error > 0.0 ? dist / est.std_error : 0.0;
    if (dist > 3.0 * est.std_error + 1e-12) ok = false;
  }

  rw.report["outputs"] = out;
  rw.report["diagnostics"]["convergence_gaps"] = gaps;
  rw.report["diagnostics"]["nodes_line"] = ens.line_nodes();
  return ok ? kOk : kNonConvergence;
}

int cmd_kernel(const Config& cfg, ReportWriter& rw, const std::string& format,
               std::string* csv_out) {
  InvertibleEnsemble ens = build_ensemble(cfg);
  if (cfg.grid.is_null()) throw ConfigError("kernel requires a grid object");
  double x_min = cfg.grid.value("x_min", 0.0);
  double x_max = cfg.grid.value("x_max", 0.0);
  double y_min = cfg.grid.value("y_min", 0.0);
  double y_max = cfg.grid.value("y_max", 0.0);
  std::size_t x_count = cfg.grid.value("x_count", 0);
  std::size_t y_count = cfg.grid.value("y_count", 0);
  if (x_count == 0 || y_count == 0) {
    throw ConfigError("kernel grid is empty (x_count and y_count must be >= 1)");
  }
  if ((x_count > 1 && !(x_min < x_max)) || (y_count > 1 && !(y_min < y_max))) {
    throw ConfigError("kernel grid bounds must be increasing");
  }

  json rows = json::array();
  std::ostringstream csv;
  csv << "x,y,K\n";
  for (std::size_t i = 0; i < x_count; ++i) {
    double x = x_count == 1
                   ? x_min
                   : x_min + (x_max - x_min) * static_cast<double>(i) /
                         static_cast<double>(x_count - 1);
    for (std::size_t j = 0; j < y_count; ++j) {
      double y = y_count == 1
                     ? y_min
                     : y_min + (y_max - y_min) * static_cast<double>(j) /
                           static_cast<double>(y_count - 1);
      double k = kernel(ens, x, y);
      rows.push_back(json::array({x, y, k}));
      csv << x << ',' << y << ',' << k << '\n';
    }
  }

  Gated<Complex> trace = ens.base().integrate(
      [&](double x) { return Complex(kernel(ens, x, x)); });
  double trace_gap =
      std::abs(trace.value - Complex(static_cast<double>(ens.size())));

  rw.report["outputs"]["trace"] = trace.value.real();
  rw.report["outputs"]["trace_gap"] = trace_gap;
  rw.report["outputs"]["grid_points"] = rows.size();
  if (format != "csv") rw.report["outputs"]["kernel"] = rows;
  rw.report["diagnostics"]["convergence_gaps"] =
      json{{"trace_doubling", trace.gap}};
  rw.report["diagnostics"]["nodes_line"] = ens.line_nodes();
  if (csv_out != nullptr) *csv_out = csv.str();
  return trace_gap <= cfg.oracle_tolerance ? kOk : kNonConvergence;
}

int cmd_oracle(const Config& cfg, ReportWriter& rw) {
  InvertibleEnsemble ens = build_ensemble(cfg);
  json out;
  json gaps;
  bool ok = true;

  std::optional<McEstimate> mc;
  if (cfg.oracle_mode == "mc" || cfg.oracle_mode == "both") {
    SampleBatch batch = sample_for(cfg, ens);
    mc = mc_expect_ratio(batch, cfg.zs, cfg.ys);
    out["mc_mean"] = complex_to_json(mc->mean);
    out["mc_std_error"] = mc->std_error;
    out["mc_samples"] = mc->count;

    double mean_sum = 0.0;
    for (std::size_t s = 0; s < batch.count; ++s) {
      for (double v : batch.row(s)) mean_sum += v;
    }
    out["mean_trace"] = mean_sum / static_cast<double>(batch.count);
  }
  std::optional<Complex> quad;
  if (cfg.oracle_mode == "quad" || cfg.oracle_mode == "both") {
    auto f = [&](std::span<const double> xs) {
      Complex v = 1.0;
      for (const Complex& z : cfg.zs) {
        for (double x : xs) v *= (z - x);
      }
      for (const Complex& y : cfg.ys) {
        for (double x : xs) v /= (y - x);
      }
      return v;
    };
    Gated<Complex> q = quad_expect_full(ens.base(), f, cfg.numerics.quad_nodes);
    quad = q.value;
    out["quad_value"] = complex_to_json(q.value);
    gaps["quad_doubling"] = q.gap;
  }
  if (mc && quad) {
    double dist = std::abs(mc->mean - *quad);
    gaps["mc_vs_quad_sigmas"] =
        mc->std_error > 0.0 ? dist / mc->std_error : 0.0;
    if (dist > 3.0 * mc->std_error + 1e-12) ok = false;
  }

  rw.report["outputs"] = out;
  rw.report["diagnostics"]["convergence_gaps"] = gaps;
  return ok ? kOk : kNonConvergence;
}

}  // namespace

int run_command(const std::string& command, const json& config,
                const std::string& out_path_flag,
                const std::string& format_flag, bool verbose) {
  Config cfg = parse_config(config);
  // flags override the config's output block
  std::string out_path = out_path_flag;
  std::string format = format_flag;
  if (config.contains("output")) {
    const json& o = config.at("output");
    if (out_path.empty()) out_path = o.value("path", "");
    if (format.empty()) format = o.value("format", "");
  }
  if (out_path.empty()) out_path = "-";
  if (format.empty()) format = "json";
  if (format != "json" && format != "csv") {
    throw ConfigError("output.format must be json or csv");
  }
  ReportWriter rw(command, config);
  int rc = kOk;
  std::string csv;
  try {
    if (command == "zcheck") {
      rc = cmd_zcheck(cfg, rw);
    } else if (command == "giambelli") {
      rc = cmd_giambelli(cfg, rw);
    } else if (command == "ratio") {
      rc = cmd_ratio(cfg, rw);
    } else if (command == "kernel") {
      rc = cmd_kernel(cfg, rw, format, &csv);
    } else if (command == "oracle") {
      rc = cmd_oracle(cfg, rw);
    } else {
      throw ConfigError("unknown command " + command);
    }
  } catch (const PreconditionError& e) {
    rw.report["error"] = e.what();
    rw.finish(cfg.numerics);
    emit(out_path, rw.report.dump(2));
    if (verbose) std::cerr << "precondition violation: " << e.what() << "\n";
    return kPreconditionError;
  } catch (const NonConvergenceError& e) {
    rw.report["error"] = e.what();
    rw.finish(cfg.numerics);
    emit(out_path, rw.report.dump(2));
    if (verbose) std::cerr << "non-convergence: " << e.what() << "\n";
    return kNonConvergence;
  }
  rw.finish(cfg.numerics);
  if (command == "kernel" && format == "csv") {
    emit(out_path, csv);
    if (verbose) std::cerr << rw.report.dump(2) << "\n";
  } else {
    emit(out_path, rw.report.dump(2));
  }
  return rc;
}

}  // namespace polyens::cli
