// Batch front end: parse config, dispatch computations, emit JSON summaries
// and plot-ready CSV. Exit codes: 0 all checks pass, 2 config error,
// 3 numerical failure, 4 failed checks.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dinglab/acceptance.hpp"
#include "dinglab/asymptotics.hpp"
#include "dinglab/balanced.hpp"
#include "dinglab/config.hpp"
#include "dinglab/errors.hpp"
#include "dinglab/functionals.hpp"
#include "dinglab/geometry.hpp"
#include "dinglab/hessians.hpp"
#include "dinglab/quantization.hpp"
#include "dinglab/serialization.hpp"

namespace {

using namespace dinglab;
using nlohmann::json;

struct Report {
  json outputs = json::object();
  std::vector<CheckResult> checks;
  CsvWriter csv{{"key", "value"}};

  void check_le(std::string name, double value, double tol) {
    checks.push_back({std::move(name), value, tol, value <= tol});
  }
  void check_ge(std::string name, double value, double tol) {
    checks.push_back({std::move(name), value, tol, value >= tol});
  }
  void check_eq(std::string name, int value, int expected) {
    checks.push_back({std::move(name), static_cast<double>(value),
                      static_cast<double>(expected), value == expected});
  }
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

PolynomialPotential potential_from(const RunConfig& cfg) {
  return PolynomialPotential(parse_expr(cfg.potential));
}

bool round_potential_selected(const RunConfig& cfg) {
  return parse_expr(cfg.potential).is_zero();
}

double gram_diagonal_oracle(int k, int j) {
  double d = 2.0 / (2.0 * k + 1.0);
  for (int i = 1; i <= j; ++i) d *= static_cast<double>(i) / (2.0 * k - i + 1.0);
  return d;
}

void run_rho(const RunConfig& cfg, const QuadratureGrid& grid, Report& rep) {
  const PolynomialPotential phi = potential_from(cfg);
  const std::vector<double> rho = bergman_rho(phi, cfg.k, grid);
  const std::vector<double> ma = ma_density(phi, grid);
  double lo = rho[0], hi = rho[0];
  std::vector<double> t(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    lo = std::min(lo, rho[i]);
    hi = std::max(hi, rho[i]);
    t[i] = rho[i] * ma[i];
  }
  const double total = integrate(grid, t);
  const double n = 2.0 * cfg.k + 1.0;
  rep.outputs = {{"min", lo}, {"max", hi}, {"integral_vs_MA", total}};
  rep.check_le("rho_integral_vs_dimension", std::abs(total - n) / n, 1e-10);
  if (round_potential_selected(cfg))
    rep.check_le("rho_constancy_vs_half_2k_plus_1",
                 std::max(std::abs(lo - 0.5 * n), std::abs(hi - 0.5 * n)), 1e-10);
  rep.csv = CsvWriter({"index", "x", "theta", "rho"});
  for (std::size_t i = 0; i < rho.size(); ++i)
    rep.csv.add_row({CsvWriter::cell(static_cast<int>(i)),
                     CsvWriter::cell(grid.nodes[i].x),
                     CsvWriter::cell(grid.nodes[i].theta), CsvWriter::cell(rho[i])});
}

void run_gram(const RunConfig& cfg, const QuadratureGrid& grid, Report& rep) {
  const HermitianForm g = hilb(potential_from(cfg), cfg.k, grid);
  g.cholesky();  // positive-definiteness proof; throws on failure
  rep.outputs = {{"log_det", g.log_det()}, {"dim", g.dim()},
                 {"matrix", matrix_to_json(g.gram(), cfg.k)}};
  rep.checks.push_back({"positive_definite", 1.0, 1.0, true});
  if (round_potential_selected(cfg)) {
    double worst = 0.0;
    for (int j = 0; j < g.dim(); ++j) {
      const double oracle = gram_diagonal_oracle(cfg.k, j);
      worst = std::max(worst, std::abs(g.gram()(j, j).real() - oracle) / oracle);
    }
    rep.check_le("diagonal_vs_beta_integral_rel", worst, 1e-12);
  }
  rep.csv = CsvWriter({"j", "gram_jj"});
  for (int j = 0; j < g.dim(); ++j)
    rep.csv.add_row({CsvWriter::cell(j), CsvWriter::cell(g.gram()(j, j).real())});
}

void run_ding(const RunConfig& cfg, const QuadratureGrid& grid, Report& rep) {
  const PolynomialPotential phi = potential_from(cfg);
  const PolynomialPotential ref = round_potential();
  const double e = energy(phi, ref, grid);
  const double l = lfunc(phi, grid);
  const double d = ding(phi, ref, grid);
  const PolynomialPotential shifted(phi.u() + SmoothFunction::constant(5.0));
  const double shift_dev = std::abs(ding(shifted, ref, grid) - d);
  rep.outputs = {{"energy", e}, {"lfunc", l}, {"ding", d}};
  rep.check_le("translation_invariance", shift_dev, 1e-12);
  rep.csv = CsvWriter({"quantity", "value"});
  rep.csv.add_row({"energy", CsvWriter::cell(e)});
  rep.csv.add_row({"lfunc", CsvWriter::cell(l)});
  rep.csv.add_row({"ding", CsvWriter::cell(d)});
}

void run_qding(const RunConfig& cfg, const QuadratureGrid& grid, Report& rep) {
  const HermitianForm h = hilb(potential_from(cfg), cfg.k, grid);
  const HermitianForm h0 = hilb(round_potential(), cfg.k, grid);
  const double e = q_energy(h, h0, cfg.k);
  const double d = q_ding(h, h0, cfg.k, grid);
  const HermitianForm scaled(2.0 * h.gram());
  rep.outputs = {{"q_energy", e}, {"q_ding", d}};
  rep.check_le("q_energy_at_reference", std::abs(q_energy(h0, h0, cfg.k)), 1e-14);
  rep.check_le("q_ding_scale_invariance",
               std::abs(q_ding(scaled, h0, cfg.k, grid) - d), 1e-10);
  rep.csv = CsvWriter({"quantity", "value"});
  rep.csv.add_row({"q_energy", CsvWriter::cell(e)});
  rep.csv.add_row({"q_ding", CsvWriter::cell(d)});
}

void run_hessian(const RunConfig& cfg, const QuadratureGrid& grid, Report& rep) {
  const PolynomialPotential phi = potential_from(cfg);
  const QuantizedFrame frame = make_frame(phi, cfg.k, grid);
  const PolyField f(parse_expr(cfg.f));
  const Eigen::MatrixXcd qf = q_matrix(f, frame, phi, grid);
  const PolyField g(parse_expr(cfg.g.empty() ? cfg.f : cfg.g));
  const Eigen::MatrixXcd qg =
      cfg.g.empty() ? qf : q_matrix(g, frame, phi, grid);
  const double bilinear = q_ding_hessian(qf, qg, frame.H, cfg.k, grid);
  const double classical = ding_hessian(f, g, phi, grid);
  const HessianReport hr = hessian_report(qf, frame.H, cfg.k, grid);
  rep.outputs = {{"bilinear", bilinear},
                 {"classical_limit", classical},
                 {"diagonal_formula", hr.formula},
                 {"diagonal_trace_form", hr.trace_form},
                 {"diagonal_fd_geodesic", hr.fd_geodesic}};
  rep.check_le("three_way_rel_residual",
               hr.max_residual() / std::max(std::abs(hr.formula), 1e-9), 1e-6);
  rep.csv = CsvWriter({"method", "value"});
  rep.csv.add_row({"formula", CsvWriter::cell(hr.formula)});
  rep.csv.add_row({"trace_form", CsvWriter::cell(hr.trace_form)});
  rep.csv.add_row({"fd_geodesic", CsvWriter::cell(hr.fd_geodesic)});
  rep.csv.add_row({"bilinear_f_g", CsvWriter::cell(bilinear)});
  rep.csv.add_row({"classical_limit", CsvWriter::cell(classical)});
}

void run_spectrum(const RunConfig& cfg, const QuadratureGrid& grid, Report& rep) {
  const HermitianForm h0 = hilb(potential_from(cfg), cfg.k, grid);
  const Eigen::VectorXd ev = q_hessian_spectrum(h0, cfg.k, grid);
  int kernel = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev[i] < 1e-8) ++kernel;
  rep.outputs = {{"min_eigenvalue", ev[0]},
                 {"max_eigenvalue", ev[ev.size() - 1]},
                 {"kernel_count", kernel}};
  rep.check_ge("min_eigenvalue", ev[0], -1e-9);
  if (round_potential_selected(cfg)) {
    rep.check_eq("kernel_count", kernel, 4);
    rep.check_ge("gap_ratio", ev[4] / std::max(std::abs(ev[3]), 1e-14), 1e3);
  }
  rep.csv = CsvWriter({"k", "index", "eigenvalue"});
  for (int i = 0; i < ev.size(); ++i)
    rep.csv.add_row({CsvWriter::cell(cfg.k), CsvWriter::cell(i),
                     CsvWriter::cell(ev[i])});
}

void run_aterms(const RunConfig& cfg, const QuadratureGrid& grid, Report& rep) {
  const PolynomialPotential phi = potential_from(cfg);
  const PolyField f(parse_expr(cfg.f));
  rep.csv = CsvWriter({"k", "a1", "a2", "a3", "sum"});
  double worst = 0.0;
  for (int k : cfg.klist) {
    const ATerms at = a_terms(f, phi, k, grid);
    const QuantizedFrame frame = make_frame(phi, k, grid);
    const Eigen::MatrixXcd q = q_matrix(f, frame, phi, grid);
    worst = std::max(worst,
                     std::abs(at.sum() - q_ding_hessian(q, q, frame.H, k, grid)));
    rep.csv.add_row({CsvWriter::cell(k), CsvWriter::cell(at.a1),
                     CsvWriter::cell(at.a2), CsvWriter::cell(at.a3),
                     CsvWriter::cell(at.sum())});
  }
  rep.outputs = {{"max_sum_identity_residual", worst}};
  rep.check_le("a_sum_identity", worst, 1e-10);
}

void run_converge(const RunConfig& cfg, const QuadratureGrid& grid, Report& rep) {
  const PolynomialPotential phi = potential_from(cfg);
  const PolyField f(parse_expr(cfg.f));
  const ConvergenceReport cr = hessian_convergence(f, phi, cfg.klist, grid);
  rep.csv = CsvWriter({"k", "quantized", "limit", "error"});
  for (const auto& row : cr.rows)
    rep.csv.add_row({CsvWriter::cell(row.k), CsvWriter::cell(row.quantized),
                     CsvWriter::cell(row.limit), CsvWriter::cell(row.error)});
  rep.outputs = {{"limit", cr.limit}, {"slope", cr.slope}};
  if (std::abs(cr.limit) > 1e-6) {
    bool dec = true;
    for (std::size_t i = 1; i < cr.rows.size(); ++i)
      dec = dec && cr.rows[i].error < cr.rows[i - 1].error;
    rep.check_eq("errors_decreasing", dec ? 1 : 0, 1);
    rep.check_ge("slope_lower", cr.slope, -1.5);
    rep.check_le("slope_upper", cr.slope, -0.7);
  } else {
    double worst = 0.0;
    for (const auto& row : cr.rows) worst = std::max(worst, std::abs(row.quantized));
    rep.check_le("degenerate_direction_values", worst, 1e-6);
  }
}

void run_expand(const RunConfig& cfg, const QuadratureGrid& grid, Report& rep) {
  const PolynomialPotential phi = potential_from(cfg);
  const PolyField f(parse_expr(cfg.f));
  const KernelCoefficients kc = verify_kernel_coefficients(f, phi, cfg.klist, grid);
  const HExpansionReport hx = verify_h_expansion(f, phi, cfg.klist, grid);
  const auto sup_rel = [](const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      num = std::max(num, std::abs(a[i] - b[i]));
      den = std::max(den, std::abs(b[i]));
    }
    return num / std::max(den, 1e-300);
  };
  rep.outputs = {{"kf_c0_rel", sup_rel(kc.kf_c0, kc.f_values)},
                 {"kf_c1_rel", sup_rel(kc.kf_c1, kc.kf_b1)},
                 {"kff_c0_rel", sup_rel(kc.kff_c0, kc.f_squared)},
                 {"kff_c1_rel_half", sup_rel(kc.kff_c1, kc.kff_b1_half)},
                 {"kff_c1_rel_full", sup_rel(kc.kff_c1, kc.kff_b1_full)},
                 {"h_c0_rel", sup_rel(hx.h_c0, hx.f_values)},
                 {"mass_defect_slope", hx.mass_defect_slope}};
  rep.check_le("kf_c0_vs_f", sup_rel(kc.kf_c0, kc.f_values), 0.01);
  rep.check_le("kf_c1_vs_halfSf_plus_lapf", sup_rel(kc.kf_c1, kc.kf_b1), 0.05);
  rep.check_le("kff_c0_vs_f_squared", sup_rel(kc.kff_c0, kc.f_squared), 0.01);
  rep.csv = CsvWriter({"index", "x", "theta", "kf_c0", "kf_c1", "kff_c0", "kff_c1",
                       "f", "kf_b1_ref", "f_squared", "h_c0", "h_c1"});
  for (std::size_t i = 0; i < kc.kf_c0.size(); ++i)
    rep.csv.add_row({CsvWriter::cell(static_cast<int>(i)),
                     CsvWriter::cell(grid.nodes[i].x),
                     CsvWriter::cell(grid.nodes[i].theta),
                     CsvWriter::cell(kc.kf_c0[i]), CsvWriter::cell(kc.kf_c1[i]),
                     CsvWriter::cell(kc.kff_c0[i]), CsvWriter::cell(kc.kff_c1[i]),
                     CsvWriter::cell(kc.f_values[i]), CsvWriter::cell(kc.kf_b1[i]),
                     CsvWriter::cell(kc.f_squared[i]), CsvWriter::cell(hx.h_c0[i]),
                     CsvWriter::cell(hx.h_c1[i])});
}

void run_balance(const RunConfig& cfg, const QuadratureGrid& grid, Report& rep) {
  const HermitianForm h_init = hilb(potential_from(cfg), cfg.k, grid);
  const BalanceTrace trace = balance(h_init, cfg.k, grid, cfg.max_iter, cfg.tol);
  rep.csv = CsvWriter({"step", "residual", "q_ding"});
  for (const auto& s : trace.steps)
    rep.csv.add_row({CsvWriter::cell(s.step), CsvWriter::cell(s.residual),
                     CsvWriter::cell(s.q_ding_value)});
  rep.outputs = {{"converged", trace.converged},
                 {"steps", trace.steps.size()},
                 {"final_residual", trace.steps.back().residual},
                 {"final_form", matrix_to_json(trace.final->gram(), cfg.k)}};
  rep.check_eq("converged", trace.converged ? 1 : 0, 1);
  rep.check_le("final_residual", trace.steps.back().residual, cfg.tol);
}

void run_selftest(const RunConfig& cfg, const QuadratureGrid&, Report& rep) {
  AcceptanceOptions opts;
  opts.grid_nx = cfg.grid_nx;
  opts.grid_nt = cfg.grid_nt;
  opts.seed = cfg.seed;
  const std::vector<CriterionResult> results = run_acceptance(opts);
  rep.outputs = {{"criteria", acceptance_to_json(results)}};
  rep.csv = CsvWriter({"criterion", "check", "value", "tol", "pass"});
  for (const auto& r : results) {
    std::printf("criterion %2d [%s]: %s\n", r.id, r.pass() ? "PASS" : "FAIL",
                r.title.c_str());
    for (const auto& c : r.checks) {
      rep.checks.push_back(c);
      rep.csv.add_row({CsvWriter::cell(r.id), c.name, CsvWriter::cell(c.value),
                       CsvWriter::cell(c.tol), c.pass ? "true" : "false"});
    }
  }
}

int dispatch(RunConfig cfg) {
  using Runner = std::function<void(const RunConfig&, const QuadratureGrid&, Report&)>;
  static const std::map<std::string, Runner> runners{
      {"rho", run_rho},         {"gram", run_gram},       {"ding", run_ding},
      {"qding", run_qding},     {"hessian", run_hessian}, {"spectrum", run_spectrum},
      {"aterms", run_aterms},   {"converge", run_converge},
      {"expand", run_expand},   {"balance", run_balance}, {"selftest", run_selftest}};

  validate_config(cfg);
  const QuadratureGrid grid = make_grid(cfg.grid_nx, cfg.grid_nt);
  Report rep;
  runners.at(cfg.command)(cfg, grid, rep);

  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back(
        {{"name", c.name}, {"value", c.value}, {"tol", c.tol}, {"pass", c.pass}});
  json inputs = config_to_json(cfg);
  inputs["threads_effective"] =
      cfg.threads > 0 ? cfg.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  const json report = {{"inputs", std::move(inputs)},
                       {"outputs", std::move(rep.outputs)},
                       {"checks", std::move(checks)}};

  std::filesystem::create_directories(cfg.out);
  const std::string base = cfg.out + "/" + cfg.command;
  write_report(report, base + "_summary.json");
  rep.csv.write(base + ".csv");
  std::printf("%s: %s (%s_summary.json, %s.csv)\n", cfg.command.c_str(),
              rep.all_pass() ? "all checks pass" : "CHECKS FAILED", base.c_str(),
              base.c_str());
  return rep.all_pass() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dinglab: a numerical laboratory for quantized Ding functionals "
               "on the projective line"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path, klist_text, grid_text;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--k", cfg.k, "quantization level");
    sub->add_option("--klist", klist_text, "comma-separated levels for sweeps");
    sub->add_option("--grid", grid_text, "grid sizes NX,NT");
    sub->add_option("--potential", cfg.potential,
                    "deviation from the round potential, e.g. \"0.3*x3\"");
    sub->add_option("--f", cfg.f, "test function");
    sub->add_option("--g", cfg.g, "second test function (defaults to --f)");
    sub->add_option("--tol", cfg.tol, "iteration tolerance");
    sub->add_option("--max-iter", cfg.max_iter, "iteration cap");
    sub->add_option("--out", cfg.out, "report directory");
    sub->add_option("--seed", cfg.seed, "seed for random-matrix suites");
    sub->add_option("--threads", cfg.threads, "worker count (recorded)");
  };
  for (const char* name :
       {"rho", "gram", "ding", "qding", "hessian", "spectrum", "aterms",
        "converge", "expand", "balance", "selftest"})
    add_common(app.add_subcommand(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config_path.empty()) {
      // File first, then flags passed on the command line take precedence.
      RunConfig from_file = load_config(config_path);
      from_file.command = cfg.command;
      auto keep = [&](const std::string& flag) {
        return sub->count("--" + flag) > 0;
      };
      if (!keep("k")) cfg.k = from_file.k;
      if (!keep("klist")) cfg.klist = from_file.klist;
      if (!keep("grid")) {
        cfg.grid_nx = from_file.grid_nx;
        cfg.grid_nt = from_file.grid_nt;
      }
      if (!keep("potential")) cfg.potential = from_file.potential;
      if (!keep("f")) cfg.f = from_file.f;
      if (!keep("g")) cfg.g = from_file.g;
      if (!keep("tol")) cfg.tol = from_file.tol;
      if (!keep("max-iter")) cfg.max_iter = from_file.max_iter;
      if (!keep("out")) cfg.out = from_file.out;
      if (!keep("seed")) cfg.seed = from_file.seed;
      if (!keep("threads")) cfg.threads = from_file.threads;
    }
    if (!klist_text.empty()) apply_config_entry(cfg, "klist", klist_text);
    if (!grid_text.empty()) {
      const std::size_t comma = grid_text.find(',');
      if (comma == std::string::npos)
        throw ConfigError("--grid expects NX,NT");
      apply_config_entry(cfg, "grid_nx", grid_text.substr(0, comma));
      apply_config_entry(cfg, "grid_nt", grid_text.substr(comma + 1));
    }
    apply_config_entry(cfg, "k", std::to_string(cfg.k));
    apply_config_entry(cfg, "max_iter", std::to_string(cfg.max_iter));
    apply_config_entry(cfg, "tol", format_double(cfg.tol));
    cfg.command = sub->get_name();
    return dispatch(std::move(cfg));
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const DegenerateMetricError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const IndefiniteFormError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
}
