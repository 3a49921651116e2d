// ltspec command-line driver: every verification pipeline behind one binary
// with CI-friendly exit codes (0 pass, 1 input/validation error, 2 invariant
// violation).
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ltspec/config.hpp"
#include "ltspec/corpus.hpp"
#include "ltspec/ltbounds.hpp"
#include "ltspec/report.hpp"
#include "ltspec/scattering.hpp"
#include "ltspec/spectrum.hpp"
#include "ltspec/sumrules.hpp"

using namespace ltspec;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input_error = 1;
constexpr int exit_invariant_violation = 2;

struct Output {
  std::string dir;
  bool csv = true;
  bool text = false;

  void write(const std::string& name, const CsvTable& table, const json* text_doc = nullptr) const {
    if (dir.empty()) return;
    std::filesystem::path base(dir);
    if (csv) atomic_write(base / (name + ".csv"), table.str());
    if (text && text_doc) atomic_write(base / (name + ".json"), text_doc->dump(2) + "\n");
  }
};

Output make_output(const std::string& dir, const std::vector<std::string>& formats) {
  Output o;
  o.dir = dir;
  if (!formats.empty()) {
    o.csv = false;
    for (const auto& f : formats) {
      if (f == "csv")
        o.csv = true;
      else if (f == "text")
        o.text = true;
      else
        throw std::invalid_argument("unknown format: " + f + " (expected csv or text)");
    }
  }
  return o;
}

MatrixPotential load_build(const std::string& ref, std::optional<std::uint64_t> seed) {
  PotentialSpec spec = load_potential_spec(ref);
  if (seed) spec.seed = *seed;
  return build_potential(spec);
}

ScalarField2D named_field2d(const std::string& name) {
  if (name == "gaussian") return field2d_gaussian_well();
  if (name == "separable") return field2d_separable_wells();
  throw std::invalid_argument("unknown 2d field: " + name + " (expected gaussian or separable)");
}

int cmd_constants(double gamma, int d, const Output& out) {
  double value = classical_constant(gamma, d);
  double ps = classical_constant_phase_space(gamma, d);
  double ps_res = std::abs(value - ps) / value;
  double prod_res = 0;
  if (d >= 2) {
    double prod = classical_constant(gamma, 1) * classical_constant(gamma + 0.5, d - 1);
    prod_res = std::abs(prod - value) / value;
  }
  std::printf("%.12g\n", value);
  std::printf("phase_space_residual %.3e  product_residual %.3e\n", ps_res, prod_res);
  CsvTable t;
  t.header = {"gamma", "d", "value", "phase_space_residual", "product_residual"};
  t.rows.push_back({fmt_double(gamma), std::to_string(d), fmt_double(value), fmt_double(ps_res),
                    fmt_double(prod_res)});
  json j = {{"gamma", gamma}, {"d", d}, {"value", value}, {"phase_space_residual", ps_res},
            {"product_residual", prod_res}};
  out.write("constants", t, &j);
  return (ps_res < 1e-8 && prod_res < 1e-12) ? exit_ok : exit_invariant_violation;
}

int cmd_eig(const MatrixPotential& v, double pad, int n_points, const Output& out) {
  if (pad <= 0 || n_points <= 0) {
    detail::FdDefaults d = detail::fd_defaults_1d(v);
    if (pad <= 0) pad = d.pad;
    if (n_points <= 0) n_points = d.n_points;
  }
  SpectrumResult s = fd_eigensolve_1d(v, pad, n_points);
  CsvTable t;
  t.header = {"lambda", "multiplicity", "kappa", "richardson_lambda"};
  json rows = json::array();
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    double kappa = std::sqrt(-s.eigenvalues[i]);
    t.rows.push_back({fmt_double(s.eigenvalues[i]), std::to_string(s.multiplicities[i]),
                      fmt_double(kappa), fmt_double(s.richardson_estimate[i])});
    rows.push_back({{"lambda", s.eigenvalues[i]},
                    {"multiplicity", s.multiplicities[i]},
                    {"kappa", kappa},
                    {"richardson_lambda", s.richardson_estimate[i]}});
  }
  std::printf("negative eigenvalues: %zu (pad %.4g, spacing %.4g)\n", s.eigenvalues.size(),
              s.pad, s.grid_spacing);
  for (const auto& r : t.rows)
    std::printf("  lambda %s  m %s  kappa %s\n", r[0].c_str(), r[1].c_str(), r[2].c_str());
  json j = {{"pad", s.pad}, {"grid_spacing", s.grid_spacing}, {"states", rows}};
  out.write("spectrum", t, &j);
  return exit_ok;
}

int cmd_scatter(const MatrixPotential& v, double kmin, double kmax, int kpoints,
                const Output& out) {
  if (!(kmin > 0 && kmax > kmin && kpoints >= 2))
    throw std::invalid_argument("scatter: need 0 < kmin < kmax and kpoints >= 2");
  std::vector<double> ks(kpoints);
  for (int i = 0; i < kpoints; ++i)
    ks[i] = kmin * std::pow(kmax / kmin, static_cast<double>(i) / (kpoints - 1));
  ScatteringData sd = scattering_scan(v, ks);
  CsvTable t;
  t.header = {"k_re", "k_im", "detA_re", "detA_im", "res_D", "res_D1", "res_E"};
  bool violation = false;
  for (const auto& r : sd.rows) {
    if (!r.ok) {
      violation = true;
      continue;
    }
    t.rows.push_back({fmt_double(r.k.real()), fmt_double(r.k.imag()), fmt_double(r.detA.real()),
                      fmt_double(r.detA.imag()), fmt_double(r.res_D), fmt_double(r.res_D1),
                      fmt_double(r.res_E)});
    if (std::abs(r.detA) < 1.0 - 1e-6) violation = true;  // |det A| >= 1 on the real axis
  }
  std::printf("max residuals: D %.3e  D1 %.3e  E %.3e over %zu k-points\n", sd.max_res_D(),
              sd.max_res_D1(), sd.max_res_E(), sd.rows.size());
  json j = {{"max_res_D", sd.max_res_D()},
            {"max_res_D1", sd.max_res_D1()},
            {"max_res_E", sd.max_res_E()}};
  out.write("scatter", t, &j);
  return violation ? exit_invariant_violation : exit_ok;
}

int cmd_sumrules(const MatrixPotential& v, double rel_tol, const Output& out) {
  SumRuleReport r = sum_rule_report(v, rel_tol);
  CsvTable t;
  t.header = {"I0", "I2", "I4", "lhs1", "rhs1", "lhs2", "rhs2", "lhs3", "rhs3",
              "residual1", "residual2", "residual3", "k_max_used", "quadrature_points"};
  t.rows.push_back({fmt_double(r.I0), fmt_double(r.I2), fmt_double(r.I4), fmt_double(r.lhs1),
                    fmt_double(r.rhs1), fmt_double(r.lhs2), fmt_double(r.rhs2), fmt_double(r.lhs3),
                    fmt_double(r.rhs3), fmt_double(r.residual1), fmt_double(r.residual2),
                    fmt_double(r.residual3), fmt_double(r.k_max_used),
                    std::to_string(r.quadrature_points)});
  std::printf("sum rules: residuals %.3e %.3e %.3e (I0 %.6g, I2 %.6g, I4 %.6g, K %.0f)\n",
              r.residual1, r.residual2, r.residual3, r.I0, r.I2, r.I4, r.k_max_used);
  json j = {{"I0", r.I0},       {"I2", r.I2},       {"I4", r.I4},
            {"lhs1", r.lhs1},   {"rhs1", r.rhs1},   {"lhs2", r.lhs2},
            {"rhs2", r.rhs2},   {"lhs3", r.lhs3},   {"rhs3", r.rhs3},
            {"residual1", r.residual1}, {"residual2", r.residual2}, {"residual3", r.residual3},
            {"k_max_used", r.k_max_used}, {"quadrature_points", r.quadrature_points}};
  out.write("sumrules", t, &j);
  bool ok = r.residual1 <= 1e-3 && r.residual2 <= 1e-3 && r.residual3 <= 1e-3 && r.I0 >= -1e-9 &&
            r.I2 >= -1e-9 && r.I4 >= -1e-9;
  return ok ? exit_ok : exit_invariant_violation;
}

void lt_table_row(CsvTable& t, const LtReport& r) {
  t.rows.push_back({fmt_double(r.gamma), std::to_string(r.dimension), fmt_double(r.riesz_mean),
                    fmt_double(r.potential_integral), fmt_double(r.lcl), fmt_double(r.ratio),
                    fmt_double(r.slack)});
}

bool lt_violates(const LtReport& r) {
  if (!r.sharp_claim) return false;  // no sharp-constant claim below gamma = 3/2
  double slack_ratio = r.classical_bound > 1e-300 ? r.slack / r.classical_bound : 0.0;
  return r.ratio > 1.0 + 1e-6 + slack_ratio;
}

int cmd_ltcheck(const std::string& potential_ref, std::optional<std::uint64_t> seed, double gamma,
                int d, const std::string& field_name, const Output& out) {
  CsvTable t;
  t.header = {"gamma", "d", "riesz_mean", "potential_integral", "Lcl", "ratio", "slack"};
  LtReport r;
  if (d == 1) {
    MatrixPotential v = load_build(potential_ref, seed);
    r = lt_ratio(v, gamma);
  } else if (d == 2) {
    r = lt_ratio_2d(named_field2d(field_name), gamma);
  } else {
    throw std::invalid_argument("ltcheck: d must be 1 (matrix) or 2 (scalar)");
  }
  lt_table_row(t, r);
  if (r.replaced_positive_part)
    std::fprintf(stderr, "warning: potential had a positive part; replaced by -V_-\n");
  if (!r.sharp_claim)
    std::fprintf(stderr, "note: gamma < 3/2, no sharp-constant claim for this ratio\n");
  std::printf("lt ratio (gamma %.3g, d %d): %.6f  [riesz %.6g, bound %.6g, slack %.2e]\n",
              r.gamma, r.dimension, r.ratio, r.riesz_mean, r.classical_bound, r.slack);
  json j = {{"gamma", r.gamma},   {"d", r.dimension},
            {"riesz_mean", r.riesz_mean}, {"potential_integral", r.potential_integral},
            {"Lcl", r.lcl},       {"ratio", r.ratio},
            {"slack", r.slack},   {"sharp_claim", r.sharp_claim},
            {"replaced_positive_part", r.replaced_positive_part}};
  out.write("ltreport", t, &j);
  return lt_violates(r) ? exit_invariant_violation : exit_ok;
}

int cmd_weyl(const MatrixPotential& v, double gamma, const std::vector<double>& alphas,
             const Output& out) {
  std::vector<LtReport> reports = weyl_scan(v, gamma, alphas);
  CsvTable t;
  t.header = {"alpha", "gamma", "riesz_mean", "potential_integral", "ratio", "slack"};
  json rows = json::array();
  bool violation = false;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const LtReport& r = reports[i];
    t.rows.push_back({fmt_double(alphas[i]), fmt_double(gamma), fmt_double(r.riesz_mean),
                      fmt_double(r.potential_integral), fmt_double(r.ratio),
                      fmt_double(r.slack)});
    rows.push_back({{"alpha", alphas[i]}, {"ratio", r.ratio}});
    std::printf("alpha %8.4g  ratio %.6f\n", alphas[i], r.ratio);
    if (lt_violates(r)) violation = true;
    if (i > 0 && reports[i].ratio < reports[i - 1].ratio - 1e-3) violation = true;
  }
  if (!reports.empty() && alphas.back() >= 400.0 && reports.back().ratio < 0.9) violation = true;
  json j = {{"rows", rows}};
  out.write("weyl", t, &j);
  return violation ? exit_invariant_violation : exit_ok;
}

int cmd_lift(const std::string& field_name, double gamma, int n_points, const Output& out) {
  LiftingChainReport rep = lifting_chain_check(named_field2d(field_name), gamma, n_points);
  CsvTable t;
  t.header = {"quantity", "base", "refined"};
  auto row = [&](const char* name, double b, double r) {
    t.rows.push_back({name, fmt_double(b), fmt_double(r)});
  };
  row("box", rep.base.q_box, rep.refined.q_box);
  row("operator", rep.base.q_operator, rep.refined.q_operator);
  row("slice_bound", rep.base.q_slice_bound, rep.refined.q_slice_bound);
  row("classical", rep.base.q_classical, rep.refined.q_classical);
  std::printf("chain: %.8g <= %.8g <= %.8g <= %.8g  (%s)\n", rep.refined.q_box,
              rep.refined.q_operator, rep.refined.q_slice_bound, rep.refined.q_classical,
              rep.ordered ? "ordered" : ("violated at " + rep.failing_link).c_str());
  json j = {{"box", rep.refined.q_box},
            {"operator", rep.refined.q_operator},
            {"slice_bound", rep.refined.q_slice_bound},
            {"classical", rep.refined.q_classical},
            {"ordered", rep.ordered},
            {"failing_link", rep.failing_link}};
  out.write("lift", t, &j);
  return rep.ordered ? exit_ok : exit_invariant_violation;
}

ScalarField3D field3d_from_json(const json& j, const char* key) {
  ScalarField3D f;
  const json& g = j.at("grid");
  auto axis = [&](const char* a) {
    const json& ja = g.at(a);
    return make_grid(ja.at(0).get<double>(), ja.at(1).get<double>(), ja.at(2).get<int>());
  };
  f.gx = axis("x");
  f.gy = axis("y");
  f.gz = axis("z");
  f.values = j.at(key).get<std::vector<double>>();
  std::size_t expect = static_cast<std::size_t>(f.gx.n_points) * f.gy.n_points * f.gz.n_points;
  if (f.values.size() != expect)
    throw std::invalid_argument(std::string("pauli-rhs: '") + key + "' has wrong length");
  return f;
}

int cmd_pauli(const std::string& fields_file, double v0, double b0, int n_points, double gamma,
              const Output& out) {
  ScalarField3D v, b;
  if (!fields_file.empty()) {
    std::ifstream in(fields_file);
    if (!in) throw std::invalid_argument("cannot open fields file: " + fields_file);
    json j;
    try {
      in >> j;
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("malformed fields file: ") + e.what());
    }
    v = field3d_from_json(j, "v");
    b = field3d_from_json(j, "b");
  } else {
    // uniform fields on the unit cube
    Grid g = make_grid(0.0, 1.0, n_points);
    v.gx = v.gy = v.gz = g;
    b.gx = b.gy = b.gz = g;
    std::size_t total = static_cast<std::size_t>(n_points) * n_points * n_points;
    v.values.assign(total, v0);
    b.values.assign(total, b0);
  }
  double value = pauli_rhs(v, b, gamma);
  std::printf("%.12g\n", value);
  CsvTable t;
  t.header = {"gamma", "value"};
  t.rows.push_back({fmt_double(gamma), fmt_double(value)});
  json j = {{"gamma", gamma}, {"value", value}};
  out.write("pauli", t, &j);
  return exit_ok;
}

int cmd_corpus(const Output& out) {
  CsvTable t;
  t.header = {"name", "n",     "resonance_screen", "max_res_D", "max_res_E",
              "states", "kappa_top", "lt_ratio_1.5", "status"};
  bool violation = false;
  std::vector<double> ks;
  for (int i = 0; i < 12; ++i) ks.push_back(0.25 * std::pow(128.0 / 0.25 / 2, i / 11.0));
  for (const auto& entry : corpus_all()) {
    MatrixPotential v = build_potential(entry.spec);
    double screen_val = 0;
    bool screen_ok = resonance_screen(v, &screen_val);
    ScatteringData sd = scattering_scan(v, ks);
    BoundStateSet bs = bound_states_from_detA(v);
    LtReport lt = lt_ratio(v, 1.5);
    bool ok = screen_ok && !lt_violates(lt);
    if (!ok) violation = true;
    t.rows.push_back({entry.name, std::to_string(v.dim()), fmt_double(screen_val),
                      fmt_double(sd.max_res_D()), fmt_double(sd.max_res_E()),
                      std::to_string(bs.kappas.size()),
                      bs.kappas.empty() ? "0" : fmt_double(bs.kappas.front()),
                      fmt_double(lt.ratio), ok ? "ok" : "VIOLATION"});
    std::printf("%-12s n=%d resD=%.2e resE=%.2e states=%zu ratio(3/2)=%.4f %s\n",
                entry.name.c_str(), v.dim(), sd.max_res_D(), sd.max_res_E(), bs.kappas.size(),
                lt.ratio, ok ? "ok" : "VIOLATION");
  }
  out.write("corpus_summary", t, nullptr);
  return violation ? exit_invariant_violation : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D matrix Schrodinger scattering, trace identities and sharp "
               "Lieb-Thirring bound checks"};
  app.require_subcommand(0, 1);

  std::string out_dir;
  std::vector<std::string> formats;
  std::string potential_ref;
  std::optional<std::uint64_t> seed;
  bool corpus = false;
  app.add_option("--out", out_dir, "output directory for reports");
  app.add_option("--format", formats, "report formats: csv, text");
  app.add_flag("--corpus", corpus, "run the built-in potential corpus end-to-end");

  double gamma = 1.5;
  int d = 1;
  double kmin = 0.25, kmax = 32.0;
  int kpoints = 48;
  double pad = 0;
  int n_points = 0;
  double rel_tol = 1e-4;
  std::vector<double> alphas{25, 100, 400};
  std::string field2d = "gaussian";
  std::string fields_file;
  double v0 = -1.0, b0 = 1.0;
  int cube_points = 33;

  CLI::App* c_constants = app.add_subcommand("constants", "classical constant L^cl_{gamma,d}");
  c_constants->add_option("--gamma", gamma, "Riesz order")->required();
  c_constants->add_option("--d", d, "dimension")->required();

  CLI::App* c_eig = app.add_subcommand("eig", "finite-difference negative spectrum");
  c_eig->add_option("--potential", potential_ref, "potential spec file or corpus:<name>")
      ->required();
  c_eig->add_option("--pad", pad, "Dirichlet box padding (default: auto)");
  c_eig->add_option("--npoints", n_points, "grid points at the coarse resolution (default: auto)");
  c_eig->add_option("--seed", seed, "override the spec's random seed");

  CLI::App* c_scatter = app.add_subcommand("scatter", "scattering relation residual scan");
  c_scatter->add_option("--potential", potential_ref)->required();
  c_scatter->add_option("--kmin", kmin, "smallest real k (default 0.25)");
  c_scatter->add_option("--kmax", kmax, "largest real k (default 32)");
  c_scatter->add_option("--kpoints", kpoints, "log-spaced k count (default 48)");
  c_scatter->add_option("--seed", seed);

  CLI::App* c_sum = app.add_subcommand("sumrules", "trace-identity report");
  c_sum->add_option("--potential", potential_ref)->required();
  c_sum->add_option("--rtol", rel_tol, "moment integral relative tolerance (default 1e-4)");
  c_sum->add_option("--seed", seed);

  CLI::App* c_lt = app.add_subcommand("ltcheck", "Riesz mean vs classical bound");
  c_lt->add_option("--potential", potential_ref, "required for --d 1");
  c_lt->add_option("--gamma", gamma)->required();
  c_lt->add_option("--d", d, "1 (matrix potential) or 2 (scalar field)");
  c_lt->add_option("--field2d", field2d, "built-in 2d field for --d 2: gaussian, separable");
  c_lt->add_option("--seed", seed);

  CLI::App* c_weyl = app.add_subcommand("weyl", "large-coupling ratio scan");
  c_weyl->add_option("--potential", potential_ref)->required();
  c_weyl->add_option("--gamma", gamma);
  c_weyl->add_option("--alphas", alphas, "increasing coupling list (default 25 100 400)");
  c_weyl->add_option("--seed", seed);

  CLI::App* c_lift = app.add_subcommand("lift", "dimension-lifting chain at d = 2");
  c_lift->add_option("--field2d", field2d, "gaussian or separable")->required();
  c_lift->add_option("--gamma", gamma);
  c_lift->add_option("--npoints", n_points, "2d grid points per axis (default 40)");

  CLI::App* c_pauli = app.add_subcommand("pauli-rhs", "Pauli bound right-hand side");
  c_pauli->add_option("--fields", fields_file, "JSON file with 3d grid and v, b arrays");
  c_pauli->add_option("--gamma", gamma)->required();
  c_pauli->add_option("--v0", v0, "uniform V on the unit cube (when no --fields)");
  c_pauli->add_option("--b0", b0, "uniform B on the unit cube (when no --fields)");
  c_pauli->add_option("--npoints", cube_points, "cube samples per axis");

  CLI11_PARSE(app, argc, argv);

  try {
    Output out = make_output(out_dir, formats);
    if (corpus && app.get_subcommands().empty()) return cmd_corpus(out);
    if (app.get_subcommands().empty()) {
      std::fprintf(stderr, "no command given; see --help\n");
      return exit_input_error;
    }
    CLI::App* sub = app.get_subcommands().front();
    if (sub == c_constants) return cmd_constants(gamma, d, out);
    if (sub == c_eig) return cmd_eig(load_build(potential_ref, seed), pad, n_points, out);
    if (sub == c_scatter)
      return cmd_scatter(load_build(potential_ref, seed), kmin, kmax, kpoints, out);
    if (sub == c_sum) return cmd_sumrules(load_build(potential_ref, seed), rel_tol, out);
    if (sub == c_lt) return cmd_ltcheck(potential_ref, seed, gamma, d, field2d, out);
    if (sub == c_weyl) return cmd_weyl(load_build(potential_ref, seed), gamma, alphas, out);
    if (sub == c_lift) return cmd_lift(field2d, gamma, n_points > 0 ? n_points : 40, out);
    if (sub == c_pauli) return cmd_pauli(fields_file, v0, b0, cube_points, gamma, out);
    std::fprintf(stderr, "unknown command\n");
    return exit_input_error;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_input_error;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_input_error;
  }
}
