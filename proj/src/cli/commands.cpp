#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "bos/cli.hpp"
#include "bos/closed_form_inverse.hpp"
#include "bos/evolution.hpp"
#include "bos/factorization.hpp"
#include "bos/operators.hpp"
#include "bos/spectrum.hpp"
#include "common.hpp"

namespace bos::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string format = "csv";
};

struct ParamOpts {
  double a = 0.0;
  double b = 1.0;
};

void add_params(CLI::App* sub, ParamOpts& p) {
  sub->add_option("--a", p.a, "drainage coefficient a >= 0")->required();
  sub->add_option("--b", p.b, "diffusion coefficient b > 0")->required();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out << std::setprecision(17);
  return out;
}

class Context {
 public:
  Context(const Globals& g, std::ostream& log) : g_(g), log_(log) {}

  std::string path(const std::string& file) const {
    const fs::path f(file);
    return f.is_absolute() ? f.string() : (fs::path(g_.out_dir) / f).string();
  }
  bool csv() const { return g_.format == "csv"; }
  std::uint64_t seed() const { return g_.seed; }
  std::ostream& log() const { return log_; }

 private:
  const Globals& g_;
  std::ostream& log_;
};

// Numbers and booleans echo as JSON scalars, everything else as the string
// that was passed.
json typed(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (!v.is_discarded() && (v.is_number() || v.is_boolean())) return v;
  return text;
}

json echo_options(const CLI::App* app) {
  json j = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    const auto& res = opt->results();
    if (!res.empty()) {
      j[name] = typed(res.back());
    } else if (!opt->get_default_str().empty()) {
      j[name] = typed(opt->get_default_str());
    }
  }
  return j;
}

GridFunction read_input(const std::string& file) { return read_grid_csv(file); }

FourierVector fourier_from_grid(const GridFunction& g, int N) {
  const auto rep = analyze_checked(g, N);
  return rep.coeffs;
}

int modes_of(const GridFunction& g) { return (int(g.size()) - 1) / 2; }

json grid_json(const GridFunction& g) {
  json arr = json::array();
  for (std::size_t j = 0; j < g.size(); ++j) {
    arr.push_back({g.nodes[j], g.values[j].real(), g.values[j].imag()});
  }
  return arr;
}

// --- assemble --------------------------------------------------------------------

struct AssembleOpts {
  ParamOpts p;
  int N = 32;
  std::string kind = "L";
  std::string out = "matrix.csv";
};

void run_assemble(const AssembleOpts& o, const Context& ctx, Report& rep) {
  const auto p = OperatorParams::validate(o.p.a, o.p.b);
  const OperatorKind kind = parse_operator_kind(o.kind);
  const auto op = assemble(p, o.N, kind);
  json entries = json::array();
  std::size_t nonzero = 0;
  std::optional<std::ofstream> csv;
  if (ctx.csv()) {
    csv.emplace(open_out(ctx.path(o.out)));
    *csv << "m,n,re,im\n";
  }
  for (int m = -o.N; m <= o.N; ++m) {
    for (int n = std::max(-o.N, m - 1); n <= std::min(o.N, m + 1); ++n) {
      const cplx v = op.entry(m, n);
      if (v == 0.0) continue;
      ++nonzero;
      if (csv) {
        *csv << m << ',' << n << ',' << v.real() << ',' << v.imag() << '\n';
      } else {
        entries.push_back({m, n, v.real(), v.imag()});
      }
    }
  }
  rep.results()["kind"] = to_string(kind);
  rep.results()["N"] = o.N;
  rep.results()["nonzero"] = nonzero;
  if (csv) {
    rep.results()["matrix_csv"] = ctx.path(o.out);
  } else {
    rep.results()["entries"] = entries;
  }
  switch (kind) {
    case OperatorKind::M:
    case OperatorKind::Mstar:
      rep.add(check_le("mstar_adjoint_defect", adjoint_check(p, o.N), 1e-13));
      break;
    case OperatorKind::D:
      rep.add(check_le("d_hermitian_part_defect", hermitian_part_check(p, o.N), 1e-13));
      rep.add(check_ge("d_min_eigenvalue", d_min_eigenvalue(p, o.N), p.hermitian_part_floor() - 1e-10));
      break;
    case OperatorKind::C:
      rep.add(check_le("c_hermitian_defect", c_hermitian_defect(p, o.N), 1e-13));
      break;
    case OperatorKind::L:
      rep.add(check_le("factorization_residual", factorization_residual(p, o.N).interior, 1e-10));
      break;
    case OperatorKind::S:
      break;
  }
}

// --- minverse ------------------------------------------------------------------

struct MinverseOpts {
  ParamOpts p;
  std::string input;
  std::string method = "closed-form";
  std::string out = "y.csv";
  int N = kTriangleFourierN;
  int grid = 256;
  double x_cut = InverseProfile{}.x_cut;
  int quad_order = InverseProfile{}.quad_order;
  int panels = InverseProfile{}.panels;
  double graded_ratio = InverseProfile{}.graded_ratio;
};

void run_minverse(const MinverseOpts& o, const Context& ctx, Report& rep) {
  const auto p = OperatorParams::validate(o.p.a, o.p.b);
  InverseProfile profile;
  profile.x_cut = o.x_cut;
  profile.quad_order = o.quad_order;
  profile.panels = o.panels;
  profile.graded_ratio = o.graded_ratio;
  profile.validate();

  GridFunction u_grid;
  if (o.input.empty()) {
    // u = 1, the y0 profile
    u_grid.nodes = uniform_grid(o.grid);
    u_grid.values.assign(u_grid.nodes.size(), 1.0);
  } else {
    u_grid = read_input(o.input);
  }
  u_grid.validate();
  const FourierVector u = fourier_from_grid(u_grid, modes_of(u_grid));
  const auto& nodes = u_grid.nodes;

  auto solve = [&](const std::string& method) -> GridFunction {
    if (method == "closed-form") return minv_closed_form(p, u, nodes, profile);
    if (method == "fourier") return synthesize(minv_fourier(p, u, o.N), nodes);
    if (method == "ode") return minv_ode(p, u, nodes);
    throw Error(ErrorCode::invalid_argument, "unknown method '" + method + "'");
  };

  const std::string primary = o.method == "all" ? "closed-form" : o.method;
  const GridFunction y = solve(primary);
  rep.results()["method"] = o.method;
  rep.results()["points"] = y.size();
  if (ctx.csv()) {
    write_grid_csv(ctx.path(o.out), y);
    rep.results()["y_csv"] = ctx.path(o.out);
  } else {
    rep.results()["y"] = grid_json(y);
  }
  if (o.method == "all") {
    const auto tri = oracle_triangle(p, u, 1e-2, kTriangleGrid, o.N, profile);
    rep.results()["closed_vs_fourier"] = tri.closed_vs_fourier;
    rep.results()["closed_vs_ode"] = tri.closed_vs_ode;
    rep.results()["fourier_vs_ode"] = tri.fourier_vs_ode;
    rep.add(check_le("inverse_oracle_triangle", tri.max(), 1e-6));
  }
}

// --- factor-check -----------------------------------------------------------------

struct FactorOpts {
  ParamOpts p;
  int N = 64;
  int samples = 20;
};

void run_factor_check(const FactorOpts& o, const Context& ctx, Report& rep) {
  const auto p = OperatorParams::validate(o.p.a, o.p.b);
  const auto fac = factorization_residual(p, o.N);
  const double adj = adjoint_check(p, o.N);

  const auto direct = l11_inverse_direct(p, o.N);
  Rng rng(ctx.seed());
  double equiv = 0.0;
  for (int s = 0; s < o.samples; ++s) {
    const auto g = random_mean_zero(rng, o.N);
    const auto composed = l11_inverse_composed(p, o.N, g);
    const auto ref = from_mean_free(direct.inverse * mean_free_part(g), o.N);
    equiv = std::max(equiv, FourierVector(o.N, composed.coeffs() - ref.coeffs()).l2_norm());
  }
  const auto z0 = compute_z0(p, o.N);

  rep.results()["params"] = {{"a", p.a()}, {"b", p.b()}};
  rep.results()["N"] = o.N;
  rep.results()["residuals"] = {{"factorization", fac.interior},
                                {"factorization_full", fac.full},
                                {"adjoint", adj},
                                {"equivalence", equiv},
                                {"l11_direct", direct.residual},
                                {"z0", z0.residual}};
  rep.results()["l11_condition"] = direct.condition;
  rep.results()["hs_sequence"] = json::array();
  rep.add(check_le("factorization_residual", fac.interior, 1e-10));
  rep.add(check_le("mstar_adjoint_defect", adj, 1e-13));
  rep.add(check_le("l11_direct_residual", direct.residual, 1e-8));
  rep.add(check_le("composition_equivalence", equiv, 1e-7));
  rep.add(check_le("z0_residual", z0.residual, 1e-10));
}

// --- resolvent ---------------------------------------------------------------------

struct ResolventOpts {
  ParamOpts p;
  int N = 64;
  std::string lambda = "1,0";
  std::string input;
  std::string out = "resolvent.csv";
};

void run_resolvent(const ResolventOpts& o, const Context& ctx, Report& rep) {
  const auto p = OperatorParams::validate(o.p.a, o.p.b);
  const auto [re, im] = parse_complex(o.lambda);
  const cplx lam(re, im);
  GridFunction f_grid;
  if (o.input.empty()) {
    f_grid.nodes = uniform_grid(4 * o.N);
    f_grid.values.assign(f_grid.nodes.size(), 1.0);
  } else {
    f_grid = read_input(o.input);
  }
  f_grid.validate();
  const FourierVector f = fourier_from_grid(f_grid, o.N);
  const ResolventSolver solver(p, o.N, lam);
  const FourierVector y = solver(f);
  const FourierVector ref = resolvent_dense(p, o.N, lam, f);
  const double block = FourierVector(o.N, y.coeffs() - ref.coeffs()).l2_norm();
  const GridFunction y_grid = synthesize(y, f_grid.nodes);

  rep.results()["lambda"] = {re, im};
  rep.results()["N"] = o.N;
  rep.results()["eigen_distance"] = solver.eigen_distance();
  if (ctx.csv()) {
    write_grid_csv(ctx.path(o.out), y_grid);
    rep.results()["y_csv"] = ctx.path(o.out);
  } else {
    rep.results()["y"] = grid_json(y_grid);
  }
  rep.add(check_le("resolvent_residual", solver.residual(f, y), 1e-8));
  rep.add(check_le("resolvent_block_vs_dense", block, 1e-8));
}

// --- hs-norm -------------------------------------------------------------------------

struct HsOpts {
  ParamOpts p;
  std::string n_list = "16,32,64,128";
  std::string out = "hs.csv";
};

void run_hs_norm(const HsOpts& o, const Context& ctx, Report& rep) {
  const auto p = OperatorParams::validate(o.p.a, o.p.b);
  const auto Ns = parse_int_list(o.n_list);
  const auto seq = hs_norm_estimate(p, Ns);
  json arr = json::array();
  std::optional<std::ofstream> csv;
  if (ctx.csv()) {
    csv.emplace(open_out(ctx.path(o.out)));
    *csv << "N,frobenius,difference\n";
  }
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const double diff = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                               : std::abs(seq[i].frobenius - seq[i - 1].frobenius);
    if (i >= 2) {
      const double prev = std::abs(seq[i - 1].frobenius - seq[i - 2].frobenius);
      worst_ratio = std::max(worst_ratio, prev > 0.0 ? diff / prev : std::numeric_limits<double>::infinity());
    }
    arr.push_back({{"N", seq[i].N}, {"frobenius", seq[i].frobenius}});
    if (csv) {
      *csv << seq[i].N << ',' << seq[i].frobenius << ',';
      if (i > 0) *csv << diff;
      *csv << '\n';
    }
  }
  rep.results()["hs_sequence"] = arr;
  if (seq.size() >= 3) {
    rep.add({"hs_differences_decreasing", worst_ratio, 1.0, "<", worst_ratio < 1.0});
  }
  const int Nmax = Ns.back();
  if (Nmax >= 32) {
    const double slope = hs_row_slope(p, Nmax);
    rep.results()["hs_row_slope"] = slope;
    rep.add(check_le("hs_row_slope", slope, -0.9));
  }
}

// --- spectrum -------------------------------------------------------------------------

struct SpectrumOpts {
  ParamOpts p;
  int N = 64;
  int k = 10;
  std::string sweep;
  std::string out = "spectrum.csv";
};

void write_spectrum_csv(const std::string& path, const SpectrumReport& r) {
  auto csv = open_out(path);
  csv << "re,im,converged,stability\n";
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    csv << r.eigenvalues[i].real() << ',' << r.eigenvalues[i].imag() << ','
        << (r.converged[i] ? 1 : 0) << ',' << r.stability[i] << '\n';
  }
}

json spectrum_json(const SpectrumReport& r) {
  json evs = json::array();
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    evs.push_back({{"re", r.eigenvalues[i].real()},
                   {"im", r.eigenvalues[i].imag()},
                   {"converged", bool(r.converged[i])},
                   {"stability", r.stability[i]}});
  }
  return evs;
}

void spectrum_checks(const OperatorParams& p, const SpectrumReport& r, int k, Report& rep) {
  rep.add(check_le("spectrum_conjugate_pairs", conjugate_pair_defect(r.all_eigenvalues), 1e-8));
  if (!p.degenerate_drainage()) return;
  rep.add(check_ge("spectrum_trusted_count", r.trusted_count, k));
  rep.add(check_le("spectrum_max_real_part_ratio", r.trusted_max_real_part_ratio, 1e-8));
  rep.add(check_ge("spectrum_min_gap", r.min_trusted_gap, 10.0 * kConvergenceTol));
  rep.add(check_le("eigenfunction_symmetry_defect", r.symmetry_defect, 1e-6));
  rep.add(check_le("j_self_adjointness_defect", j_symmetry_check(p, r.N), 1e-12));
}

void run_spectrum(const SpectrumOpts& o, const Context& ctx, Report& rep) {
  if (o.sweep.empty()) {
    const auto p = OperatorParams::validate(o.p.a, o.p.b);
    const auto r = compute_spectrum(p, o.N, o.k);
    rep.results()["N"] = o.N;
    rep.results()["k"] = o.k;
    rep.results()["max_real_part_ratio"] = r.max_real_part_ratio;
    rep.results()["trusted_max_real_part_ratio"] = r.trusted_max_real_part_ratio;
    rep.results()["trusted_count"] = r.trusted_count;
    rep.results()["symmetry_defect"] = r.symmetry_defect;
    if (ctx.csv()) {
      write_spectrum_csv(ctx.path(o.out), r);
      rep.results()["spectrum_csv"] = ctx.path(o.out);
    } else {
      rep.results()["eigenvalues"] = spectrum_json(r);
    }
    spectrum_checks(p, r, o.k, rep);
    return;
  }

  const auto eq = o.sweep.find('=');
  const std::string var = eq == std::string::npos ? "" : o.sweep.substr(0, eq);
  if (var != "a" && var != "b") {
    throw Error(ErrorCode::invalid_argument, "sweep must look like a=lo:hi:step or b=lo:hi:step");
  }
  const auto values = parse_range(o.sweep.substr(eq + 1));
  std::vector<OperatorParams> points;
  for (double v : values) {
    points.push_back(var == "a" ? OperatorParams::validate(v, o.p.b)
                                : OperatorParams::validate(o.p.a, v));
  }
  const fs::path stem = fs::path(o.out).stem();
  std::vector<SpectrumReport> reports(points.size());
  std::vector<std::string> files(points.size());
  std::vector<std::optional<Error>> failures(points.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      reports[i] = compute_spectrum(points[i], o.N, o.k);
      std::ostringstream name;
      name << stem.string() << '_' << var << '=' << std::fixed << std::setprecision(4) << values[i]
           << ".csv";
      files[i] = ctx.path(name.str());
      if (ctx.csv()) write_spectrum_csv(files[i], reports[i]);
    } catch (const Error& e) {
      failures[i] = e;
    }
  }
  for (const auto& f : failures) {
    if (f) throw *f;
  }
  json index = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    json entry = {{"a", points[i].a()},
                  {"b", points[i].b()},
                  {"trusted_count", reports[i].trusted_count},
                  {"max_real_part_ratio", reports[i].max_real_part_ratio}};
    if (ctx.csv()) {
      entry["file"] = files[i];
    } else {
      entry["eigenvalues"] = spectrum_json(reports[i]);
    }
    index.push_back(entry);
    spectrum_checks(points[i], reports[i], o.k, rep);
  }
  rep.results()["sweep"] = index;
  const std::string index_path = ctx.path(stem.string() + "_index.json");
  auto out = open_out(index_path);
  out << json{{"schema_version", 1}, {"variable", var}, {"N", o.N}, {"k", o.k}, {"points", index}}.dump(2)
      << '\n';
  rep.results()["index_json"] = index_path;
}

// --- evolve -----------------------------------------------------------------------------

struct EvolveOpts {
  ParamOpts p;
  int N = 64;
  double dt = 1e-3;
  double t_max = 10.0;
  double checkpoint = 0.1;
  std::string init = "preset:bump";
  std::string scheme = "rk4";
  std::string out = "trace.csv";
};

void run_evolve(const EvolveOpts& o, const Context& ctx, Report& rep) {
  const auto p = OperatorParams::validate(o.p.a, o.p.b);
  const Scheme scheme = parse_scheme(o.scheme);
  FourierVector y0;
  const bool preset = o.init.rfind("preset:", 0) == 0;
  if (preset) {
    y0 = initial_preset(o.init.substr(7), p, o.N, ctx.seed());
  } else {
    const auto g = read_input(o.init);
    g.validate();
    y0 = fourier_from_grid(g, std::min(o.N, modes_of(g))).resized(o.N);
  }
  EvolveOptions eo;
  eo.checkpoint = o.checkpoint;
  const auto tr = evolve(p, o.N, y0, o.dt, o.t_max, scheme, eo);

  rep.results()["initial_data"] = preset ? o.init + " (artifact preset)" : o.init;
  rep.results()["growth_factor"] = tr.growth_factor;
  rep.results()["blowup"] = tr.blowup;
  rep.results()["last_finite_time"] = tr.last_finite_time;
  if (tr.blowup) rep.results()["blowup_time"] = tr.blowup_time;
  if (scheme == Scheme::rk4) rep.results()["step_halving_error"] = tr.step_halving_error;

  if (ctx.csv()) {
    auto csv = open_out(ctx.path(o.out));
    csv << "t,l2,h1,blowup_flag\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      csv << tr.times[i] << ',' << tr.l2_norms[i] << ',' << tr.h1_norms[i] << ",0\n";
    }
    if (tr.blowup) csv << tr.blowup_time << ",inf,inf,1\n";
    rep.results()["trace_csv"] = ctx.path(o.out);
  } else {
    rep.results()["times"] = tr.times;
    rep.results()["l2"] = tr.l2_norms;
    rep.results()["h1"] = tr.h1_norms;
  }

  double mean_drift = 0.0;
  for (const auto& m : tr.means) mean_drift = std::max(mean_drift, std::abs(m - tr.means.front()));
  rep.add(check_le("mean_conservation", mean_drift, 1e-10));
  if (preset && o.init.rfind("preset:mode:", 0) == 0) {
    double drift = tr.blowup ? std::numeric_limits<double>::infinity() : 0.0;
    for (double v : tr.l2_norms) drift = std::max(drift, std::abs(v / tr.l2_norms.front() - 1.0));
    rep.results()["eigenmode_norm_drift"] = drift;
    // constancy is only claimed for purely imaginary eigenvalues at a = 0
    if (p.degenerate_drainage()) rep.add(check_le("eigenmode_norm_constancy", drift, 1e-6));
  }
}

// --- growth -------------------------------------------------------------------------------

struct GrowthOpts {
  ParamOpts p;
  std::string n_list = "16,32,64";
  std::string t_grid = "0:5:0.25";
  std::string out = "growth.csv";
};

void run_growth(const GrowthOpts& o, const Context& ctx, Report& rep) {
  const auto p = OperatorParams::validate(o.p.a, o.p.b);
  const auto Ns = parse_int_list(o.n_list);
  const auto ts = parse_range(o.t_grid);
  const auto rows = growth_envelope(p, Ns, ts);
  if (ctx.csv()) {
    auto csv = open_out(ctx.path(o.out));
    csv << "N,t,log10_norm,norm\n";
    for (const auto& r : rows) csv << r.N << ',' << r.t << ',' << r.log10_norm << ',' << r.norm << '\n';
    rep.results()["growth_csv"] = ctx.path(o.out);
  } else {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back({{"N", r.N}, {"t", r.t}, {"log10_norm", r.log10_norm}});
    rep.results()["rows"] = arr;
  }
  const auto maxima = envelope_maxima(rows);
  json env = json::array();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < maxima.size(); ++i) {
    env.push_back({{"N", maxima[i].first}, {"max_log10_norm", maxima[i].second}});
    if (i > 0) worst = std::min(worst, maxima[i].second - maxima[i - 1].second);
  }
  rep.results()["envelope_maxima"] = env;
  double t0 = 0.0;
  for (const auto& r : rows) {
    if (r.t == 0.0) t0 = std::max(t0, std::abs(r.norm - 1.0));
  }
  rep.add(check_le("growth_norm_at_t0", t0, 0.0));
  if (p.degenerate_drainage() && p.b() == 1.0 && maxima.size() > 1) {
    rep.add(check_ge("growth_envelope_monotone", worst, 0.0));
  }
}

// --- verify-all -----------------------------------------------------------------------------

struct VerifyAllOpts {
  std::string grid = "0,1;0.3,1.0;0.2,1.2";
  int N = 64;
  int samples = 20;
};

void run_verify_all(const VerifyAllOpts& o, const Context& ctx, Report& rep) {
  const auto grid = parse_param_grid(o.grid);
  if (grid.empty()) throw Error(ErrorCode::invalid_argument, "parameter grid is empty");
  std::vector<OperatorParams> points;
  for (const auto& [a, b] : grid) points.push_back(OperatorParams::validate(a, b));

  VerifyOptions vo;
  vo.N = o.N;
  vo.samples = o.samples;
  vo.seed = ctx.seed();
  json global = json::object();
  rep.add(verify_global(global));
  rep.results()["global"] = global;
  json arr = json::array();
  for (const auto& p : points) {
    ctx.log() << "verify-all: a = " << p.a() << ", b = " << p.b() << '\n';
    json res = json::object();
    auto checks = verify_point(p, vo, res);
    std::ostringstream prefix;
    prefix << "a=" << p.a() << ",b=" << p.b() << ":";
    for (auto& c : checks) c.name = prefix.str() + c.name;
    rep.add(checks);
    arr.push_back(res);
  }
  rep.results()["points"] = arr;
  int failed = 0;
  for (const auto& c : rep.checks()) failed += !c.pass;
  rep.results()["failed_checks"] = failed;
}

}  // namespace

int run(const std::vector<std::string>& argv_in, std::ostream& log) {
  std::vector<std::string> argv;
  try {
    argv = merge_config(argv_in);
  } catch (const Error& e) {
    Report rep("config", json::object());
    rep.set_error(e);
    log << rep.to_json()["error"].dump() << '\n';
    return rep.exit_status();
  }

  CLI::App app{"Factorization, inversion, spectrum and evolution tools for d/dx((1 - a cos x)y + b sin x y')",
               "bos"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", "flat key = value config file; flags override it");
  app.add_option("--seed", g.seed, "seed for randomized inputs");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--format", g.format, "data output format")->check(CLI::IsMember({"csv", "json"}));

  std::function<void(const Context&, Report&)> job;
  std::string command;

  AssembleOpts ao;
  auto* s_asm = app.add_subcommand("assemble", "dump the banded matrix of S, M, Mstar, D, C or L");
  add_params(s_asm, ao.p);
  s_asm->add_option("--n", ao.N, "half-width N (modes -N..N)");
  s_asm->add_option("--kind", ao.kind, "operator")->check(CLI::IsMember({"S", "M", "Mstar", "D", "C", "L"}));
  s_asm->add_option("--out", ao.out, "matrix CSV (m,n,re,im)");
  s_asm->callback([&] { job = [&](const Context& c, Report& r) { run_assemble(ao, c, r); }; });

  MinverseOpts mo;
  auto* s_minv = app.add_subcommand("minverse", "apply M^{-1} to sampled data");
  add_params(s_minv, mo.p);
  s_minv->add_option("--input", mo.input, "u samples (x,re,im) on a uniform periodic grid; default u = 1");
  s_minv->add_option("--method", mo.method, "inversion route")
      ->check(CLI::IsMember({"closed-form", "fourier", "ode", "all"}));
  s_minv->add_option("--out", mo.out, "y samples CSV");
  s_minv->add_option("--n", mo.N, "modes for the Fourier route");
  s_minv->add_option("--grid", mo.grid, "grid size when no input is given");
  s_minv->add_option("--x-cut", mo.x_cut, "self-check exclusion radius");
  s_minv->add_option("--quad-order", mo.quad_order, "Gauss nodes per panel");
  s_minv->add_option("--panels", mo.panels, "graded panels per half-interval");
  s_minv->add_option("--graded-ratio", mo.graded_ratio, "panel grading ratio");
  s_minv->callback([&] { job = [&](const Context& c, Report& r) { run_minverse(mo, c, r); }; });

  FactorOpts fo;
  auto* s_fac = app.add_subcommand("factor-check", "L = SM residual and L11 inverse constructions");
  add_params(s_fac, fo.p);
  s_fac->add_option("--n", fo.N, "half-width N");
  s_fac->add_option("--samples", fo.samples, "random mean-zero vectors");
  s_fac->callback([&] { job = [&](const Context& c, Report& r) { run_factor_check(fo, c, r); }; });

  ResolventOpts ro;
  auto* s_res = app.add_subcommand("resolvent", "apply (L_N - lambda)^{-1} by the block formula");
  add_params(s_res, ro.p);
  s_res->add_option("--n", ro.N, "half-width N");
  s_res->add_option("--lambda", ro.lambda, "RE,IM");
  s_res->add_option("--input", ro.input, "f samples (x,re,im); default f = 1");
  s_res->add_option("--out", ro.out, "y samples CSV");
  s_res->callback([&] { job = [&](const Context& c, Report& r) { run_resolvent(ro, c, r); }; });

  HsOpts ho;
  auto* s_hs = app.add_subcommand("hs-norm", "Frobenius norms of L11_N^{-1}");
  add_params(s_hs, ho.p);
  s_hs->add_option("--n-list", ho.n_list, "ascending truncations");
  s_hs->add_option("--out", ho.out, "CSV (N,frobenius,difference)");
  s_hs->callback([&] { job = [&](const Context& c, Report& r) { run_hs_norm(ho, c, r); }; });

  SpectrumOpts so;
  auto* s_spec = app.add_subcommand("spectrum", "eigenvalues of L11_N with truncation stability");
  s_spec->add_option("--a", so.p.a, "drainage coefficient a >= 0");
  s_spec->add_option("--b", so.p.b, "diffusion coefficient b > 0");
  s_spec->add_option("--n", so.N, "half-width N");
  s_spec->add_option("--k", so.k, "eigenvalues to report (<= N/2)");
  s_spec->add_option("--sweep", so.sweep, "a=lo:hi:step or b=lo:hi:step");
  s_spec->add_option("--out", so.out, "CSV (re,im,converged,stability)");
  s_spec->callback([&] { job = [&](const Context& c, Report& r) { run_spectrum(so, c, r); }; });

  EvolveOpts eo;
  auto* s_evo = app.add_subcommand("evolve", "integrate y_t + L_N y = 0");
  add_params(s_evo, eo.p);
  s_evo->add_option("--n", eo.N, "half-width N");
  s_evo->add_option("--dt", eo.dt, "time step");
  s_evo->add_option("--tmax", eo.t_max, "final time");
  s_evo->add_option("--checkpoint", eo.checkpoint, "norm recording interval");
  s_evo->add_option("--init", eo.init, "CSV file or preset:{bump,constant,random,mode:k}");
  s_evo->add_option("--scheme", eo.scheme, "integrator")->check(CLI::IsMember({"rk4", "expm", "exact-expm"}));
  s_evo->add_option("--out", eo.out, "trace CSV (t,l2,h1,blowup_flag)");
  s_evo->callback([&] { job = [&](const Context& c, Report& r) { run_evolve(eo, c, r); }; });

  GrowthOpts go;
  auto* s_gro = app.add_subcommand("growth", "semigroup norms ||exp(-t L11_N)||_2");
  add_params(s_gro, go.p);
  s_gro->add_option("--n-list", go.n_list, "ascending truncations");
  s_gro->add_option("--t-grid", go.t_grid, "lo:hi:step");
  s_gro->add_option("--out", go.out, "CSV (N,t,log10_norm,norm)");
  s_gro->callback([&] { job = [&](const Context& c, Report& r) { run_growth(go, c, r); }; });

  VerifyAllOpts vo;
  auto* s_ver = app.add_subcommand("verify-all", "every contract over a parameter grid");
  s_ver->add_option("--grid", vo.grid, "a1,b1;a2,b2;...");
  s_ver->add_option("--n", vo.N, "half-width N");
  s_ver->add_option("--samples", vo.samples, "random inputs per randomized check");
  s_ver->callback([&] { job = [&](const Context& c, Report& r) { run_verify_all(vo, c, r); }; });

  std::vector<std::string> reversed(argv.rbegin(), argv.rend() - (argv.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    log << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    Report rep("parse", json::object());
    rep.set_error(ErrorCode::invalid_argument, e.what());
    log << rep.to_json()["error"].dump() << '\n';
    return kExitInvalidConfig;
  }

  const CLI::App* sub = app.get_subcommands().front();
  command = sub->get_name();
  json config = echo_options(&app);
  config.erase("config");
  const json sub_config = echo_options(sub);
  for (const auto& [k, v] : sub_config.items()) config[k] = v;
  Report rep(command, config);
  if (sub_config.contains("a") && sub_config["a"].is_number() && sub_config["a"].get<double>() == 0.0) {
    rep.results()["regime"] = "degenerate-drainage";
  }

  try {
    fs::create_directories(g.out_dir);
  } catch (const fs::filesystem_error& e) {
    rep.set_error(ErrorCode::io, e.what());
    log << rep.to_json()["error"].dump() << '\n';
    return rep.exit_status();
  }
  const Context ctx(g, log);
  try {
    job(ctx, rep);
  } catch (const Error& e) {
    rep.set_error(e);
  }
  const std::string report_path = ctx.path(command + "_report.json");
  try {
    rep.write(report_path);
  } catch (const Error& e) {
    rep.set_error(e);
  }
  const json j = rep.to_json();
  if (j.contains("error")) log << j["error"].dump() << '\n';
  for (const auto& c : rep.checks()) {
    if (!c.pass) log << "check failed: " << c.name << " = " << c.value << " (" << c.op << ' ' << c.threshold << ")\n";
  }
  log << command << ": exit " << rep.exit_status() << ", report " << report_path << '\n';
  return rep.exit_status();
}

}  // namespace bos::cli
