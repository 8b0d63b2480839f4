#include "hbinterp/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "hbinterp/core.hpp"
#include "hbinterp/hb_space.hpp"
#include "hbinterp/interpolation.hpp"
#include "hbinterp/json_io.hpp"
#include "hbinterp/random_seq.hpp"

namespace hbinterp::cli {

namespace {

using io::Json;

// Column-oriented CSV; shorter columns are padded with empty cells.
struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;
};

struct Output {
  Json report;
  std::optional<Table> table;
};

std::string format_real(double x) {
  if (!std::isfinite(x)) return "";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.headers.size(); ++c) out += (c ? "," : "") + t.headers[c];
  out += "\n";
  std::size_t rows = 0;
  for (const auto& col : t.columns) rows = std::max(rows, col.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (c) out += ",";
      if (r < t.columns[c].size()) out += format_real(t.columns[c][r]);
    }
    out += "\n";
  }
  return out;
}

std::vector<double> as_doubles(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

Json reals(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(io::real(x));
  return out;
}

std::vector<std::size_t> dyadic_sizes(std::size_t n, std::size_t first) {
  std::vector<std::size_t> out;
  for (std::size_t k = first; k < n; k *= 2) out.push_back(k);
  if (n > 0) out.push_back(n);
  return out;
}

Json start(const std::string& command) { return {{"command", command}, {"version", kReportVersion}}; }

// Inputs may be either the bare object or a report wrapping it.
RationalPair load_pair(const std::string& path) {
  Json j = io::read_json_file(path);
  if (j.is_object() && j.contains("pair")) j = j["pair"];
  return io::pair_from_json(j);
}

DiskSequence load_sequence(const std::string& path) { return io::sequence_from_json(io::read_json_file(path)); }

RationalFn load_rational(const std::string& path) {
  Json j = io::read_json_file(path);
  if (j.is_object() && j.contains("F")) j = j["F"];
  return io::rational_from_json(j);
}

RadiiFamily load_family(const std::string& arg, std::size_t default_count) {
  Json j;
  if (!arg.empty() && arg.front() == '{') {
    try {
      j = Json::parse(arg);
    } catch (const Json::parse_error& e) {
      throw DomainError(std::string("json: cannot parse family: ") + e.what());
    }
  } else if (std::filesystem::exists(arg)) {
    j = io::read_json_file(arg);
  } else {
    return io::parse_family_spec(arg, default_count);
  }
  if (j.contains("family")) j = j["family"];
  if (!j.contains("count")) j["count"] = default_count;
  return io::radii_from_json(j);
}

AnalyticSeries load_function(const std::string& path) {
  const Json j = io::read_json_file(path);
  if (j.is_object() && j.contains("blaschke")) {
    return AnalyticSeries::from_blaschke(BlaschkeProduct{io::sequence_from_json(j["blaschke"])});
  }
  if (j.is_array()) return AnalyticSeries::from_polynomial(io::poly_from_json(j));
  return AnalyticSeries::from_rational(io::rational_from_json(j));
}

Json pair_report_json(const PairReport& r) {
  return {{"max_residual", io::real(r.max_residual)},
          {"min_num_root_modulus", io::real(r.min_num_root_modulus)},
          {"outer", r.outer},
          {"a0_positive", r.a0_positive},
          {"a_sup", io::real(r.a_sup)},
          {"b_sup", io::real(r.b_sup)},
          {"pass", r.pass}};
}

void check_positive(int v, const char* what) {
  if (v < 1) throw DomainError(std::string(what) + " must be a positive integer");
}

struct Args {
  std::string b, pair, seq, f, nodes, values, F, zeros, family, zeta = "1", lambda, value;
  std::string out, format = "json";
  int grid = kDefaultCircleGrid;
  int max_grid = 1 << 20;
  int order = 1;
  int derivs = 1;
  int m = 1;
  bool quadrature = false;
  std::size_t trials = 200, truncate = 4096, count = 1024;
  std::uint64_t seed = 0;
  double threshold = 10.0;
  double zeta_angle = 0.0;
  unsigned threads = 0;
  std::vector<std::size_t> truncations;
};

Output cmd_mate(const Args& a) {
  const RationalFn b = load_rational(a.b);
  const RationalPair pair = pythagorean_mate(b, MateOptions{a.grid, 1e-9});
  Json r = start("mate");
  r["pair"] = io::to_json(pair);
  r["verification"] = pair_report_json(verify_pair(pair, a.grid));
  return {r, std::nullopt};
}

Output cmd_verify_pair(const Args& a) {
  const RationalPair pair = load_pair(a.pair);
  Json r = start("verify-pair");
  r["verification"] = pair_report_json(verify_pair(pair, a.grid));
  r["corona_lower_bound"] = io::real(corona_lower_bound(pair));
  return {r, std::nullopt};
}

Output cmd_decide(const Args& a) {
  const RationalPair pair = load_pair(a.pair);
  const DiskSequence seq = load_sequence(a.seq);
  const DecisionReport d = decide(pair, seq);
  Json r = start("decide");
  r["verdict"] = to_string(d.verdict);
  r["almost_sure"] = d.almost_sure;
  r["reason"] = d.reason;
  r["carleson"] = {{"delta", io::real(d.carleson.delta)},
                   {"separation", io::real(d.carleson.separation)},
                   {"argmin_index", d.carleson.argmin_index}};
  r["delta_curve"] = {{"truncations", d.delta_truncations}, {"values", reals(d.delta_curve)}};
  r["carleson_class"] = to_string(d.carleson_class);
  Json sums = Json::array();
  Table t{{"truncation", "delta"}, {as_doubles(d.delta_truncations), d.delta_curve}};
  for (const auto& z : d.sums.per_zero) {
    sums.push_back({{"zeta", io::to_json(z.zeta.value())},
                    {"multiplicity", z.multiplicity},
                    {"truncations", z.truncations},
                    {"partial_sums", reals(z.partial_sums)},
                    {"classification", to_string(z.classification)}});
    t.headers.push_back("sum_truncation_" + std::to_string(t.headers.size() / 2));
    t.headers.push_back("partial_sum_" + std::to_string(t.headers.size() / 2 - 1));
    t.columns.push_back(as_doubles(z.truncations));
    t.columns.push_back(z.partial_sums);
  }
  r["sums"] = sums;
  return {r, t};
}

Output cmd_carleson(const Args& a) {
  const DiskSequence seq = load_sequence(a.seq);
  const CarlesonReport c = carleson_delta(seq);
  const auto sizes = dyadic_sizes(seq.size(), 2);
  const auto curve = carleson_delta_curve(seq, sizes);
  Json r = start("carleson");
  r["delta"] = io::real(c.delta);
  r["separation"] = io::real(c.separation);
  r["argmin_index"] = c.argmin_index;
  r["curve"] = {{"truncations", sizes}, {"values", reals(curve)}};
  return {r, Table{{"truncation", "delta"}, {as_doubles(sizes), curve}}};
}

Output cmd_dnorm(const Args& a) {
  check_positive(a.order, "--order");
  const AnalyticSeries f = load_function(a.f);
  const UnitCirclePoint zeta(io::parse_complex(a.zeta));
  Json r = start("dnorm");
  r["zeta"] = io::to_json(zeta.value());
  r["order"] = a.order;
  r["value"] = io::real(local_dirichlet_norm(f, zeta, a.order));
  r["quadrature"] = nullptr;
  if (a.quadrature) {
    if (!f.blaschke()) throw DomainError("--quadrature needs a Blaschke product input");
    QuadratureOptions q;
    q.max_grid = a.max_grid;
    r["quadrature"] = io::real(dirichlet_blaschke_quadrature(*f.blaschke(), zeta, a.order, q));
  }
  return {r, std::nullopt};
}

Output cmd_blaschke(const Args& a) {
  check_positive(a.derivs, "--derivs");
  const BlaschkeProduct b{load_sequence(a.seq)};
  const UnitCirclePoint zeta(io::parse_complex(a.zeta));
  const auto taylor = blaschke_taylor_at_boundary(b, zeta, a.derivs);
  std::vector<Complex> derivs;
  double fact = 1.0;
  for (int j = 0; j <= a.derivs; ++j) {
    if (j > 1) fact *= j;
    derivs.push_back(fact * taylor[j]);
  }
  std::vector<double> ac;
  for (int j = 0; j <= a.derivs; ++j) ac.push_back(ahern_clark_sum(b.zeros, zeta, j));

  const int samples = 65;
  std::vector<double> grid(samples);
  for (int i = 0; i < samples; ++i) grid[i] = static_cast<double>(i) / (samples - 1);
  Table t{{"r"}, {grid}};
  Json abs_by_order = Json::array();
  for (int j = 1; j <= a.derivs; ++j) {
    const auto vals = blaschke_radial_derivatives(b, zeta, j, grid);
    std::vector<double> mags;
    for (const Complex& v : vals) mags.push_back(std::abs(v));
    abs_by_order.push_back(reals(mags));
    t.headers.push_back("abs_d" + std::to_string(j));
    t.columns.push_back(mags);
  }
  Json r = start("blaschke");
  r["zeta"] = io::to_json(zeta.value());
  r["zero_count"] = b.zeros.size();
  r["derivatives"] = io::to_json(derivs);
  r["ahern_clark"] = reals(ac);
  r["radial"] = {{"r", grid}, {"abs_derivative", abs_by_order}};
  return {r, t};
}

Output cmd_gram(const Args& a) {
  const RationalPair pair = load_pair(a.pair);
  const DiskSequence seq = load_sequence(a.seq);
  auto sizes = a.truncations.empty() ? dyadic_sizes(seq.size(), 2) : a.truncations;
  std::vector<double> mins;
  for (std::size_t n : sizes) {
    if (n < 1 || n > seq.size()) throw DomainError("--truncations must lie in [1, sequence length]");
    mins.push_back(gram(pair, seq.truncated(n)).min_eig);
  }
  const GramReport g = gram(pair, seq);
  Json r = start("gram");
  r["size"] = seq.size();
  r["min_eig"] = io::real(g.min_eig);
  r["max_eig"] = io::real(g.max_eig);
  r["curve"] = {{"truncations", sizes}, {"min_eig", reals(mins)}};
  return {r, Table{{"truncation", "min_eig"}, {as_doubles(sizes), mins}}};
}

Output cmd_np_solve(const Args& a) {
  const Json j = io::read_json_file(a.nodes);
  const DiskSequence nodes = io::sequence_from_json(j);
  if (!j.contains("targets")) throw DomainError("json: missing key 'targets'");
  const auto targets = io::complex_list_from_json(j["targets"]);
  const PickBound pb = np_bound(nodes, targets);
  double resid = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) resid = std::max(resid, std::abs(pb.chain(nodes[i].value()) - targets[i]));
  Json r = start("np-solve");
  r["t_star"] = io::real(pb.t_star);
  r["inflation"] = io::real(pb.inflation);
  r["boundary_sup"] = io::real(pb.boundary_sup);
  r["schur"] = {{"nodes", io::to_json(pb.chain.nodes())},
                {"params", io::to_json(pb.chain.params())},
                {"scale", io::real(pb.chain.scale())}};
  r["max_value_residual"] = io::real(resid);
  // The expanded form is ill-conditioned for clustered nodes; it is reported
  // when it reproduces the targets as well as the chain does.
  r["f"] = nullptr;
  try {
    const RationalFn f = pb.chain.to_rational();
    double fres = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) fres = std::max(fres, std::abs(f(nodes[i].value()) - targets[i]));
    if (fres <= 1e-8 * std::max(1.0, pb.t_star)) r["f"] = io::to_json(f);
  } catch (const DomainError&) {
  }
  return {r, std::nullopt};
}

Output cmd_construct(const Args& a) {
  const RationalPair pair = load_pair(a.pair);
  const DiskSequence seq = load_sequence(a.seq);
  Json vj = io::read_json_file(a.values);
  if (vj.is_object() && vj.contains("values")) vj = vj["values"];
  const auto values = io::complex_list_from_json(vj);
  const InterpolantCertificate c = construct_multiplier(pair, seq, values);
  const HbNorm norm = hb_norm(c.decomposition);
  Json r = start("construct");
  r["F"] = io::to_json(c.F);
  r["boundary_sup"] = io::real(c.boundary_sup);
  r["value_residuals"] = reals(c.value_residuals);
  r["lambda0_count"] = c.lambda0_count;
  r["lambda1_count"] = c.lambda1_count;
  r["decomposition"] = {{"p", io::to_json(c.decomposition.p)},
                        {"a0", io::to_json(c.decomposition.a0)},
                        {"g_coefficient_count", c.decomposition.g.coeffs().size()},
                        {"g_h2_norm", io::real(c.decomposition.g.h2_norm())},
                        {"g_tail_bound", io::real(c.decomposition.g.tail_bound())},
                        {"hb_norm", io::real(norm.value)},
                        {"hb_norm_error", io::real(norm.error)}};
  return {r, std::nullopt};
}

Output cmd_add_point(const Args& a) {
  const RationalPair pair = load_pair(a.pair);
  const RationalFn F = load_rational(a.F);
  const BlaschkeProduct b{load_sequence(a.zeros)};
  const UnitDiskPoint lambda(io::parse_complex(a.lambda));
  const Complex v = io::parse_complex(a.value);
  const RationalFn g = add_point(F, pair, b, lambda, v);
  const Complex at = g(lambda.value());
  Json r = start("add-point");
  r["F"] = io::to_json(g);
  r["value_at_lambda"] = io::to_json(at);
  r["residual"] = io::real(std::abs(at - v));
  return {r, std::nullopt};
}

Output cmd_simulate(const Args& a) {
  check_positive(a.m, "--M");
  const RadiiFamily fam = load_family(a.family, a.truncate);
  ZeroOneOptions opts;
  opts.zeta_angle = a.zeta_angle;
  opts.threads = a.threads;
  const ZeroOneReport z = zero_one_experiment(fam, a.m, a.trials, a.truncate, a.threshold, a.seed, opts);
  Json r = start("simulate");
  r["family"] = io::to_json(fam);
  r["M"] = a.m;
  r["trials"] = z.trials;
  r["seed"] = a.seed;
  r["threshold"] = io::real(z.threshold);
  r["zeta_angle"] = io::real(a.zeta_angle);
  r["truncations"] = z.truncations;
  r["exceedance_fraction"] = reals(z.exceedance_fraction);
  r["median_sum"] = reals(z.median_sum);
  r["median_change"] = io::real(z.median_change);
  r["classification"] = to_string(z.classification);
  return {r, Table{{"truncation", "exceedance_fraction", "median_sum"},
                   {as_doubles(z.truncations), z.exceedance_fraction, z.median_sum}}};
}

Output cmd_three_series(const Args& a) {
  check_positive(a.m, "--M");
  const RadiiFamily fam = load_family(a.family, a.count);
  const ThreeSeriesReport t = three_series(fam, a.m);
  Json r = start("three-series");
  r["family"] = io::to_json(fam);
  r["M"] = a.m;
  r["classification"] = to_string(t.classification);
  r["truncations"] = t.truncations;
  r["sum_prob"] = reals(t.sum_prob);
  r["sum_mean"] = reals(t.sum_mean);
  r["sum_var"] = reals(t.sum_var);
  r["prob_exceed"] = reals(t.prob_exceed);
  r["mean_truncated"] = reals(t.mean_truncated);
  r["var_truncated"] = reals(t.var_truncated);
  std::vector<double> n(t.prob_exceed.size());
  for (std::size_t i = 0; i < n.size(); ++i) n[i] = static_cast<double>(i + 1);
  return {r, Table{{"n", "prob_exceed", "mean_truncated", "var_truncated"},
                   {n, t.prob_exceed, t.mean_truncated, t.var_truncated}}};
}

Output cmd_dyadic(const Args& a) {
  check_positive(a.m, "--M");
  const RadiiFamily fam = load_family(a.family, a.count);
  const DyadicReport d = dyadic_counts(fam, a.m);
  Json r = start("dyadic");
  r["family"] = io::to_json(fam);
  r["M"] = a.m;
  r["annulus"] = "A_k = {1 - 2^-k <= |z| < 1 - 2^-(k+1)}";
  Json counts = Json::array();
  std::vector<double> ks, ns;
  for (const auto& [k, n] : d.counts) {
    counts.push_back({{"k", k}, {"N", n}});
    ks.push_back(k);
    ns.push_back(static_cast<double>(n));
  }
  r["counts"] = counts;
  r["carleson_sum"] = io::real(d.carleson_sum);
  r["random_sum"] = io::real(d.random_sum);
  return {r, Table{{"k", "N_k"}, {ks, ns}}};
}

void emit(const Output& o, const Args& a) {
  std::string text;
  if (a.format == "csv") {
    if (!o.table) throw DomainError("this subcommand has no CSV form; use --format json");
    text = render_csv(*o.table);
  } else {
    text = o.report.dump(2) + "\n";
  }
  if (a.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(a.out, std::ios::binary);
  if (!f) throw DomainError("cannot open '" + a.out + "' for writing");
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Interpolating sequences in de Branges-Rovnyak spaces H(b) for rational b.",
               "hbtool"};
  app.footer("Report schema version " + std::to_string(kReportVersion) +
             ". Exit codes: 0 ok, 2 input error, 3 non-convergence.");
  app.set_version_flag("--version", "hbtool 1.0 (report schema v" + std::to_string(kReportVersion) + ")");
  app.require_subcommand(1, 1);

  Args a;
  std::function<Output(const Args&)> handler;

  auto common = [&](CLI::App* sub, std::function<Output(const Args&)> h) {
    sub->add_option("--out", a.out, "Output path (default: standard output)");
    sub->add_option("--format", a.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->callback([&handler, h] { handler = h; });
  };

  auto* mate = app.add_subcommand("mate", "Pythagorean mate a of a rational b");
  mate->add_option("--b", a.b, "b as JSON rational {num, den} or polynomial")->required();
  mate->add_option("--grid", a.grid, "Circle grid for checks")->check(CLI::Range(16, 1 << 22));
  common(mate, cmd_mate);

  auto* verify = app.add_subcommand("verify-pair", "Check |a|^2 + |b|^2 = 1, outerness and a(0) > 0");
  verify->add_option("--pair", a.pair, "Pair JSON (or a mate report)")->required();
  verify->add_option("--grid", a.grid, "Circle grid for checks")->check(CLI::Range(16, 1 << 22));
  common(verify, cmd_verify_pair);

  auto* dec = app.add_subcommand("decide", "Carleson and boundary-sum diagnostics with a verdict");
  dec->add_option("--pair", a.pair, "Pair JSON")->required();
  dec->add_option("--seq", a.seq, "Sequence JSON")->required();
  common(dec, cmd_decide);

  auto* carl = app.add_subcommand("carleson", "Carleson constant and its truncation curve");
  carl->add_option("--seq", a.seq, "Sequence JSON")->required();
  common(carl, cmd_carleson);

  auto* dn = app.add_subcommand("dnorm", "Local Dirichlet energy D_zeta^N(f)");
  dn->add_option("--f", a.f, "Function JSON: polynomial, rational or {\"blaschke\": sequence}")->required();
  dn->add_option("--zeta", a.zeta, "Boundary point re[,im]");
  dn->add_option("--order", a.order, "N")->required();
  dn->add_flag("--quadrature", a.quadrature, "Also evaluate by circle quadrature (Blaschke inputs)");
  dn->add_option("--max-grid", a.max_grid, "Largest quadrature grid before giving up")->check(CLI::Range(256, 1 << 24));
  common(dn, cmd_dnorm);

  auto* bl = app.add_subcommand("blaschke", "Boundary derivatives of a finite Blaschke product");
  bl->add_option("--seq", a.seq, "Zeros as sequence JSON")->required();
  bl->add_option("--zeta", a.zeta, "Boundary point re[,im]");
  bl->add_option("--derivs", a.derivs, "Highest derivative order");
  common(bl, cmd_blaschke);

  auto* gr = app.add_subcommand("gram", "Normalized kernel Gram matrix eigenvalue bounds");
  gr->add_option("--pair", a.pair, "Pair JSON")->required();
  gr->add_option("--seq", a.seq, "Sequence JSON")->required();
  gr->add_option("--truncations", a.truncations, "Prefix lengths for the min_eig curve")->delimiter(',');
  common(gr, cmd_gram);

  auto* np = app.add_subcommand("np-solve", "Minimal-norm Nevanlinna-Pick interpolation");
  np->add_option("--nodes", a.nodes, "JSON {\"points\": [...], \"targets\": [...]}")->required();
  common(np, cmd_np_solve);

  auto* con = app.add_subcommand("construct", "Multiplier interpolant with membership certificate");
  con->add_option("--pair", a.pair, "Pair JSON")->required();
  con->add_option("--seq", a.seq, "Sequence JSON")->required();
  con->add_option("--values", a.values, "Target values JSON array")->required();
  common(con, cmd_construct);

  auto* ap = app.add_subcommand("add-point", "Extend an interpolant by one node");
  ap->add_option("--pair", a.pair, "Pair JSON")->required();
  ap->add_option("--F", a.F, "Interpolant JSON rational (or a construct report)")->required();
  ap->add_option("--zeros", a.zeros, "Existing nodes as sequence JSON")->required();
  ap->add_option("--lambda", a.lambda, "New node re[,im]")->required();
  ap->add_option("--value", a.value, "Target value re[,im]")->required();
  common(ap, cmd_add_point);

  auto* sim = app.add_subcommand("simulate", "Zero-one law experiment on Steinhaus sequences");
  sim->add_option("--family", a.family, "power:c=..,beta=.. | geometric:c=..,q=.. | JSON")->required();
  sim->add_option("--M", a.m, "Exponent M");
  sim->add_option("--trials", a.trials, "Number of trials")->check(CLI::PositiveNumber);
  sim->add_option("--truncate", a.truncate, "Truncation T")->check(CLI::PositiveNumber);
  sim->add_option("--seed", a.seed, "Master seed");
  sim->add_option("--threshold", a.threshold, "Exceedance threshold for trial sums");
  sim->add_option("--zeta-angle", a.zeta_angle, "Argument of the boundary point");
  sim->add_option("--threads", a.threads, "Worker threads (0: HB_THREADS or hardware)");
  common(sim, cmd_simulate);

  auto* ts = app.add_subcommand("three-series", "Three-series diagnostics for a radii family");
  ts->add_option("--family", a.family, "Radii family")->required();
  ts->add_option("--M", a.m, "Exponent M");
  ts->add_option("--count", a.count, "Family length when the spec gives none")->check(CLI::PositiveNumber);
  common(ts, cmd_three_series);

  auto* dy = app.add_subcommand("dyadic", "Dyadic annulus counts N_k and their sums");
  dy->add_option("--family", a.family, "Radii family")->required();
  dy->add_option("--M", a.m, "Exponent M");
  dy->add_option("--count", a.count, "Family length when the spec gives none")->check(CLI::PositiveNumber);
  common(dy, cmd_dyadic);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    emit(handler(a), a);
    return 0;
  } catch (const NonConvergenceError& e) {
    std::cerr << "hbtool: non-convergence: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "hbtool: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hbtool: internal error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace hbinterp::cli
