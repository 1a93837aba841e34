// qrg: command-line front end for the quantum Riemannian geometry library.
//
// Structured results are JSON, scans are CSV. Every output carries the run
// metadata (mode, tolerance, seed, version) so that a file identifies the run
// that produced it. Identical arguments give byte-identical output.

#include "qrg/io.hpp"
#include "qrg/qrg.hpp"
#include "qrg/reference.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qrg;
using io::json;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;
constexpr int kExitMath = 3;

struct Common {
  std::string mode = "float";
  double tol = kDefaultTol;
  std::uint64_t seed = 1;
  std::string output;

  bool exact() const { return mode == "exact"; }
};

struct Geometry {
  std::string lattice = "a";
  int n = 3;
  int s = 1;
  std::vector<std::string> h;
  bool random_h = false;

  Lattice make() const { return lattice == "a" ? Lattice::An(n) : Lattice::HalfLine(n); }
};

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

json metadata(const Common& c) {
  return {{"mode", c.mode},
          {"tol", c.tol},
          {"seed", c.seed},
          {"version", kVersion},
          {"pairing", "direct"},
          {"mu", "mu_i = h_i, mu_n = h_{n-1}"},
          {"correlator", kCorrelatorNormalization}};
}

void write(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.output);
  if (!f) throw InputError("cannot open " + c.output);
  f << text;
}

void emit(const Common& c, json body) {
  json out = {{"meta", metadata(c)}};
  for (auto& [k, v] : body.items()) out[k] = std::move(v);
  write(c, out.dump(2) + "\n");
}

std::string csv_header(const Common& c) {
  std::ostringstream os;
  os << "# mode=" << c.mode << " tol=" << io::csv_number(c.tol) << " seed=" << c.seed << " version=" << kVersion << "\n";
  return os.str();
}

template <class F>
F parse_value(const std::string& text) {
  auto x = Scalar::parse(text);
  if constexpr (std::is_same_v<F, Rational>) {
    if (x.mode() != Mode::Exact) throw InputError("exact mode needs rational input, got " + text);
    return x.rational();
  } else {
    return x.to_double();
  }
}

/// Edge weights from --weights, a seeded draw of p/q with p, q in [1, 1000], or all ones.
template <class F>
std::vector<F> edge_weights(const Geometry& geo, const Common& c) {
  const int count = geo.n - 1;
  std::vector<F> h;
  if (geo.random_h) {
    std::mt19937_64 rng(c.seed);
    std::uniform_int_distribution<int> d(1, 1000);
    for (int i = 0; i < count; ++i) {
      Rational r(d(rng), d(rng));
      if constexpr (std::is_same_v<F, Rational>)
        h.push_back(r);
      else
        h.push_back(static_cast<double>(r));
    }
  } else if (!geo.h.empty()) {
    if (static_cast<int>(geo.h.size()) != count)
      throw InputError("--weights needs " + std::to_string(count) + " values, got " + std::to_string(geo.h.size()));
    for (const auto& t : geo.h) h.push_back(parse_value<F>(t));
  } else {
    h.assign(count, ratio<F>(1));
  }
  return h;
}

/// Largest coefficient away from the cut end, exact when F is.
template <class F>
json bulk_residual(const Lattice& lat, const TensorElement<F>& t) {
  if constexpr (std::is_same_v<F, Rational>) {
    Rational m = 0;
    for (const auto& [p, k] : t.terms())
      if (!lat.half_line() || !p.visits(lat.N)) m = std::max(m, k < 0 ? Rational(-k) : k);
    return io::value(m);
  } else {
    return io::value(bulk_norm(lat, t));
  }
}

void add_geometry(CLI::App* sub, Geometry& geo) {
  sub->add_option("--lattice", geo.lattice, "a (finite A_n) or n (truncated half-line)")
      ->check(CLI::IsMember({"a", "n"}))
      ->capture_default_str();
  sub->add_option("-n,--nodes", geo.n, "number of nodes")->check(CLI::Range(2, 100000))->capture_default_str();
  sub->add_option("-s,--sign", geo.s, "sign s of the connection")->check(CLI::IsMember({-1, 1}))->capture_default_str();
  sub->add_option("-w,--weights", geo.h, "edge weights h_1..h_{n-1} (p/q or decimals)")->delimiter(',');
  sub->add_flag("--random-h", geo.random_h, "draw h from the seeded generator");
}

// ---------------------------------------------------------------------------
// geometry commands

template <class F>
json solve_body(const Geometry& geo, const Common& c) {
  auto lat = geo.make();
  auto [g, conn] = canonical_connection(lat, edge_weights<F>(geo, c), geo.s);
  json body = {{"lattice", lat.name()}, {"metric", io::metric(g)}, {"connection", io::connection(conn)}};
  if (!lat.half_line()) {
    json rows = json::array();
    for (const auto& a : admissible_phi1(lat.N, c.tol))
      rows.push_back({{"j", a.j}, {"phi1", a.phi1}, {"phi", a.phi}, {"canonical", a.canonical}});
    body["admissible_phi1"] = rows;
  }
  return body;
}

struct Perturb {
  int index = 0;
  std::string delta = "0";
};

template <class F>
json verify_body(const Geometry& geo, const Common& c, const Perturb& pert) {
  auto lat = geo.make();
  auto [g, conn] = canonical_connection(lat, edge_weights<F>(geo, c), geo.s);
  if (pert.index != 0) {
    if (pert.index < 1 || pert.index > lat.N - 1) throw InputError("--perturb-tau index out of range");
    conn.tau[pert.index - 1] += parse_value<F>(pert.delta);
  }
  json torsion_max = io::value(ratio<F>(0));
  double torsion_d = -1;
  for (const auto& [a, r] : check_torsion(lat, conn)) {
    double v = bulk_norm(lat, r);
    if (v > torsion_d) {
      torsion_d = v;
      torsion_max = bulk_residual(lat, r);
    }
  }
  json star_max = io::value(ratio<F>(0));
  double star_d = -1;
  for (const auto& a : arrows(lat)) {
    auto w = TensorElement<F>::basis(Degree::One, a);
    TensorElement<F> r = nabla(lat, conn, star(w)) - braiding(lat, conn, star(nabla(lat, conn, w)));
    double v = bulk_norm(lat, r);
    if (v > star_d) {
      star_d = v;
      star_max = bulk_residual(lat, r);
    }
  }
  double riemann_diff = 0;
  auto closed = riemann_closed_form(lat, conn);
  for (const auto& [a, t] : riemann_all(lat, conn))
    riemann_diff = std::max(riemann_diff, bulk_norm(lat, TensorElement<F>(t - closed.at(a))));
  auto box = laplacian(lat, g, conn).composite;
  auto oracle = laplacian_oracle(lat, g, conn);
  double lap_diff = 0;
  const int rows = lat.half_line() ? lat.N - 1 : lat.N;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < lat.N; ++j) lap_diff = std::max(lap_diff, std::abs(to_double(F(box(i, j) - oracle(i, j)))));
  json r = {{"metric_compatibility", bulk_residual(lat, check_metric_compat(lat, g, conn))},
            {"torsion", torsion_max},
            {"star", star_max},
            {"riemann_closed_form_vs_oracle", riemann_diff},
            {"laplacian_vs_oracle", lap_diff}};
  const bool ok = std::max({bulk_norm(lat, check_metric_compat(lat, g, conn)), torsion_d, star_d}) < c.tol;
  return {{"lattice", lat.name()}, {"perturbed_tau", pert.index}, {"residuals", r}, {"qlc", ok}};
}

template <class F>
json curvature_body(const Geometry& geo, const Common& c, bool oracle, const std::string& pairing) {
  auto lat = geo.make();
  auto [g, conn] = canonical_connection(lat, edge_weights<F>(geo, c), geo.s);
  auto conv = pairing == "strict" ? PairingConvention::Strict : PairingConvention::Direct;
  auto ric = ricci(lat, g, conn, conv);
  json body = {{"lattice", lat.name()},
               {"riemann", io::per_arrow(oracle ? riemann_all(lat, conn) : riemann_closed_form(lat, conn))},
               {"ricci", io::tensor(ric)},
               {"scalar", io::values(oracle || conv == PairingConvention::Strict ? ricci_scalar(lat, g, ric, conv)
                                                                                 : ricci_scalar_local(lat, g, conn))}};
  body["pairing_convention"] = pairing;
  return body;
}

template <class F>
json flat_body(const Geometry& geo, const Common& c, const std::string& h1) {
  auto lat = geo.make();
  auto fm = flat_metric(lat, geo.s, parse_value<F>(h1), c.tol);
  json body = {{"lattice", lat.name()}, {"h", io::values(fm.h)}, {"scalar", io::values(fm.scalar)}, {"residual", fm.residual}};
  if (lat.N >= 3 && !lat.half_line()) body["h2_over_h1"] = to_double(fm.h[1]) / to_double(fm.h[0]);
  return body;
}

template <class F>
json laplacian_body(const Geometry& geo, const Common& c) {
  auto lat = geo.make();
  auto [g, conn] = canonical_connection(lat, edge_weights<F>(geo, c), geo.s);
  auto lap = laplacian(lat, g, conn);
  return {{"lattice", lat.name()},
          {"L", io::matrix(lap.L)},
          {"beta_inv", io::values(lap.beta_inv)},
          {"box", io::matrix(lap.composite)},
          {"det_L", io::value(determinant(lap.L))}};
}

template <class F>
json qft_body(const Geometry& geo, const Common& c, const std::string& m2, const std::vector<std::string>& mu_text) {
  auto lat = geo.make();
  auto [g, conn] = canonical_connection(lat, edge_weights<F>(geo, c), geo.s);
  std::vector<F> mu;
  for (const auto& t : mu_text) mu.push_back(parse_value<F>(t));
  if (mu.empty()) mu = default_mu(g);
  auto B = action_matrix(laplacian(lat, g, conn), ActionSpec<F>{mu, parse_value<F>(m2)});
  json body = {{"lattice", lat.name()}, {"mu", io::values(mu)}, {"B", io::matrix(B)}, {"det_B", io::value(determinant(B))}};
  try {
    body["correlator"] = io::matrix(inverse(B, c.tol));
  } catch (const SingularAction&) {
    body["correlator"] = nullptr;
  }
  return body;
}

template <class Fn>
json dispatch(const Common& c, Fn&& fn) {
  return c.exact() ? fn(Rational{}) : fn(double{});
}

// ---------------------------------------------------------------------------
// conformal scan and march

/// psi(x) = sum a_k x^k with its first two derivatives.
struct Polynomial {
  std::vector<double> a;
  double operator()(double x, int deriv) const {
    double s = 0, p = 1;
    for (std::size_t k = deriv; k < a.size(); ++k) {
      double f = 1;
      for (int j = 0; j < deriv; ++j) f *= static_cast<double>(k - j);
      s += f * a[k] * p;
      p *= x;
    }
    return s;
  }
};

std::string conformal_csv(const Common& c, const Polynomial& psi, double eps, double x_max, int s) {
  auto rows = conformal_scalar_scan([&](double x) { return psi(x, 0); }, [&](double x) { return psi(x, 1); },
                                    [&](double x) { return psi(x, 2); }, eps, x_max, s);
  std::ostringstream os;
  os << csv_header(c) << "i,x,discrete,continuum,observed\n";
  for (const auto& r : rows)
    os << r.i << "," << io::csv_number(r.x) << "," << io::csv_number(r.discrete) << "," << io::csv_number(r.continuum)
       << "," << io::csv_number(r.observed) << "\n";
  return os.str();
}

std::string march_csv(const Common& c, double mE, double eps, double x_max, const std::string& metric, int s) {
  const auto kind = metric == "flat" ? MarchMetric::Flat : MarchMetric::Constant;
  const int N = static_cast<int>(x_max / eps) + 2;
  auto m = schrodinger_march(mE, eps, N, kind, s);
  auto ref = airy_reference(kind == MarchMetric::Flat ? ReferenceEquation::Airy : ReferenceEquation::ConstantH, mE, m.x,
                            1.0, 0.0, 0.0, 0.0, std::min(c.tol, 1e-10));
  std::ostringstream os;
  os << csv_header(c) << "# metric=" << to_string(kind) << " mE=" << io::csv_number(mE) << " eps=" << io::csv_number(eps)
     << "\n"
     << "i,x,f,reference\n";
  for (std::size_t k = 0; k < m.x.size(); ++k)
    os << k + 1 << "," << io::csv_number(m.x[k]) << "," << io::csv_number(m.f[k]) << "," << io::csv_number(ref[k]) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// gravity

json gravity_body(double cc, const std::vector<double>& Gs, double cutoff, bool truncate,
                  const std::vector<int>& moments, double quad_tol) {
  json rows = json::array();
  for (double G : Gs) {
    GravityModel M{cc, G, cutoff, truncate};
    json row = {{"G", G}};
    json ms = json::array();
    for (int m : moments) {
      auto r = rho_moment(M, m, quad_tol);
      json e = {{"m", m}, {"value", r.value}};
      if (r.bessel) e["bessel"] = *r.bessel;
      ms.push_back(e);
    }
    row["moments"] = ms;
    auto u = relative_uncertainty(M, {G}, quad_tol)[0];
    row["ratio"] = u.ratio;
    row["relative_uncertainty"] = u.relative;
    rows.push_back(row);
  }
  return {{"model", {{"c", cc}, {"cutoff", cutoff}, {"truncate_rho_lt_1", truncate}, {"quad_tol", quad_tol}}},
          {"rows", rows}};
}

// ---------------------------------------------------------------------------
// reproduce-paper

struct Report {
  json checks = json::array();
  int failed = 0;

  void add(const std::string& name, bool required, bool pass, json expected, json computed) {
    checks.push_back({{"check", name},
                      {"required", required},
                      {"status", pass ? "PASS" : "FAIL"},
                      {"expected", std::move(expected)},
                      {"computed", std::move(computed)}});
    if (required && !pass) ++failed;
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

Report reproduce(const Common& c) {
  Report rep;
  const double tol = c.tol;

  for (const auto& row : reference::phi_table()) {
    std::vector<double> best;
    bool found = false;
    for (const auto& cand : admissible_phi1(row.n, tol)) {
      bool ok = cand.phi.size() >= row.phi.size();
      for (std::size_t k = 0; ok && k < row.phi.size(); ++k) ok = std::abs(cand.phi[k] - row.phi[k]) < tol;
      if (ok) {
        found = true;
        best = cand.phi;
      }
    }
    rep.add("phi row " + row.label, row.regular, found, row.phi, found ? json(best) : json(nullptr));
  }

  for (const auto& row : reference::tau_table()) {
    const int n = row.n;
    auto [g, conn] = canonical_connection<double>(Lattice::An(n), std::vector<double>(n - 1, 1.0), 1);
    std::vector<double> tau = conn.tau;
    tau.push_back((n - 1) % 2 == 0 ? 1.0 : -1.0);
    double err = 0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(tau[i] - row.tau[i]));
    rep.add("tau row n=" + std::to_string(n), true, err < tol, row.tau, tau);
  }

  {
    auto fm = flat_metric(Lattice::An(3), 1, 1.0, tol);
    double ratio = fm.h[1] / fm.h[0];
    rep.add("A_3 flat ratio h2/h1", true, std::abs(ratio - reference::kA3FlatRatio) < 1e-12, reference::kA3FlatRatio, ratio);
  }

  for (int s : {1, -1}) {
    const int N = 100;
    auto lat = Lattice::HalfLine(N);
    auto [g, conn] = canonical_connection(lat, flat_metric_closed_form<double>(N, s, 1.0), s);
    auto S = ricci_scalar_local(lat, g, conn);
    double worst = 0;
    for (int v = 1; v <= N; ++v)
      if (!lat.truncated(v)) worst = std::max(worst, std::abs(S[v - 1]));
    rep.add("half-line flat metric s=" + std::to_string(s), true, worst < 1e-12, 0.0, worst);
  }

  {
    std::array<double, 3> printed = reference::a3_scalar(1.0, 2.0);
    auto [g, conn] = canonical_connection<double>(Lattice::An(3), {1.0, 2.0}, 1);
    auto S = ricci_scalar(Lattice::An(3), g, conn);
    rep.add("A_3 scalar curvature, h=(1,2)", true, rel(S[0], printed[0]) < 1e-10 && std::abs(S[1]) < 1e-12 &&
                                                       rel(S[2], printed[2]) < 1e-10,
            printed, S);
  }

  {
    auto lat = Lattice::An(3);
    json want = json::array(), got = json::array(), want_mixed = json::array(), got_mixed = json::array();
    bool ok = true, ok_mixed = true;
    for (double rho : {0.5, 2.0, 5.0}) {
      auto [g, conn] = canonical_connection<double>(lat, {1.0, rho}, 1);
      double S = eh_action(lat, g, conn, std::vector<double>{1.0, 0.0, rho});
      double Sm = eh_action(lat, g, conn, std::vector<double>{1.0 - rho, 0.0, 1.0 + rho});
      want.push_back(reference::a3_eh_action(rho));
      got.push_back(S);
      want_mixed.push_back(reference::a3_eh_action_mixed(rho));
      got_mixed.push_back(Sm);
      ok = ok && std::abs(S - reference::a3_eh_action(rho)) < 1e-10;
      ok_mixed = ok_mixed && std::abs(Sm - reference::a3_eh_action_mixed(rho)) < 1e-10;
    }
    rep.add("A_3 EH action, mu = (h1, h2), rho = 0.5, 2, 5", true, ok, want, got);
    rep.add("A_3 EH action, mu = (h1 - h2, h1 + h2), rho = 0.5, 2, 5", true, ok_mixed, want_mixed, got_mixed);
  }

  for (int n = 3; n <= 12; ++n) {
    auto d = det_L(n, 1);
    rep.add("det L n=" + std::to_string(n), true, rel(d.closed_form, d.direct) < 1e-10, d.closed_form,
            {{"det", d.direct}, {"twice_leading_minor", d.minor2}});
  }

  {
    const double h1 = 0.7, h2 = 1.9, m = 1.3;
    std::array<double, 3> mu{1.1, 0.6, 2.3};
    auto lat = Lattice::An(3);
    auto [g, conn] = canonical_connection<double>(lat, {h1, h2}, 1);
    auto B = action_matrix(laplacian(lat, g, conn), ActionSpec<double>{{mu[0], mu[1], mu[2]}, m * m});
    auto P = reference::a3_action_matrix(h1, h2, m, mu);
    double err = (B - P).max_abs() / std::max(B.max_abs(), P.max_abs());
    rep.add("A_3 action matrix", true, err < 1e-10, io::matrix(P), io::matrix(B));
    auto [gc, cc] = canonical_connection<double>(lat, {h1, h1}, 1);
    double det = determinant(action_matrix(laplacian(lat, gc, cc), ActionSpec<double>{{mu[0], mu[1], mu[2]}, m * m}));
    double want = reference::a3_det_constant(h1, m, mu);
    rep.add("A_3 det B, constant h", true, rel(det, want) < 1e-10, want, det);
  }

  {
    const double mE = 0.25;
    std::vector<double> devs;
    for (double eps : {0.1, 0.05, 0.025}) {
      const int N = static_cast<int>(2.0 / eps) + 2;
      auto m = schrodinger_march(mE, eps, N, MarchMetric::Flat);
      std::vector<double> xs, fs;
      for (int i = 2; i <= N; i += 2)
        if (m.x[i - 1] >= 0.5 - 1e-12 && m.x[i - 1] <= 2 + 1e-12) {
          xs.push_back(m.x[i - 1]);
          fs.push_back(m.f[i - 1]);
        }
      auto ref = airy_reference(ReferenceEquation::Airy, mE, xs, 1.0, 0.0);
      double d = 0;
      for (std::size_t k = 0; k < xs.size(); ++k) d = std::max(d, std::abs(ref[k] - fs[k]));
      devs.push_back(d);
    }
    rep.add("Airy convergence (even sites)", true, devs[1] < devs[0] && devs[2] < devs[1], "strictly decreasing", devs);
  }

  {
    GravityModel M{-2, 0.01};
    double m1 = rho_moment(M, 1).value, m2 = rho_moment(M, 2).value;
    rep.add("gravity G=0.01 moments", true,
            std::abs(m1 / std::sqrt(2.0) - 1) < 0.02 && std::abs(m2 / 2 - 1) < 0.02, json::array({std::sqrt(2.0), 2.0}),
            json::array({m1, m2}));
    double ratio = relative_uncertainty({-2, 1}, {100})[0].ratio;
    rep.add("gravity G=100 ratio", true, std::abs(ratio / 2 - 1) < 0.05, 2.0, ratio);
  }
  return rep;
}

int run(int argc, char** argv) {
  CLI::App app{"Quantum Riemannian geometry of finite and half-infinite lattice lines"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--mode", common.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}))->capture_default_str();
  app.add_option("--tol", common.tol, "comparison tolerance")->envname("QRG_TOL")->capture_default_str();
  app.add_option("--seed", common.seed, "seed for random edge weights")->capture_default_str();
  app.add_option("-o,--output", common.output, "write to this file instead of stdout");

  std::function<void()> action;

  Geometry geo;
  auto* solve = app.add_subcommand("solve", "canonical metric and connection");
  add_geometry(solve, geo);
  solve->callback([&] {
    action = [&] { emit(common, dispatch(common, [&](auto t) { return solve_body<decltype(t)>(geo, common); })); };
  });

  Perturb pert;
  auto* verify = app.add_subcommand("verify", "QLC residuals and closed forms against the tensor oracle");
  add_geometry(verify, geo);
  verify->add_option("--perturb-tau", pert.index, "add --delta to tau_i before checking");
  verify->add_option("--delta", pert.delta, "perturbation size")->capture_default_str();
  verify->callback([&] {
    action = [&] { emit(common, dispatch(common, [&](auto t) { return verify_body<decltype(t)>(geo, common, pert); })); };
  });

  bool oracle = false;
  std::string pairing = "direct";
  auto* curv = app.add_subcommand("curvature", "Riemann, Ricci and the Ricci scalar");
  add_geometry(curv, geo);
  curv->add_flag("--oracle", oracle, "Riemann from the tensor expansion instead of the closed form");
  curv->add_option("--pairing", pairing, "direct or strict")->check(CLI::IsMember({"direct", "strict"}))->capture_default_str();
  curv->callback([&] {
    action = [&] {
      emit(common, dispatch(common, [&](auto t) { return curvature_body<decltype(t)>(geo, common, oracle, pairing); }));
    };
  });

  std::string h1 = "1";
  auto* flat = app.add_subcommand("flat-metric", "edge weights with vanishing Ricci scalar");
  add_geometry(flat, geo);
  flat->add_option("--h1", h1, "first edge weight")->capture_default_str();
  flat->callback([&] {
    action = [&] { emit(common, dispatch(common, [&](auto t) { return flat_body<decltype(t)>(geo, common, h1); })); };
  });

  Polynomial psi{{0.0, 0.0, 1.0}};
  double eps = 0.01, x_max = 2.0;
  auto* conf = app.add_subcommand("conformal-scan", "Ricci scalar of a conformally rescaled flat half-line (CSV)");
  conf->add_option("--psi", psi.a, "coefficients a_0,a_1,... of psi(x) = sum a_k x^k")->delimiter(',');
  conf->add_option("--eps", eps, "lattice spacing")->capture_default_str();
  conf->add_option("--x-max", x_max, "scan up to this x")->capture_default_str();
  conf->add_option("-s,--sign", geo.s, "sign s")->check(CLI::IsMember({-1, 1}));
  conf->callback([&] { action = [&] { write(common, conformal_csv(common, psi, eps, x_max, geo.s)); }; });

  auto* lap = app.add_subcommand("laplacian", "the Laplacian as L beta^{-1}");
  add_geometry(lap, geo);
  lap->callback([&] {
    action = [&] { emit(common, dispatch(common, [&](auto t) { return laplacian_body<decltype(t)>(geo, common); })); };
  });

  int n_min = 3, n_max = 12;
  auto* detl = app.add_subcommand("det-l", "det(L) on canonical A_n with h = 1");
  detl->add_option("--n-min", n_min)->capture_default_str();
  detl->add_option("--n-max", n_max)->capture_default_str();
  detl->add_option("-s,--sign", geo.s, "sign s")->check(CLI::IsMember({-1, 1}));
  detl->callback([&] {
    action = [&] {
      json rows = json::array();
      for (int n = n_min; n <= n_max; ++n) {
        auto d = det_L(n, geo.s);
        rows.push_back({{"n", n}, {"closed_form", d.closed_form}, {"det", d.direct}, {"twice_leading_minor", d.minor2}});
      }
      emit(common, {{"s", geo.s}, {"rows", rows}});
    };
  });

  double mE = 0.25, march_eps = 0.05;
  std::string metric = "flat";
  auto* march = app.add_subcommand("march", "Schroedinger march on the half-line against its continuum reference (CSV)");
  march->add_option("--mE", mE, "m times E")->capture_default_str();
  march->add_option("--eps", march_eps, "lattice spacing")->capture_default_str();
  march->add_option("--x-max", x_max, "march up to this x")->capture_default_str();
  march->add_option("--metric", metric, "flat or constant")->check(CLI::IsMember({"flat", "constant"}))->capture_default_str();
  march->add_option("-s,--sign", geo.s, "sign s")->check(CLI::IsMember({-1, 1}));
  march->callback([&] { action = [&] { write(common, march_csv(common, mE, march_eps, x_max, metric, geo.s)); }; });

  std::string m2 = "1";
  std::vector<std::string> mu;
  auto* qft = app.add_subcommand("qft", "Gaussian scalar field: action matrix and correlator");
  add_geometry(qft, geo);
  qft->add_option("--m2", m2, "mass squared")->capture_default_str();
  qft->add_option("--mu", mu, "vertex weights (default h_1..h_{n-1}, h_{n-1})")->delimiter(',');
  qft->callback([&] {
    action = [&] { emit(common, dispatch(common, [&](auto t) { return qft_body<decltype(t)>(geo, common, m2, mu); })); };
  });

  double gc = -2, cutoff = 0, quad_tol = kQuadTol;
  std::vector<double> Gs{0.01, 1.0, 100.0};
  std::vector<int> moments{0, 1, 2};
  bool truncate = false;
  auto* grav = app.add_subcommand("gravity", "moments <rho^m> of the three-point quantum gravity model");
  grav->add_option("--c", gc, "kernel constant")->capture_default_str();
  grav->add_flag("--c-positive", [&](std::int64_t) { gc = kernel_constant_positive(); }, "use c = 24 + 17 sqrt 2");
  grav->add_option("--G", Gs, "couplings")->delimiter(',');
  grav->add_option("--cutoff", cutoff, "lower limit of rho")->capture_default_str();
  grav->add_flag("--truncate", truncate, "integrate over rho < 1 only");
  grav->add_option("--moments", moments, "powers m")->delimiter(',');
  grav->add_option("--quad-tol", quad_tol, "relative quadrature tolerance")->capture_default_str();
  grav->callback([&] {
    action = [&] { emit(common, gravity_body(gc, Gs, cutoff, truncate, moments, quad_tol)); };
  });

  int status = 0;
  auto* repro = app.add_subcommand("reproduce-paper", "recompute the published tables and closed forms");
  repro->callback([&] {
    action = [&] {
      auto rep = reproduce(common);
      int pass = 0;
      for (const auto& ch : rep.checks) pass += ch["status"] == "PASS";
      emit(common, {{"checks", rep.checks},
                    {"summary", {{"total", rep.checks.size()}, {"pass", pass}, {"required_failures", rep.failed}}}});
      status = rep.failed ? kExitMismatch : 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  try {
    action();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMath;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
