// Acceptance suite: one line per criterion.
//
// Criteria listed in kKnownRed are expected to fail; they are still run and
// reported as FAIL. The exit status is nonzero when any other criterion fails
// or when a known-red criterion unexpectedly passes.

#include "qrg/qrg.hpp"
#include "qrg/reference.hpp"
#include "structural.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace qrg;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<void(Outcome&)> run;
};

const std::set<int> kKnownRed{5, 6};

double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// ---------------------------------------------------------------------------

void direction_table(Outcome& o) {
  int matched = 0, required = 0;
  for (const auto& row : reference::phi_table()) {
    bool found = false;
    for (const auto& cand : admissible_phi1(row.n)) {
      bool ok = cand.phi.size() >= row.phi.size();
      for (std::size_t k = 0; ok && k < row.phi.size(); ++k) ok = std::abs(cand.phi[k] - row.phi[k]) < 1e-10;
      found = found || ok;
    }
    if (row.regular) {
      ++required;
      matched += found;
      o.require(found, "row " + row.label);
    } else {
      o.detail << " " << row.label << (found ? " generated;" : " not generated;");
    }
  }
  for (int n = 2; n <= 8; ++n) {
    int canon = 0;
    for (const auto& cand : admissible_phi1(n)) canon += cand.canonical;
    o.require(canon == 1, "one all-positive solution for n=" + std::to_string(n));
  }
  o.detail << " required rows matched " << matched << "/" << required;
}

void tau_table(Outcome& o) {
  double worst = 0, sym = 0;
  for (const auto& row : reference::tau_table()) {
    const int n = row.n;
    auto lat = Lattice::An(n);
    auto [g, c] = canonical_connection<double>(lat, std::vector<double>(n - 1, 1.0), 1);
    std::vector<double> tau = c.tau;
    tau.push_back((n - 1) % 2 == 0 ? 1.0 : -1.0);
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(tau[i] - row.tau[i]));
    // tau_{n+1-i} = (-1)^{n-1} tau_i
    const double par = (n - 1) % 2 == 0 ? 1.0 : -1.0;
    for (int i = 1; i <= n; ++i) sym = std::max(sym, std::abs(tau[n - i] - par * tau[i - 1]));
  }
  o.detail << " max |tau - table| = " << worst << ", symmetry residual = " << sym;
  o.require(worst < 1e-10, "table values");
  o.require(sym < 1e-10, "odd/even symmetry");
}

void qlc_oracle(Outcome& o) {
  std::mt19937_64 rng(20240611);
  double worst = 0;
  int runs = 0;
  for (int n = 2; n <= 12; ++n)
    for (int draw = 0; draw < 20; ++draw)
      for (int s : {1, -1}) {
        auto lat = Lattice::An(n);
        auto [g, c] = canonical_connection(lat, testing::random_h(n - 1, rng), s);
        auto r = residuals(lat, g, c);
        worst = std::max({worst, r.metric, r.torsion, r.star});
        ++runs;
      }
  o.detail << " float: " << runs << " runs, max residual " << worst;
  o.require(worst < 1e-10, "float residuals");

  auto lat = Lattice::HalfLine(64);
  bool exact_zero = true;
  for (int s : {1, -1}) {
    auto [g, c] = canonical_connection(lat, testing::random_rational_h(63, rng), s);
    auto bulk = [&](const Path& p) { return !p.visits(lat.N); };
    for (const auto& [p, k] : check_metric_compat(lat, g, c).terms()) exact_zero = exact_zero && !bulk(p);
    for (const auto& [a, t] : check_torsion(lat, c))
      for (const auto& [p, k] : t.terms()) exact_zero = exact_zero && !bulk(p);
    exact_zero = exact_zero && check_star_preserving(lat, c).residual == 0.0;
  }
  o.detail << "; exact N=64: " << (exact_zero ? "all residuals identically 0" : "nonzero residual");
  o.require(exact_zero, "exact residuals");
}

void rationality(Outcome& o) {
  const int N = 100;
  auto lat = Lattice::HalfLine(N);
  std::mt19937_64 rng(7);
  long long checked = 0;
  bool all_exact = true;
  auto see = [&](const Scalar& x) {
    ++checked;
    all_exact = all_exact && x.mode() == Mode::Exact;
  };
  auto see_all = [&](const std::vector<Scalar>& v) {
    for (const auto& x : v) see(x);
  };
  for (int s : {1, -1}) {
    auto h = testing::as_exact_scalars(testing::random_rational_h(N - 1, rng));
    QuantumMetric<Scalar> g{h, phi_sequence(Scalar::exact(2), N - 1), 1};
    auto c = solve_connection(lat, g, Scalar::exact(s));
    auto [gc, cc] = canonical_connection(lat, h, s);
    o.require(c.tau == cc.tau && c.tau_p == cc.tau_p && c.sigma == cc.sigma && c.sigma_p == cc.sigma_p,
              "recursion reproduces the canonical connection");
    see_all(g.h);
    see_all(g.phi);
    see_all(c.tau);
    see_all(c.tau_p);
    see_all(c.sigma);
    see_all(c.sigma_p);
    for (const auto& [p, k] : metric_element(g).terms()) see(k);
    auto closed = riemann_closed_form(lat, c);
    for (const auto& [a, t] : riemann_all(lat, c)) {
      for (const auto& [p, k] : t.terms()) see(k);
      o.require(t == closed.at(a), "closed-form Riemann on " + a.str());
    }
    for (const auto& [p, k] : ricci(lat, g, c).terms()) see(k);
    see_all(ricci_scalar_local(lat, g, c));
    auto lap = laplacian(lat, g, c);
    see_all(lap.beta_inv);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        see(lap.L(i, j));
        see(lap.composite(i, j));
      }
  }
  o.detail << " " << checked << " coefficients inspected at N=" << N << ", "
           << (all_exact ? "all exact" : "float fallback found");
  o.require(all_exact, "exact mode throughout");
}

void det_laplacian(Outcome& o) {
  double worst = 0, worst_minor = 0, worst_zero = 0;
  for (int n = 3; n <= 12; ++n) {
    auto d = det_L(n, 1);
    worst = std::max(worst, rel_err(d.closed_form, d.direct));
    worst_minor = std::max(worst_minor, rel_err(d.closed_form, d.minor2));
    auto z = det_L(n, -1);
    auto lat = Lattice::An(n);
    auto [g, c] = canonical_connection<double>(lat, std::vector<double>(n - 1, 1.0), -1);
    double scale = std::pow(std::max(laplacian(lat, g, c).L.max_abs(), 1.0), n);
    worst_zero = std::max(worst_zero, std::abs(z.direct) / scale);
  }
  o.detail << " s=1 closed form vs det: max rel err " << worst << " (vs 2 x leading minor: " << worst_minor
           << "); s=-1 scaled |det| " << worst_zero;
  o.require(worst < 1e-10, "closed form equals determinant for s=1");
  o.require(worst_zero < 1e-12, "det vanishes for s=-1");
}

Matrix<double> a3_assembled(double h1, double h2, double m, const std::array<double, 3>& mu) {
  auto lat = Lattice::An(3);
  auto [g, c] = canonical_connection<double>(lat, {h1, h2}, 1);
  return action_matrix(laplacian(lat, g, c), ActionSpec<double>{{mu[0], mu[1], mu[2]}, m * m});
}

void det_action(Outcome& o) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.3, 3.0);
  double worst_entry = 0, worst_det = 0;
  std::string where;
  for (int t = 0; t < 5; ++t) {
    double h1 = U(rng), h2 = U(rng), m = U(rng);
    std::array<double, 3> mu{U(rng), U(rng), U(rng)};
    auto B = a3_assembled(h1, h2, m, mu);
    auto P = reference::a3_action_matrix(h1, h2, m, mu);
    const double scale = std::max(B.max_abs(), P.max_abs());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double e = std::abs(B(i, j) - P(i, j)) / scale;
        if (e > 1e-10 && where.find("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")") == std::string::npos)
          where += " (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
        worst_entry = std::max(worst_entry, e);
      }
  }
  for (int t = 0; t < 5; ++t) {
    double h1 = U(rng), m = U(rng);
    std::array<double, 3> mu{U(rng), U(rng), U(rng)};
    worst_det = std::max(worst_det, rel_err(determinant(a3_assembled(h1, h1, m, mu)), reference::a3_det_constant(h1, m, mu)));
  }
  o.detail << " B entries max rel err " << worst_entry << (where.empty() ? "" : " at" + where)
           << "; constant-h det max rel err " << worst_det;
  o.require(worst_entry < 1e-10, "entries of B");
  o.require(worst_det < 1e-10, "constant-h determinant");
}

void flat_metrics(Outcome& o) {
  const int N = 100;
  auto lat = Lattice::HalfLine(N);
  double worst_n = 0;
  for (int s : {1, -1}) {
    auto [g, c] = canonical_connection(lat, flat_metric_closed_form<double>(N, s, 1.0), s);
    auto S = ricci_scalar_local(lat, g, c);
    for (int v = 1; v <= N; ++v)
      if (!lat.truncated(v)) worst_n = std::max(worst_n, std::abs(S[v - 1]));
  }
  auto a3 = flat_metric(Lattice::An(3), 1, 1.0);
  double ratio_err = std::abs(a3.h[1] / a3.h[0] - (4 + 3 * std::sqrt(2.0)));
  double worst_a = 0;
  for (int n = 3; n <= 12; ++n) worst_a = std::max(worst_a, flat_metric(Lattice::An(n), 1, 1.0).residual);
  o.detail << " half-line max |S| " << worst_n << "; A_3 ratio error " << ratio_err << "; A_n max |S| " << worst_a;
  o.require(worst_n < 1e-12, "half-line closed forms");
  o.require(ratio_err < 1e-12, "A_3 ratio");
  o.require(worst_a < 1e-10, "A_n solver");
}

void airy_convergence(Outcome& o) {
  const double mE = 0.25;
  std::vector<double> devs;
  for (double eps : {0.1, 0.05, 0.025}) {
    int N = static_cast<int>(2.0 / eps) + 2;
    auto m = schrodinger_march(mE, eps, N, MarchMetric::Flat);
    std::vector<double> xs, fs;
    for (int i = 2; i <= N; i += 2) {
      double x = m.x[i - 1];
      if (x >= 0.5 - 1e-12 && x <= 2 + 1e-12) {
        xs.push_back(x);
        fs.push_back(m.f[i - 1]);
      }
    }
    auto ref = airy_reference(ReferenceEquation::Airy, mE, xs, 1.0, 0.0);
    devs.push_back(testing::max_diff(ref, fs));
  }
  o.detail << " even-site max deviation " << devs[0] << ", " << devs[1] << ", " << devs[2];
  o.require(devs[1] < devs[0] && devs[2] < devs[1], "strictly decreasing deviation");
}

void gravity_moments(Outcome& o) {
  GravityModel M{-2, 1};
  double zero_err = 0;
  for (double G : {0.01, 1.0, 100.0}) {
    M.G = G;
    zero_err = std::max(zero_err, std::abs(rho_moment(M, 0).value - 1));
  }
  M.G = 0.01;
  double r1 = rho_moment(M, 1).value / std::sqrt(2.0), r2 = rho_moment(M, 2).value / 2;
  M.G = 100;
  double big = relative_uncertainty(M, {100})[0].ratio;
  o.detail << " |<1>-1| " << zero_err << "; G=0.01 moments/limit " << r1 << ", " << r2 << "; G=100 ratio " << big;
  o.require(zero_err < 1e-12, "normalisation");
  o.require(std::abs(r1 - 1) < 0.02 && std::abs(r2 - 1) < 0.02, "small-G moments");
  o.require(std::abs(big / 2 - 1) < 0.05, "large-G ratio");

  GravityModel P{kernel_constant_positive(), 1};
  std::vector<double> neg, zero, pos;
  for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) {
    P.cutoff_eps = e;
    neg.push_back(rho_moment(P, -1).value);
    zero.push_back(rho_moment(P, 0).value);
    pos.push_back(rho_moment(P, 1).value);
  }
  bool up = true, down = true, one = true;
  for (std::size_t k = 1; k < neg.size(); ++k) {
    up = up && neg[k] > 5 * neg[k - 1];
    down = down && pos[k] < pos[k - 1] * 0.2;
  }
  for (double z : zero) one = one && std::abs(z - 1) < 1e-12;
  o.detail << "; cutoff 1e-1..1e-4: m=-1 " << neg.front() << " -> " << neg.back() << ", m=1 " << pos.front() << " -> "
           << pos.back();
  o.require(up && neg.back() > 1e3, "m<0 grows without bound");
  o.require(one, "m=0 stays 1");
  o.require(down && pos.back() < 1e-3, "m>0 tends to 0");
}

void structural(Outcome& o) {
  bool dims = true, d2 = true, leib = true, lift = true, assoc = true;
  for (int N = 2; N <= 12; ++N) {
    auto lat = Lattice::An(N);
    dims = dims && testing::dimensions_match(lat);
    d2 = d2 && testing::d_squared_zero(lat);
    leib = leib && testing::leibniz(lat);
    lift = lift && testing::wedge_lift_identity(lat);
    assoc = assoc && testing::bimodule_associative(lat);
  }
  o.detail << " N=2..12: dims " << dims << ", d^2=0 " << d2 << ", Leibniz " << leib << ", wedge.lift=id " << lift
           << ", associativity " << assoc;
  o.require(dims && d2 && leib && lift && assoc, "structural identities");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "direction coefficients from admissible phi_1", 1, direction_table},
      {2, "canonical tau table and symmetries", 1, tau_table},
      {3, "quantum Levi-Civita residuals (oracle)", 30, qlc_oracle},
      {4, "exact rationality on the half-line", 10, rationality},
      {5, "det(L) closed form", 1, det_laplacian},
      {6, "A_3 action matrix and det(B)", 1, det_action},
      {7, "scalar-flat metrics", 5, flat_metrics},
      {8, "Airy convergence of the march", 10, airy_convergence},
      {9, "gravity moments", 10, gravity_moments},
      {10, "structural invariants of the calculus", 1, structural},
  };

  std::ostringstream report;
  int unexpected = 0, passed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail << " [over time budget " << c.budget_s << " s]";
    }
    const bool known = kKnownRed.count(c.id) > 0;
    passed += o.pass;
    if (o.pass == known) ++unexpected;
    std::string tag = o.pass ? "PASS" : (known ? "FAIL (known)" : "FAIL");
    std::ostringstream line;
    line << std::setw(2) << c.id << "  " << std::left << std::setw(13) << tag << std::right << c.name << " ("
         << std::fixed << std::setprecision(2) << secs << " s)" << std::defaultfloat << std::setprecision(6) << ":"
         << o.detail.str() << "\n";
    std::cout << line.str() << std::flush;
    report << line.str();
  }
  std::ostringstream summary;
  summary << passed << "/" << criteria.size() << " criteria pass; known failures: 5, 6; unexpected outcomes: "
          << unexpected << "\n";
  std::cout << summary.str();
  report << summary.str();
  if (argc > 1) std::ofstream(argv[1]) << report.str();
  return unexpected == 0 ? 0 : 1;
}
