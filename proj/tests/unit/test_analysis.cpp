#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "warpcurv/analysis.hpp"
#include "warpcurv/closedform.hpp"
#include "warpcurv/errors.hpp"

using namespace warpcurv;

namespace {

constexpr double kExtremeTolH = 1e-6;
constexpr double kExtremeTolCHH = 1e-4;
constexpr double kProbeSlack = 1e-9;

const FamilySpec kCHH{FamilyKind::CH_H, 3, 3};
const FamilySpec kCHCH{FamilyKind::CH_CH, 5, 2};

std::vector<Jet2> jets(std::span<const WarpFunction> w, double r) {
  std::vector<Jet2> out;
  for (const auto& f : w) out.push_back(f.jet(r));
  return out;
}

CurvatureTensor model(const FamilySpec& s, double r = 1.0) {
  return closed_form_curvature(s, jets(model_warps(s.kind), r));
}

std::vector<double> unit(int d, int i) {
  std::vector<double> e(d, 0.0);
  e[i] = 1.0;
  return e;
}

std::vector<WarpFunction> warps(std::initializer_list<const char*> texts) {
  std::vector<WarpFunction> out;
  for (const char* t : texts) out.push_back(parse_warp(t));
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

const ObstructionQuantity& quantity(const ObstructionReport& rep, const std::string& name) {
  for (const auto& q : rep.quantities)
    if (q.name == name) return q;
  FAIL("missing quantity " << name);
  return rep.quantities.front();
}

}  // namespace

TEST_CASE("sectional curvature of coordinate planes") {
  const auto R = model({FamilyKind::H, 4, 1});
  CHECK(sectional(R, unit(4, 0), unit(4, 3)) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(sectional(R, unit(4, 1), unit(4, 1)), DomainError);
  std::vector<double> u = unit(4, 1), w = unit(4, 1);
  w[2] = 1e-8;
  CHECK_THROWS_AS(sectional(R, u, w), DomainError);
  CHECK_THROWS_AS(sectional(R, unit(3, 0), unit(3, 1)), ConfigError);
}

TEST_CASE("sectional curvature of mixed planes against the J formula") {
  const auto R = model(kCHH);
  const auto J = ch_h_structure(3).matrix();
  auto Jx = [&](const std::vector<double>& x) {
    std::vector<double> y(6, 0.0);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) y[a] += J[a * 6 + b] * x[b];
    return y;
  };
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<std::pair<std::vector<double>, std::vector<double>>> planes = {
      {{s, 0, 0, s, 0, 0}, {0, s, 0, 0, s, 0}},
      {{1, 0, 0, 0, 0, 0}, {0, s, 0, s, 0, 0}},
      {{s, 0, 0, 0, 0, s}, {0, 0, s, s, 0, 0}}};
  for (const auto& [u, w] : planes) {
    double brute = 0.0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k)
          for (int l = 0; l < 6; ++l) brute += R(i, j, k, l) * u[i] * w[j] * u[k] * w[l];
    const double c = dot(u, Jx(w));
    CHECK(brute == doctest::Approx(-1.0 - 3.0 * c * c).epsilon(1e-12));
    CHECK(sectional(R, u, w) == doctest::Approx(brute).epsilon(1e-12));
  }
  CHECK(sectional(R, planes[1].first, planes[1].second) == doctest::Approx(-2.5).epsilon(1e-12));
}

TEST_CASE("sectional curvature is invariant under basis change of the plane") {
  const auto w0 = random_admissible_warps(FamilyKind::CH_CH, 12);
  const auto R = closed_form_curvature(kCHCH, jets(w0, 0.9));
  std::mt19937_64 g(4);
  std::normal_distribution<double> n;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> u(10), w(10);
    for (auto& x : u) x = n(g);
    for (auto& x : w) x = n(g);
    const double K = sectional(R, u, w);
    const double a = 2.5, b = -0.7, c = 0.3, d = 1.9;
    std::vector<double> u2(10), w2(10);
    for (int i = 0; i < 10; ++i) {
      u2[i] = a * u[i] + b * w[i];
      w2[i] = c * u[i] + d * w[i];
    }
    CHECK(std::abs(sectional(R, u2, w2) - K) <= 1e-12 * std::max(1.0, std::abs(K)));
  }
}

TEST_CASE("extremal sectional curvature of the model spaces") {
  const auto h = extremal_sectional(model({FamilyKind::H, 5, 2}));
  CHECK(std::abs(h.min_K + 1.0) <= kExtremeTolH);
  CHECK(std::abs(h.max_K + 1.0) <= kExtremeTolH);
  const auto c = extremal_sectional(model(kCHH));
  CHECK(std::abs(c.min_K + 4.0) <= kExtremeTolCHH);
  CHECK(std::abs(c.max_K + 1.0) <= kExtremeTolCHH);
  const auto cc = extremal_sectional(model(kCHCH));
  CHECK(std::abs(cc.min_K + 4.0) <= kExtremeTolCHH);
  CHECK(std::abs(cc.max_K + 1.0) <= kExtremeTolCHH);
  CHECK_FALSE(c.kernel.empty());
  CHECK_THROWS_AS(extremal_sectional(model(kCHH), {50, 10, 1, 1, 4}), ConfigError);
}

TEST_CASE("extremes of a diagonal tensor are its extreme coordinate values") {
  const int d = 5;
  CurvatureTensor R(d);
  std::mt19937_64 g(6);
  std::uniform_real_distribution<double> u(-3.0, 2.0);
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double c = u(g);
      R.set_with_symmetries(i, j, i, j, c);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
  const auto rep = extremal_sectional(R);
  CHECK(rep.min_K == doctest::Approx(lo).epsilon(1e-12));
  CHECK(rep.max_K == doctest::Approx(hi).epsilon(1e-12));
}

TEST_CASE("extremal search is consistent, repeatable and thread independent") {
  const auto w = random_admissible_warps(FamilyKind::CH_H, 31);
  const auto R = closed_form_curvature(kCHH, jets(w, 1.1), {1.1, 1.0});
  const auto a = extremal_sectional(R);
  ExtremalOptions four;
  four.threads = 4;
  const auto b = extremal_sectional(R, four);
  CHECK(a.min_K == b.min_K);
  CHECK(a.max_K == b.max_K);
  CHECK(a.argmin.u == b.argmin.u);
  CHECK(extremal_sectional(R).max_K == a.max_K);

  std::mt19937_64 g(1234);
  std::normal_distribution<double> n;
  for (int t = 0; t < 10000; ++t) {
    std::vector<double> u(6), v(6);
    for (auto& x : u) x = n(g);
    for (auto& x : v) x = n(g);
    const double K = sectional(R, u, v);
    CHECK((K >= a.min_K - kProbeSlack && K <= a.max_K + kProbeSlack));
  }
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      CHECK(R(i, j, i, j) >= a.min_K - kProbeSlack);
      CHECK(R(i, j, i, j) <= a.max_K + kProbeSlack);
    }
  for (const Plane* p : {&a.argmin, &a.argmax}) {
    CHECK(std::abs(dot(p->u, p->u) - 1.0) <= 1e-10);
    CHECK(std::abs(dot(p->w, p->w) - 1.0) <= 1e-10);
    CHECK(std::abs(dot(p->u, p->w)) <= 1e-10);
  }
  CHECK(std::abs(sectional(R, a.argmin.u, a.argmin.w) - a.min_K) <= 1e-9);
  CHECK(std::abs(sectional(R, a.argmax.u, a.argmax.w) - a.max_K) <= 1e-9);
}

TEST_CASE("obstruction scan for cusp warps of the CH/CH family") {
  const double grid[] = {-3.0, -2.0};
  const auto rep = obstruction_scan(kCHCH, warps({"exp(r)", "exp(r)", "exp(2*r)"}), grid);
  const auto& n1 = quantity(rep, "neg-curv-1");
  CHECK(n1.values[0] == doctest::Approx(4 * std::exp(6.0) - 1.75).epsilon(1e-12));
  CHECK(rep.violation);
  CHECK(rep.violation_r == -3.0);
  CHECK_FALSE(quantity(rep, "ratio-vr-v").counts);
  REQUIRE(rep.cusp.has_value());
  CHECK(rep.cusp->ok);
}

TEST_CASE("model warps show no violation") {
  const double grid[] = {0.5, 1.0, 2.0, 3.0};
  for (const FamilySpec s : {FamilySpec{FamilyKind::H, 5, 1}, kCHH, kCHCH}) {
    const auto rep = obstruction_scan(s, model_warps(s.kind), grid, 1e-12);
    CHECK_FALSE(rep.violation);
    REQUIRE(rep.cusp.has_value());
    CHECK_FALSE(rep.cusp->ok);
  }
}

TEST_CASE("verdict is set exactly when a counted quantity exceeds the tolerance") {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(-4.0 + 0.4 * i);
  for (std::uint64_t s = 0; s < 20; ++s) {
    for (const FamilySpec spec : {FamilySpec{FamilyKind::H, 4, 1}, kCHH, kCHCH}) {
      const auto w = random_admissible_warps(spec.kind, s);
      const double tol = 0.05 * static_cast<double>(s % 3);
      const auto rep = obstruction_scan(spec, w, grid, tol);
      bool any = false;
      for (const auto& q : rep.quantities)
        if (q.counts)
          for (double v : q.values) any = any || (std::isfinite(v) && v > tol);
      CHECK(rep.violation == any);
    }
  }
}

TEST_CASE("obstruction quantities equal closed-form components") {
  const double r = 0.7;
  const double grid[] = {r};
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto wh = random_admissible_warps(FamilyKind::H, s);
    const FamilySpec h41{FamilyKind::H, 4, 1};
    const auto Rh = closed_form_curvature(h41, jets(wh, r));
    CHECK(quantity(obstruction_scan(h41, wh, grid), "sphere-plane").values[0] ==
          doctest::Approx(Rh(1, 2, 1, 2)).epsilon(1e-12));

    const auto wc = random_admissible_warps(FamilyKind::CH_H, s);
    const auto Rc = closed_form_curvature(kCHH, jets(wc, r));
    CHECK(quantity(obstruction_scan(kCHH, wc, grid), "sphere-plane").values[0] ==
          doctest::Approx(Rc(3, 4, 3, 4)).epsilon(1e-12));

    const auto wcc = random_admissible_warps(FamilyKind::CH_CH, s);
    const auto Rcc = closed_form_curvature(kCHCH, jets(wcc, r));
    const auto rep = obstruction_scan(kCHCH, wcc, grid);
    CHECK(quantity(rep, "neg-curv-1").values[0] == doctest::Approx(Rcc(4, 5, 4, 5)).epsilon(1e-12));
    CHECK(quantity(rep, "neg-curv-2").values[0] == doctest::Approx(Rcc(4, 8, 4, 8)).epsilon(1e-12));
  }
}

TEST_CASE("cusp limit check") {
  const double probes[] = {-5.0, -10.0, -20.0};
  const std::vector<std::string> names{"h"};
  CHECK(cusp_limit_check(warps({"exp(2*r)"}), names, probes).ok);
  const auto c = cusp_limit_check(warps({"cosh(r)"}), names, probes);
  CHECK_FALSE(c.ok);
  CHECK(c.entries[0].reason == "value does not tend to 0");
  const auto d = cusp_limit_check(warps({"1+exp(r)"}), names, probes);
  CHECK_FALSE(d.ok);
  CHECK(d.entries[0].reason == "value does not tend to 0");
  const auto e = cusp_limit_check(warps({"1/(r+10)"}), names, probes);
  CHECK_FALSE(e.ok);
  CHECK(e.entries[0].reason.rfind("evaluation failed", 0) == 0);
  const double bad[] = {-5.0, -5.0};
  CHECK_THROWS_AS(cusp_limit_check(warps({"exp(r)"}), names, bad), ConfigError);
}

TEST_CASE("random cusp families violate an obstruction") {
  const double probes[] = {-5.0, -10.0, -20.0};
  std::vector<double> grid;
  for (int i = 0; i <= 15; ++i) grid.push_back(-20.0 + i);
  const auto names = family_warp_names(FamilyKind::CH_CH);
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> a(0.6, 3.0);
  int tested = 0;
  for (int t = 0; t < 10; ++t) {
    char buf[3][64];
    std::snprintf(buf[0], 64, "exp(%.3f*r)", a(g));
    std::snprintf(buf[1], 64, "%.3f*exp(%.3f*r)", a(g), a(g));
    std::snprintf(buf[2], 64, "exp(%.3f*r)", a(g));
    const auto w = warps({buf[0], buf[1], buf[2]});
    REQUIRE(cusp_limit_check(w, names, probes).ok);
    const auto rep = obstruction_scan(kCHCH, w, grid);
    CHECK(rep.violation);
    CHECK(rep.violation_r <= -5.0);
    ++tested;
  }
  CHECK(tested == 10);
}

TEST_CASE("volume of cusp ends") {
  const auto a = volume_report({FamilyKind::H, 3, 1}, warps({"exp(r)", "exp(r)"}), 0.0, TailDirection::MinusInfinity);
  CHECK(a.converged);
  CHECK(std::abs(a.estimate - 0.5) <= 1e-10);
  const auto b =
      volume_report(kCHCH, warps({"exp(2*r)", "exp(2*r)", "exp(2*r)"}), 0.0, TailDirection::MinusInfinity);
  CHECK(b.converged);
  CHECK(std::abs(b.estimate - 1.0 / 36.0) <= 1e-12);
  const auto jm = jets(warps({"exp(r)", "exp(r)", "exp(r)"}), -1.0);
  CHECK(volume_density(kCHH, jm) == doctest::Approx(std::exp(-5.0)).epsilon(1e-14));
}

TEST_CASE("volume reports non-convergence honestly") {
  const auto m = volume_report({FamilyKind::H, 3, 1}, model_warps(FamilyKind::H), 1.0, TailDirection::MinusInfinity);
  CHECK_FALSE(m.converged);
  CHECK(m.note.rfind("not applicable", 0) == 0);
  const auto p = volume_report({FamilyKind::H, 3, 1}, warps({"exp(r)", "exp(r)"}), 0.0, TailDirection::PlusInfinity);
  CHECK_FALSE(p.converged);
  CHECK(p.note.rfind("divergent", 0) == 0);
}

TEST_CASE("volume convergence is monotone in the window budget") {
  const auto w = warps({"exp(r)", "exp(0.5*r)"});
  bool seen = false;
  for (int m = 3; m <= 14; ++m) {
    VolumeOptions opt;
    opt.max_windows = m;
    const auto rep = volume_report({FamilyKind::H, 4, 1}, w, 0.0, TailDirection::MinusInfinity, opt);
    if (seen) CHECK(rep.converged);
    seen = seen || rep.converged;
  }
  CHECK(seen);
  VolumeOptions two;
  two.max_windows = 2;
  CHECK_THROWS_AS(volume_report({FamilyKind::H, 4, 1}, w, 0.0, TailDirection::MinusInfinity, two), ConfigError);
}

TEST_CASE("pinching search") {
  PinchOptions opt;
  opt.r_lo = -3.0;
  opt.r_hi = -1.0;
  const PinchTarget target{-4.0, -0.25};
  const FamilySpec h31{FamilyKind::H, 3, 1}, h41{FamilyKind::H, 4, 1};
  // Codimension two leaves no sphere plane, so exponential cusps meet the target.
  const auto a = pinch_search(h31, exp_cusp_params(h31), target, opt);
  CHECK(a.found_admissible);
  CHECK(a.best_violation == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a.evaluations <= opt.budget);
  const auto b = pinch_search(h41, exp_cusp_params(h41), target, opt);
  CHECK(b.best_violation > 0.0);
  CHECK(b.evaluations <= opt.budget);
  CHECK(b.message == "target not met");
  const auto b2 = pinch_search(h41, exp_cusp_params(h41), target, opt);
  CHECK(b2.best_violation == b.best_violation);
  CHECK(b2.best_params == b.best_params);

  const auto m = pinch_search(kCHH, fixed_model_params(kCHH), {-4.1, -0.9});
  CHECK(m.best_violation == 0.0);
  CHECK(m.message == "target met");
  CHECK_THROWS_AS(param_family_by_name("nope", kCHH), ConfigError);
  PinchOptions tiny;
  tiny.budget = 1;
  CHECK_THROWS_AS(pinch_search(h41, exp_cusp_params(h41), target, tiny), ConfigError);
}
