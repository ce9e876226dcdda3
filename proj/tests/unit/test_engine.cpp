#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "warpcurv/closedform.hpp"
#include "warpcurv/engine.hpp"
#include "warpcurv/errors.hpp"

using namespace warpcurv;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCrossPathTol = 1e-8;
constexpr double kSymmetryTol = 1e-9;

const FamilySpec kCHH{FamilyKind::CH_H, 3, 3};
const FamilySpec kCHCH{FamilyKind::CH_CH, 5, 2};

std::vector<Jet2> jets(std::span<const WarpFunction> w, double r) {
  std::vector<Jet2> out;
  for (const auto& f : w) out.push_back(f.jet(r));
  return out;
}

}  // namespace

TEST_CASE("Koszul connection of the CH/H model") {
  const auto fam = make_model_family(kCHH);
  const double r = 1.2;
  const auto G = koszul_connection(fam, {r, kPi / 2});
  CHECK(G(3, 5, 3) == doctest::Approx(1.0 / std::tanh(r)).epsilon(1e-14));
  CHECK(G.metric_defect() <= 1e-12);
  const auto w = random_admissible_warps(FamilyKind::CH_H, 4);
  const auto G2 = koszul_connection(family_from_warps(kCHH, w), {0.8, 1.0});
  for (int j = 0; j < 6; ++j)
    for (int k = 0; k < 6; ++k) CHECK(G2(5, j, k) == 0.0);
  CHECK(G2.metric_defect() <= 1e-12);
}

TEST_CASE("Koszul connection of family H") {
  const auto w = random_admissible_warps(FamilyKind::H, 9);
  const auto fam = family_from_warps({FamilyKind::H, 5, 2}, w);
  const double r = 1.4;
  const auto G = koszul_connection(fam, {r, kPi / 2});
  const Jet2 h = w[0].jet(r), v = w[1].jet(r);
  CHECK(G(0, 0, 4) == doctest::Approx(-h.d1 / h.value).epsilon(1e-14));
  CHECK(G(3, 3, 4) == doctest::Approx(-v.d1 / v.value).epsilon(1e-14));
}

TEST_CASE("chart singularities are rejected") {
  const auto fam = make_model_family(kCHH);
  CHECK_THROWS_AS(koszul_connection(fam, {1.0, 1e-4}), DomainError);
  CHECK_THROWS_AS(compute_curvature(fam, {1.0, kPi}), DomainError);
}

TEST_CASE("curvature from the connection reproduces the CH/H model") {
  const auto fam = make_model_family(kCHH);
  const auto R = curvature_from_connection(fam, {1.0, kPi / 2});
  CHECK(R(0, 3, 0, 3) == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(R(0, 3, 1, 4) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("Koszul path matches the closed form for a perturbed warp") {
  const std::vector<WarpFunction> w{parse_warp("cosh(r)+0.05*r^2"), parse_warp("cosh(2*r)"), parse_warp("sinh(r)")};
  const auto fam = family_from_warps(kCHH, w);
  const Point p{1.0, kPi / 2};
  const auto E = curvature_from_connection(fam, p);
  const auto C = closed_form_curvature(kCHH, jets(w, 1.0), p);
  CHECK(E.max_abs_diff(C) <= kCrossPathTol);
}

TEST_CASE("cross-path equivalence on 50 random warp sets and 10 points") {
  std::mt19937_64 g(77);
  std::uniform_real_distribution<double> ur(0.3, 3.0), ut(0.3, kPi - 0.3);
  double worst = 0.0, sym = 0.0;
  for (const FamilySpec s : {FamilySpec{FamilyKind::H, 3, 1}, FamilySpec{FamilyKind::H, 6, 2}, kCHH, kCHCH}) {
    for (int t = 0; t < 50; ++t) {
      const auto w = random_admissible_warps(s.kind, 1000 + t);
      const auto fam = family_from_warps(s, w);
      for (int q = 0; q < 10; ++q) {
        const Point p{ur(g), s.kind == FamilyKind::CH_H ? ut(g) : kPi / 2};
        const auto E = compute_curvature(fam, p);
        const auto C = closed_form_curvature(s, jets(w, p.r), p);
        worst = std::max(worst, E.max_abs_diff(C));
        sym = std::max({sym, E.symmetry_defect(), E.bianchi_defect()});
      }
    }
  }
  CHECK(worst <= kCrossPathTol);
  CHECK(sym <= kSymmetryTol);
}

TEST_CASE("central differences agree with the jet path") {
  const auto w = random_admissible_warps(FamilyKind::CH_H, 21);
  const auto fam = family_from_warps(kCHH, w);
  for (double th : {kPi / 2, 1.0}) {
    const Point p{1.1, th};
    const auto a = curvature_from_connection(fam, p, DerivativeMode::Jet);
    const auto b = curvature_from_connection(fam, p, DerivativeMode::CentralDifference);
    CHECK(a.max_abs_diff(b) <= 1e-7);
  }
}

TEST_CASE("opaque warps fall back to numeric derivatives") {
  const std::vector<WarpFunction> w{
      WarpFunction::opaque("h", [](double r) { return std::cosh(r); }),
      WarpFunction::opaque("hr", [](double r) { return std::cosh(2 * r); }),
      WarpFunction::opaque("v", [](double r) { return std::sinh(r); })};
  const auto fam = family_from_warps(kCHH, w);
  const auto R = compute_curvature(fam, {1.0, 1.2});
  CHECK(R.max_abs_diff(ambient_constants(kCHH)) <= 1e-6);
}

TEST_CASE("warped-product assembly for family H") {
  const auto w = random_admissible_warps(FamilyKind::H, 2);
  const auto fam = family_from_warps({FamilyKind::H, 4, 1}, w);
  const double r = 0.9;
  const auto j = jets(w, r);
  const Point p{r, kPi / 2};
  const auto level = levelset_space_form(fam, j, p);
  std::vector<Jet2> coeff;
  for (int i = 0; i < fam.dim; ++i) coeff.push_back(fam.coefficient_jet(j, i));
  const auto R = belegradek_assemble(level, coeff, bracket_fields(fam, j, p), fam.radial(), p);
  const Jet2 h = j[0], v = j[1];
  CHECK(R(1, 2, 1, 2) == doctest::Approx(1.0 / (v.value * v.value) - (v.d1 / v.value) * (v.d1 / v.value)).epsilon(1e-13));
  CHECK(R(2, 3, 2, 3) == doctest::Approx(-v.d2 / v.value).epsilon(1e-13));
  const auto fam2 = family_from_warps({FamilyKind::H, 4, 2}, w);
  const auto R2 = compute_curvature(fam2, p);
  CHECK(R2(0, 1, 0, 1) == doctest::Approx(-1.0 / (h.value * h.value) - (h.d1 / h.value) * (h.d1 / h.value)).epsilon(1e-13));
}

TEST_CASE("submersion level set of the CH/CH family") {
  const auto w = random_admissible_warps(FamilyKind::CH_CH, 6);
  const auto fam = family_from_warps(kCHCH, w);
  const double r = 1.3;
  const Point p{r, kPi / 2};
  const auto A = a_tensor(fam, p);
  CHECK(A.alternation_defect() <= 1e-14);
  const auto L = submersion_curvature(fam, p);
  const auto j = jets(w, r);
  const double h = j[0].value, v = j[1].value, vr = j[2].value;
  CHECK(L(0, 8, 0, 8) == doctest::Approx(vr * vr / (4 * h * h * h * h)).epsilon(1e-13));
  CHECK(L(4, 8, 4, 8) == doctest::Approx(vr * vr / (4 * v * v * v * v)).epsilon(1e-13));
  CHECK(L(0, 1, 0, 1) == doctest::Approx(-4 / (h * h) - 3 * vr * vr / (4 * h * h * h * h)).epsilon(1e-13));
  CHECK(L(4, 5, 4, 5) == doctest::Approx(4 / (v * v) - 3 * vr * vr / (4 * v * v * v * v)).epsilon(1e-13));
  CHECK(L(0, 1, 4, 5) == doctest::Approx(-vr * vr / (2 * h * h * v * v)).epsilon(1e-13));
  CHECK(L(0, 4, 1, 5) == doctest::Approx(-vr * vr / (4 * h * h * v * v)).epsilon(1e-13));
  CHECK(L(0, 5, 1, 4) == doctest::Approx(vr * vr / (4 * h * h * v * v)).epsilon(1e-13));
}

TEST_CASE("CH/CH model: -4 = 2 R(10,9,1,2)") {
  const auto R = compute_curvature(make_model_family(kCHCH), {1.0, kPi / 2});
  CHECK(2 * R(9, 8, 0, 1) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(R(0, 4, 1, 5) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(R(0, 5, 1, 4) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sign branches give the same curvature") {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> ur(0.3, 3.0), ut(0.3, kPi - 0.3);
  for (int t = 0; t < 10; ++t) {
    const auto w = random_admissible_warps(FamilyKind::CH_H, 300 + t);
    const Point p{ur(g), ut(g)};
    const auto a = compute_curvature(family_from_warps(kCHH, w, SignBranch::Plus), p);
    const auto b = compute_curvature(family_from_warps(kCHH, w, SignBranch::Minus), p);
    CHECK(a.max_abs_diff(b) <= 1e-10);
  }
}

TEST_CASE("Nijenhuis residual and its negative control") {
  for (SignBranch b : {SignBranch::Plus, SignBranch::Minus}) {
    const auto fam = make_model_family(kCHH, b);
    CHECK(nijenhuis_residual(fam, {1.0, kPi / 2}) <= 1e-10);
    CHECK(nijenhuis_residual(fam, {0.6, kPi / 3}) <= 1e-10);
  }
  CHECK(nijenhuis_residual(make_model_family(kCHCH), {1.0, kPi / 2}) <= 1e-12);
  const auto corrupted = make_model_family(kCHH).with_structure_term({3, 4, 4, 0.0, 0.0});
  CHECK(nijenhuis_residual(corrupted, {1.0, kPi / 3}) > 0.1);
  CHECK_THROWS_AS(nijenhuis_residual(make_model_family({FamilyKind::H, 3, 1}), {1.0, kPi / 2}), ConfigError);
}

TEST_CASE("structure constants are re-derived from the ambient tensor") {
  const auto fam = make_model_family(kCHCH);
  for (double r : {0.2, 0.5, 1.0, 2.0, 3.0}) {
    const auto c = rederive_structure_constants(fam, r);
    CHECK(c.rank == 28);
    CHECK(c.unknowns == 28);
    CHECK(c.residual <= 1e-10);
    for (int a = 0; a < 8; a += 2) CHECK(std::abs(c(a, a + 1) - 2.0) <= 1e-10);
    CHECK(std::abs(c(0, 4)) <= 1e-10);
    CHECK(std::abs(c(0, 2)) <= 1e-10);
    CHECK(c(1, 0) == -c(0, 1));
  }
  CHECK_THROWS_AS(rederive_structure_constants(make_model_family(kCHH), 1.0), ConfigError);
}
