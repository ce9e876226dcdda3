#include <doctest.h>

#include <cmath>
#include <numbers>

#include "warpcurv/errors.hpp"
#include "warpcurv/family.hpp"

using namespace warpcurv;

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t at(int d, int i, int j, int k) { return (static_cast<std::size_t>(i) * d + j) * d + k; }

double max_antisymmetry(const MetricFamily& fam, Point p) {
  const auto C = bracket_fields(fam, p);
  const int d = fam.dim;
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const Field a = C[at(d, i, j, k)], b = C[at(d, j, i, k)];
        worst = std::max({worst, std::abs(a.v + b.v), std::abs(a.dr + b.dr), std::abs(a.dt + b.dt)});
      }
  return worst;
}

}  // namespace

TEST_CASE("family names parse and print") {
  const auto h = parse_family_name("H:5,2");
  CHECK(h.kind == FamilyKind::H);
  CHECK(h.n == 5);
  CHECK(h.k == 2);
  CHECK(family_name(h) == "H:5,2");
  CHECK(family_name(parse_family_name("CH-H")) == "CH-H");
  CHECK(parse_family_name("CH-H").n == 3);
  const auto cc = parse_family_name("CH-CH");
  CHECK(cc.n == 5);
  CHECK(cc.k == 2);
  CHECK(parse_family_name("CH-CH:7,3").k == 3);
  CHECK(parse_family_name("CH-H:4").n == 4);
}

TEST_CASE("malformed family names are parse errors") {
  for (const char* bad : {"", "H", "H:3", "H:3,2", "H:1,0", "H:4,-1", "CH", "CH-H:1", "CH-CH:5,5", "H:3,1x", "h:3,1"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_family_name(bad), ParseError);
  }
}

TEST_CASE("complex structures square to minus one") {
  const std::pair<int, int> pairs[] = {{0, 3}, {1, 4}, {2, 5}};
  const auto J = JStructure::from_pairs(6, pairs);
  CHECK_NOTHROW(J.validate());
  const auto M = J.matrix();
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      double s = 0.0;
      for (int c = 0; c < 6; ++c) s += M[a * 6 + c] * M[c * 6 + b];
      CHECK(s == (a == b ? -1.0 : 0.0));
    }
  JStructure broken{{0, 1}, {1, 1}};
  CHECK_THROWS_AS(broken.validate(), ConfigError);
}

TEST_CASE("bracket tables are antisymmetric on a 20 x 20 chart grid") {
  std::vector<MetricFamily> fams = {make_model_family({FamilyKind::H, 4, 1}),
                                    make_model_family({FamilyKind::CH_H, 3, 3}, SignBranch::Plus),
                                    make_model_family({FamilyKind::CH_H, 3, 3}, SignBranch::Minus),
                                    make_model_family({FamilyKind::CH_CH, 5, 2})};
  for (std::uint64_t s = 1; s <= 3; ++s) {
    fams.push_back(family_from_warps({FamilyKind::CH_H, 3, 3}, random_admissible_warps(FamilyKind::CH_H, s)));
    fams.push_back(family_from_warps({FamilyKind::CH_CH, 5, 2}, random_admissible_warps(FamilyKind::CH_CH, s)));
  }
  double worst = 0.0;
  for (const auto& fam : fams)
    for (int a = 0; a < 20; ++a)
      for (int b = 0; b < 20; ++b) {
        const Point p{0.2 + 0.15 * a, 0.1 + (kPi - 0.2) * b / 19.0};
        worst = std::max(worst, max_antisymmetry(fam, p));
      }
  CHECK(worst == 0.0);
}

TEST_CASE("radial brackets carry the logarithmic derivatives") {
  const auto fam = make_model_family({FamilyKind::H, 3, 1});
  const double r = 0.9;
  const auto C = bracket_fields(fam, Point{r, kPi / 2});
  CHECK(C[at(3, 0, 2, 0)].v == doctest::Approx(std::tanh(r)).epsilon(1e-15));
  CHECK(C[at(3, 1, 2, 1)].v == doctest::Approx(1.0 / std::tanh(r)).epsilon(1e-15));
  CHECK(C[at(3, 2, 1, 1)].v == doctest::Approx(-1.0 / std::tanh(r)).epsilon(1e-15));
}

TEST_CASE("chart checks") {
  const auto chh = make_model_family({FamilyKind::CH_H, 3, 3});
  CHECK_THROWS_AS(chh.check_point({1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(chh.check_point({1.0, kPi}), DomainError);
  CHECK_THROWS_AS(chh.check_point({-1.0, 1.0}), DomainError);
  CHECK_NOTHROW(chh.check_point({1.0, 1.0}));
  CHECK_NOTHROW(make_model_family({FamilyKind::H, 3, 1}).check_point({1.0, 0.0}));
}

TEST_CASE("family layouts") {
  const auto h = make_model_family({FamilyKind::H, 5, 2});
  CHECK(h.dim == 5);
  CHECK(h.coefficients[1].cls == IndexClass::Base);
  CHECK(h.coefficients[2].cls == IndexClass::Sphere);
  CHECK(h.coefficients[4].cls == IndexClass::Radial);
  const auto c = make_model_family({FamilyKind::CH_CH, 5, 2});
  CHECK(c.dim == 10);
  CHECK(c.coefficients[8].cls == IndexClass::Fiber);
  CHECK(c.coefficients[8].scale == 0.5);
  CHECK(c.warp_names == std::vector<std::string>{"h", "v", "vr"});
  CHECK_THROWS_AS(make_model_family({FamilyKind::CH_CH, 6, 2}), ConfigError);
  CHECK_THROWS_AS(make_family_H(3, 2, WarpFunction::builtin(Builtin::Cosh), WarpFunction::builtin(Builtin::Sinh)),
                  ConfigError);
}

TEST_CASE("inadmissible warps are rejected on the given grid") {
  const double grid[] = {0.5, 1.0};
  CHECK_THROWS_AS(make_family_H(3, 1, parse_warp("1/r"), parse_warp("sinh(r)"), grid), ConfigError);
  CHECK_NOTHROW(make_family_H(3, 1, parse_warp("1/r"), parse_warp("sinh(r)")));
}

TEST_CASE("random admissible warps are admissible and seeded") {
  std::vector<double> grid;
  for (int i = 1; i <= 30; ++i) grid.push_back(0.1 * i);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto a = random_admissible_warps(FamilyKind::CH_CH, s);
    const auto b = random_admissible_warps(FamilyKind::CH_CH, s);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].describe() == b[i].describe());
      CHECK(check_admissible(a[i], grid).ok);
    }
  }
}

TEST_CASE("structure term replacement") {
  const auto fam = make_model_family({FamilyKind::CH_H, 3, 3});
  const auto without = fam.with_structure_term({3, 4, 4, 0.0, 0.0});
  CHECK(without.structure.size() == fam.structure.size() - 1);
  const auto changed = fam.with_structure_term({0, 1, 0, 5.0, 0.0});
  CHECK(changed.structure.size() == fam.structure.size());
}

TEST_CASE("space-form level set of family H") {
  const auto fam = make_model_family({FamilyKind::H, 4, 2});
  const double r = 1.3;
  const auto jets = fam.warp_jets(r);
  const auto R = levelset_space_form(fam, jets, {r, kPi / 2});
  CHECK(R(0, 1, 0, 1) == doctest::Approx(-1.0 / (std::cosh(r) * std::cosh(r))));
  CHECK(R(0, 2, 0, 2) == 0.0);
  CHECK(R.symmetry_defect() == 0.0);
}
