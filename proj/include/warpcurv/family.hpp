#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "warpcurv/jet.hpp"
#include "warpcurv/point.hpp"
#include "warpcurv/tensor.hpp"
#include "warpcurv/warp.hpp"

namespace warpcurv {

enum class FamilyKind { H, CH_H, CH_CH };
enum class SignBranch { Plus, Minus };

// Value and first partials in the chart (r, theta).
struct Field {
  double v = 0.0;
  double dr = 0.0;
  double dt = 0.0;
};

inline Field operator+(Field a, Field b) { return {a.v + b.v, a.dr + b.dr, a.dt + b.dt}; }
inline Field operator-(Field a, Field b) { return {a.v - b.v, a.dr - b.dr, a.dt - b.dt}; }
inline Field operator*(double s, Field a) { return {s * a.v, s * a.dr, s * a.dt}; }
inline Field operator*(Field a, Field b) {
  return {a.v * b.v, a.dr * b.v + a.v * b.dr, a.dt * b.v + a.v * b.dt};
}
inline Field operator/(Field a, Field b) {
  const double inv = 1.0 / b.v;
  return {a.v * inv, (a.dr * b.v - a.v * b.dr) * inv * inv, (a.dt * b.v - a.v * b.dt) * inv * inv};
}

enum class IndexClass { Base, Sphere, Normal, Fiber, Radial };

// Y_i = X_i / c_i with c_i = scale * warp(r), or c_i = 1 when warp < 0.
struct Coefficient {
  int warp = -1;
  double scale = 1.0;
  IndexClass cls = IndexClass::Base;
};

// X-frame structure term: [X_i, X_j] contains (constant + cot_coeff * cot(theta)) X_k.
struct StructureTerm {
  int i = 0;
  int j = 0;
  int k = 0;
  double constant = 0.0;
  double cot_coeff = 0.0;
};

// Y_i has (r,theta)-part a_i d/dr + b_i d/dtheta. a is 1 on the radial index;
// b is 1/c_theta on the index whose X-field is d/dtheta.
struct ChartExpansion {
  int radial = 0;
  int theta = -1;
};

// J e_i = sign[i] e_{perm[i]}.
struct JStructure {
  std::vector<int> perm;
  std::vector<int> sign;

  int dim() const { return static_cast<int>(perm.size()); }
  // Dense matrix J[a][b] = <e_a, J e_b>, row-major.
  std::vector<double> matrix() const;
  // Throws ConfigError unless J^2 = -I.
  void validate() const;
  // Pairs (a, b) with J e_b = e_a.
  static JStructure from_pairs(int dim, std::span<const std::pair<int, int>> pairs);
};

struct MetricFamily {
  FamilyKind kind = FamilyKind::H;
  int n = 0;
  int k = 0;
  int dim = 0;
  std::vector<std::string> warp_names;
  std::vector<WarpFunction> warps;
  std::vector<Coefficient> coefficients;
  std::vector<StructureTerm> structure;
  ChartExpansion chart;
  std::optional<JStructure> J;
  SignBranch sign = SignBranch::Plus;

  int radial() const { return dim - 1; }
  std::string name() const;

  std::vector<Jet2> warp_jets(double r) const;
  Jet2 coefficient_jet(std::span<const Jet2> jets, int index) const;
  bool exact_derivatives() const;

  // Throws DomainError when p is outside the chart.
  void check_point(Point p) const;

  // Copy with every term (i,j,k) replaced by the given one (removed when both
  // coefficients are zero).
  MetricFamily with_structure_term(StructureTerm term) const;
  MetricFamily with_warps(std::vector<WarpFunction> replacement) const;
};

inline constexpr double kThetaEpsilon = 1e-3;

struct FamilySpec {
  FamilyKind kind = FamilyKind::H;
  int n = 0;
  int k = 0;
};

// "H:n,k", "CH-H", "CH-H:n", "CH-CH", "CH-CH:n,k".
FamilySpec parse_family_name(std::string_view name);
std::string family_name(const FamilySpec& spec);

MetricFamily make_family_H(int n, int k, WarpFunction h, WarpFunction v,
                           std::span<const double> admissibility_grid = {});
MetricFamily make_family_CH_H(WarpFunction h, WarpFunction h_r, WarpFunction v,
                              SignBranch sign = SignBranch::Plus,
                              std::span<const double> admissibility_grid = {});
MetricFamily make_family_CH_CH(WarpFunction h, WarpFunction v, WarpFunction v_r,
                               std::span<const double> admissibility_grid = {});

// Model warps with domain (0, inf), ordered as the family's warp_names.
std::vector<WarpFunction> model_warps(FamilyKind kind);
MetricFamily make_model_family(const FamilySpec& spec, SignBranch sign = SignBranch::Plus);
// Engine family for spec from warps in warp_names order.
MetricFamily family_from_warps(const FamilySpec& spec, std::span<const WarpFunction> warps,
                               SignBranch sign = SignBranch::Plus,
                               std::span<const double> admissibility_grid = {});
std::vector<std::string> family_warp_names(FamilyKind kind);

// Seeded expression warps that are positive and increasing on (0, inf), with
// that domain attached. One warp per family warp name.
std::vector<WarpFunction> random_admissible_warps(FamilyKind kind, std::uint64_t seed);

// C[(i*dim + j)*dim + k] = <[Y_i,Y_j],Y_k> with chart partials.
std::vector<Field> bracket_fields(const MetricFamily& fam, std::span<const Jet2> jets, Point p);
std::vector<Field> bracket_fields(const MetricFamily& fam, Point p);

// Intrinsic curvature of the level set {r = const} for family H: product of
// space forms, -1/h^2 on base pairs and +1/v^2 on sphere pairs. Radial slots are zero.
CurvatureTensor levelset_space_form(const MetricFamily& fam, std::span<const Jet2> jets, Point p);

}  // namespace warpcurv
