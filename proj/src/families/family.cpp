#include "warpcurv/family.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "warpcurv/errors.hpp"

namespace warpcurv {
namespace {

void require_admissible(const WarpFunction& f, std::string_view name,
                        std::span<const double> grid) {
  if (grid.empty()) return;
  const AdmissibilityReport rep = check_admissible(f, grid);
  if (!rep.ok) {
    const auto& v = rep.violations.front();
    std::ostringstream os;
    os << "warp " << name << " = " << f.describe() << " is not admissible at r = " << v.r << " ("
       << v.reason << ")";
    throw ConfigError(os.str());
  }
}

int parse_int(std::string_view text, std::string_view whole, std::size_t offset) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("expected integer in family name", std::string(whole), offset);
  }
  return value;
}

// Parses "n,k" or "n" starting at offset within whole.
std::pair<int, int> parse_dims(std::string_view whole, std::size_t offset, bool need_k) {
  const std::string_view rest = whole.substr(offset);
  const auto comma = rest.find(',');
  if (comma == std::string_view::npos) {
    if (need_k) throw ParseError("expected 'n,k' in family name", std::string(whole), whole.size());
    return {parse_int(rest, whole, offset), -1};
  }
  return {parse_int(rest.substr(0, comma), whole, offset),
          parse_int(rest.substr(comma + 1), whole, offset + comma + 1)};
}

Field cot_field(double theta) {
  const double s = std::sin(theta);
  return {std::cos(theta) / s, 0.0, -1.0 / (s * s)};
}

}  // namespace

std::vector<double> JStructure::matrix() const {
  const int d = dim();
  std::vector<double> m(static_cast<std::size_t>(d) * d, 0.0);
  for (int b = 0; b < d; ++b) m[static_cast<std::size_t>(perm[b]) * d + b] = sign[b];
  return m;
}

void JStructure::validate() const {
  if (perm.size() != sign.size()) throw ConfigError("J: perm/sign size mismatch");
  const int d = dim();
  if (d % 2 != 0) throw ConfigError("J: odd dimension");
  for (int i = 0; i < d; ++i) {
    const int p = perm[i];
    if (p < 0 || p >= d || p == i) throw ConfigError("J: bad permutation");
    if (std::abs(sign[i]) != 1) throw ConfigError("J: signs must be +-1");
    if (perm[p] != i || sign[i] * sign[p] != -1) throw ConfigError("J: J^2 != -I");
  }
}

JStructure JStructure::from_pairs(int dim, std::span<const std::pair<int, int>> pairs) {
  JStructure J;
  J.perm.assign(dim, -1);
  J.sign.assign(dim, 0);
  for (auto [a, b] : pairs) {
    J.perm[b] = a;
    J.sign[b] = 1;
    J.perm[a] = b;
    J.sign[a] = -1;
  }
  J.validate();
  return J;
}

std::string MetricFamily::name() const {
  return family_name({kind, n, k});
}

std::vector<Jet2> MetricFamily::warp_jets(double r) const {
  std::vector<Jet2> out;
  out.reserve(warps.size());
  for (const auto& w : warps) out.push_back(w.jet(r));
  return out;
}

Jet2 MetricFamily::coefficient_jet(std::span<const Jet2> jets, int index) const {
  const Coefficient& c = coefficients[index];
  if (c.warp < 0) return Jet2::constant(c.scale);
  return jets[c.warp] * c.scale;
}

bool MetricFamily::exact_derivatives() const {
  for (const auto& w : warps)
    if (!w.exact_derivatives()) return false;
  return true;
}

void MetricFamily::check_point(Point p) const {
  if (!std::isfinite(p.r)) throw DomainError("non-finite r");
  if (chart.theta >= 0) {
    if (!(p.theta > kThetaEpsilon && p.theta < std::numbers::pi - kThetaEpsilon)) {
      std::ostringstream os;
      os << "theta = " << p.theta << " too close to the cot singularity";
      throw DomainError(os.str());
    }
  }
  for (std::size_t i = 0; i < warps.size(); ++i) {
    if (!warps[i].domain().contains(p.r)) {
      std::ostringstream os;
      os << "r = " << p.r << " outside the domain of warp " << warp_names[i];
      throw DomainError(os.str());
    }
  }
}

MetricFamily MetricFamily::with_structure_term(StructureTerm term) const {
  MetricFamily out = *this;
  std::vector<StructureTerm> kept;
  for (const auto& t : structure) {
    if (t.i == term.i && t.j == term.j && t.k == term.k) continue;
    kept.push_back(t);
  }
  if (term.constant != 0.0 || term.cot_coeff != 0.0) kept.push_back(term);
  out.structure = std::move(kept);
  return out;
}

MetricFamily MetricFamily::with_warps(std::vector<WarpFunction> replacement) const {
  if (replacement.size() != warps.size()) throw ConfigError("warp count mismatch");
  MetricFamily out = *this;
  out.warps = std::move(replacement);
  return out;
}

FamilySpec parse_family_name(std::string_view name) {
  FamilySpec spec;
  if (name.starts_with("H:")) {
    auto [n, k] = parse_dims(name, 2, true);
    if (n < 2 || k < 0 || k > n - 2) {
      throw ParseError("H:n,k needs n >= 2 and 0 <= k <= n-2", std::string(name), 2);
    }
    return {FamilyKind::H, n, k};
  }
  if (name == "CH-H") return {FamilyKind::CH_H, 3, 3};
  if (name.starts_with("CH-H:")) {
    auto [n, k] = parse_dims(name, 5, false);
    if (k != -1 || n < 2) throw ParseError("CH-H:n needs n >= 2", std::string(name), 5);
    return {FamilyKind::CH_H, n, n};
  }
  if (name == "CH-CH") return {FamilyKind::CH_CH, 5, 2};
  if (name.starts_with("CH-CH:")) {
    auto [n, k] = parse_dims(name, 6, true);
    if (n < 2 || k < 0 || k > n - 1) {
      throw ParseError("CH-CH:n,k needs n >= 2 and 0 <= k <= n-1", std::string(name), 6);
    }
    return {FamilyKind::CH_CH, n, k};
  }
  throw ParseError("unknown family (expected H:n,k, CH-H or CH-CH)", std::string(name), 0);
}

std::string family_name(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::H: return "H:" + std::to_string(spec.n) + "," + std::to_string(spec.k);
    case FamilyKind::CH_H: return spec.n == 3 ? "CH-H" : "CH-H:" + std::to_string(spec.n);
    case FamilyKind::CH_CH:
      if (spec.n == 5 && spec.k == 2) return "CH-CH";
      return "CH-CH:" + std::to_string(spec.n) + "," + std::to_string(spec.k);
  }
  return "?";
}

MetricFamily make_family_H(int n, int k, WarpFunction h, WarpFunction v,
                           std::span<const double> admissibility_grid) {
  if (n < 2 || k < 0 || k > n - 2) {
    throw ConfigError("family H needs n >= 2 and 0 <= k <= n-2");
  }
  require_admissible(h, "h", admissibility_grid);
  require_admissible(v, "v", admissibility_grid);
  MetricFamily fam;
  fam.kind = FamilyKind::H;
  fam.n = n;
  fam.k = k;
  fam.dim = n;
  fam.warp_names = family_warp_names(FamilyKind::H);
  fam.warps = {std::move(h), std::move(v)};
  for (int i = 0; i < k; ++i) fam.coefficients.push_back({0, 1.0, IndexClass::Base});
  for (int i = k; i < n - 1; ++i) fam.coefficients.push_back({1, 1.0, IndexClass::Sphere});
  fam.coefficients.push_back({-1, 1.0, IndexClass::Radial});
  fam.chart = {n - 1, -1};
  return fam;
}

MetricFamily make_family_CH_H(WarpFunction h, WarpFunction h_r, WarpFunction v, SignBranch sign,
                              std::span<const double> admissibility_grid) {
  require_admissible(h, "h", admissibility_grid);
  require_admissible(h_r, "hr", admissibility_grid);
  require_admissible(v, "v", admissibility_grid);
  MetricFamily fam;
  fam.kind = FamilyKind::CH_H;
  fam.n = 3;
  fam.k = 3;
  fam.dim = 6;
  fam.sign = sign;
  fam.warp_names = family_warp_names(FamilyKind::CH_H);
  fam.warps = {std::move(h), std::move(h_r), std::move(v)};
  fam.coefficients = {{0, 1.0, IndexClass::Base},   {0, 1.0, IndexClass::Base},
                      {1, 1.0, IndexClass::Normal}, {2, 1.0, IndexClass::Sphere},
                      {2, 1.0, IndexClass::Sphere}, {-1, 1.0, IndexClass::Radial}};
  fam.chart = {5, 3};
  const double s = sign == SignBranch::Plus ? 1.0 : -1.0;
  // 0-based X-frame brackets of the level set.
  fam.structure = {
      {0, 1, 0, s, 0.0},    {0, 2, 1, 0.0, -s},   {0, 2, 3, 1.0, 0.0},  {0, 3, 2, 1.0, 0.0},
      {0, 3, 4, -s, 0.0},   {0, 4, 1, 0.0, -1.0}, {0, 4, 3, s, 0.0},    {1, 2, 0, 0.0, s},
      {1, 2, 4, 1.0, 0.0},  {1, 4, 0, 0.0, 1.0},  {1, 4, 2, 1.0, 0.0},  {2, 3, 0, -1.0, 0.0},
      {2, 3, 4, 0.0, s},    {2, 4, 1, -1.0, 0.0}, {2, 4, 3, 0.0, -s},   {3, 4, 4, 0.0, -1.0},
  };
  const std::pair<int, int> pairs[] = {{0, 3}, {1, 4}, {2, 5}};
  fam.J = JStructure::from_pairs(6, pairs);
  return fam;
}

MetricFamily make_family_CH_CH(WarpFunction h, WarpFunction v, WarpFunction v_r,
                               std::span<const double> admissibility_grid) {
  require_admissible(h, "h", admissibility_grid);
  require_admissible(v, "v", admissibility_grid);
  require_admissible(v_r, "vr", admissibility_grid);
  MetricFamily fam;
  fam.kind = FamilyKind::CH_CH;
  fam.n = 5;
  fam.k = 2;
  fam.dim = 10;
  fam.warp_names = family_warp_names(FamilyKind::CH_CH);
  fam.warps = {std::move(h), std::move(v), std::move(v_r)};
  for (int i = 0; i < 4; ++i) fam.coefficients.push_back({0, 1.0, IndexClass::Base});
  for (int i = 0; i < 4; ++i) fam.coefficients.push_back({1, 1.0, IndexClass::Sphere});
  fam.coefficients.push_back({2, 0.5, IndexClass::Fiber});
  fam.coefficients.push_back({-1, 1.0, IndexClass::Radial});
  fam.chart = {9, -1};
  for (int a = 0; a < 8; a += 2) fam.structure.push_back({a, a + 1, 8, 2.0, 0.0});
  const std::pair<int, int> pairs[] = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}};
  fam.J = JStructure::from_pairs(10, pairs);
  return fam;
}

std::vector<WarpFunction> model_warps(FamilyKind kind) {
  const Interval positive{0.0, std::numeric_limits<double>::infinity()};
  auto b = [&](Builtin x) { return WarpFunction::builtin(x).with_domain(positive); };
  switch (kind) {
    case FamilyKind::H: return {b(Builtin::Cosh), b(Builtin::Sinh)};
    case FamilyKind::CH_H: return {b(Builtin::Cosh), b(Builtin::Cosh2), b(Builtin::Sinh)};
    case FamilyKind::CH_CH: return {b(Builtin::Cosh), b(Builtin::Sinh), b(Builtin::Sinh2)};
  }
  return {};
}

std::vector<std::string> family_warp_names(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::H: return {"h", "v"};
    case FamilyKind::CH_H: return {"h", "hr", "v"};
    case FamilyKind::CH_CH: return {"h", "v", "vr"};
  }
  return {};
}

MetricFamily family_from_warps(const FamilySpec& spec, std::span<const WarpFunction> w,
                               SignBranch sign, std::span<const double> grid) {
  if (w.size() != family_warp_names(spec.kind).size()) throw ConfigError("wrong number of warps");
  switch (spec.kind) {
    case FamilyKind::H: return make_family_H(spec.n, spec.k, w[0], w[1], grid);
    case FamilyKind::CH_H:
      if (spec.n != 3) throw ConfigError("the frame engine implements CH-H at n = 3 only");
      return make_family_CH_H(w[0], w[1], w[2], sign, grid);
    case FamilyKind::CH_CH:
      if (spec.n != 5 || spec.k != 2) {
        throw ConfigError("the frame engine implements CH-CH at (n,k) = (5,2) only");
      }
      return make_family_CH_CH(w[0], w[1], w[2], grid);
  }
  throw ConfigError("unknown family");
}

MetricFamily make_model_family(const FamilySpec& spec, SignBranch sign) {
  const auto w = model_warps(spec.kind);
  return family_from_warps(spec, w, sign);
}

std::vector<WarpFunction> random_admissible_warps(FamilyKind kind, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); };
  auto num = [](double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 3);
    return std::string(buf, res.ptr);
  };
  const Interval positive{0.0, std::numeric_limits<double>::infinity()};
  std::vector<WarpFunction> out;
  for (std::size_t w = 0; w < family_warp_names(kind).size(); ++w) {
    std::string e;
    const std::string a = num(uni(0.5, 2.0)), b = num(uni(0.2, 1.5)), c = num(uni(0.05, 1.0));
    switch (std::uniform_int_distribution<int>(0, 4)(gen)) {
      case 0: e = a + "*exp(" + b + "*r)"; break;
      case 1: e = a + "*cosh(" + b + "*r)+" + c; break;
      case 2: e = a + "*sinh(" + b + "*r)+" + c; break;
      case 3: e = a + "*r^2+" + c + "*r+" + b; break;
      default: e = a + "*sqrt(r+" + c + ")*exp(" + b + "*r)"; break;
    }
    out.push_back(WarpFunction::expression(e).with_domain(positive));
  }
  return out;
}

std::vector<Field> bracket_fields(const MetricFamily& fam, std::span<const Jet2> jets, Point p) {
  const int d = fam.dim;
  const auto at = [d](int i, int j, int k) {
    return (static_cast<std::size_t>(i) * d + j) * d + k;
  };
  std::vector<Field> C(static_cast<std::size_t>(d) * d * d);
  std::vector<Field> coeff(d);
  for (int i = 0; i < d; ++i) {
    const Jet2 c = fam.coefficient_jet(jets, i);
    coeff[i] = {c.value, c.d1, 0.0};
  }
  const Field cot = fam.chart.theta >= 0 ? cot_field(p.theta) : Field{};
  for (const auto& t : fam.structure) {
    const Field scalar = Field{t.constant, 0.0, 0.0} + t.cot_coeff * cot;
    const Field f = scalar * coeff[t.k] / (coeff[t.i] * coeff[t.j]);
    C[at(t.i, t.j, t.k)] = C[at(t.i, t.j, t.k)] + f;
    C[at(t.j, t.i, t.k)] = C[at(t.j, t.i, t.k)] - f;
  }
  const int rho = fam.radial();
  for (int i = 0; i < d; ++i) {
    if (i == rho || fam.coefficients[i].warp < 0) continue;
    const Jet2 c = fam.coefficient_jet(jets, i);
    const Field ratio{c.d1 / c.value, (c.d2 * c.value - c.d1 * c.d1) / (c.value * c.value), 0.0};
    C[at(i, rho, i)] = C[at(i, rho, i)] + ratio;
    C[at(rho, i, i)] = C[at(rho, i, i)] - ratio;
  }
  return C;
}

std::vector<Field> bracket_fields(const MetricFamily& fam, Point p) {
  fam.check_point(p);
  const auto jets = fam.warp_jets(p.r);
  return bracket_fields(fam, jets, p);
}

CurvatureTensor levelset_space_form(const MetricFamily& fam, std::span<const Jet2> jets, Point p) {
  if (fam.kind != FamilyKind::H) throw ConfigError("space-form level set applies to family H");
  CurvatureTensor R(fam.dim, "Y", p);
  for (int a = 0; a < fam.dim; ++a) {
    for (int b = a + 1; b < fam.dim; ++b) {
      const auto ca = fam.coefficients[a].cls, cb = fam.coefficients[b].cls;
      if (ca != cb || ca == IndexClass::Radial) continue;
      const double c = fam.coefficient_jet(jets, a).value;
      const double K = ca == IndexClass::Base ? -1.0 / (c * c) : 1.0 / (c * c);
      R.set_with_symmetries(a, b, a, b, K);
    }
  }
  return R;
}

}  // namespace warpcurv
