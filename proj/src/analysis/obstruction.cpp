#include <cmath>
#include <limits>

#include "warpcurv/analysis.hpp"
#include "warpcurv/errors.hpp"

namespace warpcurv {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kCuspThreshold = 1e-3;

struct QuantityDef {
  std::string name;
  bool counts;
  double (*eval)(std::span<const Jet2>);
};

// Jet order: H (h, v); CH/H (h, hr, v); CH/CH (h, v, vr).
double sphere_plane_at(const Jet2& v) { return 1.0 / (v.value * v.value) - (v.d1 / v.value) * (v.d1 / v.value); }

std::vector<QuantityDef> quantities_for(const FamilySpec& spec) {
  std::vector<QuantityDef> q;
  switch (spec.kind) {
    case FamilyKind::H:
      if (spec.n - spec.k - 1 >= 2) {
        q.push_back({"sphere-plane", true, [](std::span<const Jet2> j) { return sphere_plane_at(j[1]); }});
      }
      break;
    case FamilyKind::CH_H:
      if (spec.n - 1 >= 2) {
        q.push_back({"sphere-plane", true, [](std::span<const Jet2> j) { return sphere_plane_at(j[2]); }});
      }
      break;
    case FamilyKind::CH_CH: {
      const int m = spec.n - spec.k - 1;
      if (m >= 2) {
        q.push_back({"sphere-plane", true, [](std::span<const Jet2> j) { return sphere_plane_at(j[1]); }});
      }
      if (m >= 1) {
        q.push_back({"neg-curv-1", true, [](std::span<const Jet2> j) {
                       const Jet2& v = j[1];
                       const Jet2& w = j[2];
                       const double v2 = v.value * v.value;
                       return (4.0 - v.d1 * v.d1) / v2 - 3.0 * w.value * w.value / (4.0 * v2 * v2);
                     }});
        q.push_back({"neg-curv-2", true, [](std::span<const Jet2> j) {
                       const Jet2& v = j[1];
                       const Jet2& w = j[2];
                       const double v2 = v.value * v.value;
                       return -v.d1 * w.d1 / (v.value * w.value) + w.value * w.value / (4.0 * v2 * v2);
                     }});
      }
      q.push_back({"ratio-vr-v", false, [](std::span<const Jet2> j) { return j[2].value / j[1].value; }});
      break;
    }
  }
  return q;
}

}  // namespace

ObstructionReport obstruction_scan(const FamilySpec& spec, std::span<const WarpFunction> warps,
                                   std::span<const double> r_grid, double tol) {
  const auto names = family_warp_names(spec.kind);
  if (warps.size() != names.size()) throw ConfigError("wrong number of warps for " + family_name(spec));
  ObstructionReport rep;
  rep.family = family_name(spec);
  for (const auto& w : warps) rep.warps.push_back(w.describe());
  rep.r_grid.assign(r_grid.begin(), r_grid.end());
  rep.tol = tol;

  const auto defs = quantities_for(spec);
  for (const auto& d : defs) rep.quantities.push_back({d.name, d.counts, {}});

  std::vector<Jet2> jets(warps.size());
  for (double r : r_grid) {
    bool ok = true;
    try {
      for (std::size_t i = 0; i < warps.size(); ++i) jets[i] = warps[i].jet(r);
    } catch (const Error&) {
      ok = false;
    }
    for (std::size_t q = 0; q < defs.size(); ++q) {
      const double value = ok ? defs[q].eval(jets) : kNaN;
      rep.quantities[q].values.push_back(value);
      if (defs[q].counts && !rep.violation && value > tol) {
        rep.violation = true;
        rep.violation_r = r;
        rep.violation_component = defs[q].name;
      }
    }
  }

  const double probes[] = {-5.0, -10.0, -20.0};
  rep.cusp = cusp_limit_check(warps, names, probes);
  return rep;
}

CuspReport cusp_limit_check(std::span<const WarpFunction> warps, std::span<const std::string> names,
                            std::span<const double> probes) {
  if (probes.empty()) throw ConfigError("cusp check needs at least one probe");
  for (std::size_t i = 1; i < probes.size(); ++i) {
    if (!(probes[i] < probes[i - 1])) throw ConfigError("cusp probes must be strictly decreasing");
  }
  CuspReport rep;
  rep.probes.assign(probes.begin(), probes.end());
  for (std::size_t w = 0; w < warps.size(); ++w) {
    CuspEntry e;
    e.warp = w < names.size() ? names[w] : warps[w].describe();
    try {
      for (double r : probes) {
        const Jet2 j = warps[w].jet(r);
        e.values.push_back(j.value);
        e.derivatives.push_back(j.d1);
      }
    } catch (const Error& ex) {
      e.ok = false;
      e.reason = std::string("evaluation failed: ") + ex.what();
    }
    auto shrinking = [](const std::vector<double>& xs) {
      for (std::size_t i = 1; i < xs.size(); ++i) {
        if (std::abs(xs[i]) > std::abs(xs[i - 1])) return false;
      }
      return std::abs(xs.back()) < kCuspThreshold;
    };
    if (e.ok && !shrinking(e.values)) {
      e.ok = false;
      e.reason = "value does not tend to 0";
    } else if (e.ok && !shrinking(e.derivatives)) {
      e.ok = false;
      e.reason = "derivative does not tend to 0";
    }
    rep.ok = rep.ok && e.ok;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace warpcurv
