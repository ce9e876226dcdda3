#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "warpcurv/analysis.hpp"
#include "warpcurv/errors.hpp"

namespace warpcurv {

double volume_density(const FamilySpec& spec, std::span<const Jet2> jets) {
  switch (spec.kind) {
    case FamilyKind::H:
      return std::pow(jets[0].value, spec.k) * std::pow(jets[1].value, spec.n - spec.k - 1);
    case FamilyKind::CH_H:
      return std::pow(jets[0].value, spec.n - 1) * jets[1].value *
             std::pow(jets[2].value, spec.n - 1);
    case FamilyKind::CH_CH: {
      const int m = spec.n - spec.k - 1;
      return std::pow(jets[0].value, 2 * spec.k) * std::pow(jets[1].value, 2 * m) *
             (0.5 * jets[2].value);
    }
  }
  return 0.0;
}

VolumeReport volume_report(const FamilySpec& spec, std::span<const WarpFunction> warps, double r0,
                           TailDirection direction, const VolumeOptions& opt) {
  if (warps.size() != family_warp_names(spec.kind).size()) {
    throw ConfigError("wrong number of warps for " + family_name(spec));
  }
  if (opt.max_windows < 3) throw ConfigError("volume_report needs at least 3 windows");
  if (!(opt.first_width > 0.0) || !(opt.rel_tol > 0.0)) {
    throw ConfigError("window width and tolerance must be positive");
  }
  VolumeReport rep;
  rep.family = family_name(spec);
  rep.r0 = r0;
  rep.direction = direction;
  const double sgn = direction == TailDirection::MinusInfinity ? -1.0 : 1.0;

  std::vector<Jet2> jets(warps.size());
  auto density = [&](double r) {
    for (std::size_t i = 0; i < warps.size(); ++i) jets[i] = warps[i].jet(r);
    const double d = volume_density(spec, jets);
    if (!std::isfinite(d)) throw NumericError("non-finite volume density");
    return d;
  };

  try {
    rep.samples.emplace_back(r0, density(r0));
    double inner = 0.0;
    double width = opt.first_width;
    double total = 0.0;
    for (int w = 0; w < opt.max_windows; ++w) {
      const double outer = inner + width;
      const double a = sgn < 0 ? r0 - outer : r0 + inner;
      const double b = sgn < 0 ? r0 - inner : r0 + outer;
      const double inc =
          boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, a, b, 15, 1e-14);
      if (!std::isfinite(inc)) throw NumericError("non-finite window integral");
      total += inc;
      VolumeWindow win{a, b, total, inc, false};
      const std::size_t nw = rep.windows.size();
      if (nw >= 2) {
        const double i0 = std::abs(rep.windows[nw - 2].increment);
        const double i1 = std::abs(rep.windows[nw - 1].increment);
        const bool geometric = i1 < i0 && std::abs(inc) < i1;
        win.converged = geometric && std::abs(inc) <= opt.rel_tol * std::abs(total);
      }
      rep.samples.emplace_back(sgn < 0 ? a : b, density(sgn < 0 ? a : b));
      rep.windows.push_back(win);
      rep.estimate = total;
      if (win.converged) {
        rep.converged = true;
        break;
      }
      inner = outer;
      width *= 2.0;
    }
    if (!rep.converged) rep.note = "divergent: tail increments do not decay geometrically";
  } catch (const DomainError& e) {
    rep.converged = false;
    rep.note = std::string("not applicable: ") + e.what();
  } catch (const NumericError& e) {
    rep.converged = false;
    rep.note = std::string("divergent: ") + e.what();
  }
  return rep;
}

}  // namespace warpcurv
