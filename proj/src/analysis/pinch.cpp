#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

#include "warpcurv/analysis.hpp"
#include "warpcurv/closedform.hpp"
#include "warpcurv/errors.hpp"

namespace warpcurv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

struct Evaluation {
  double violation = kInf;
  double min_K = 0.0;
  double max_K = 0.0;
};

class Objective {
 public:
  Objective(const FamilySpec& spec, const ParamFamily& params, PinchTarget target,
            const PinchOptions& opt)
      : spec_(spec), params_(params), target_(target), opt_(opt) {
    if (opt.r_points < 1) throw ConfigError("pinch search needs at least one r point");
    for (int i = 0; i < opt.r_points; ++i) {
      const double t = opt.r_points == 1 ? 0.0 : static_cast<double>(i) / (opt.r_points - 1);
      grid_.push_back(opt.r_lo + t * (opt.r_hi - opt.r_lo));
    }
  }

  std::vector<double> clamp(std::vector<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], params_.lower[i], params_.upper[i]);
    return x;
  }

  Evaluation operator()(const std::vector<double>& x) {
    ++evaluations;
    Evaluation ev;
    std::vector<WarpFunction> warps;
    try {
      warps = params_.make(x);
      for (const auto& w : warps) {
        if (!check_admissible(w, grid_).ok) return ev;
      }
    } catch (const Error&) {
      return ev;
    }
    ev.violation = 0.0;
    ev.min_K = kInf;
    ev.max_K = -kInf;
    std::vector<Jet2> jets(warps.size());
    for (double r : grid_) {
      try {
        for (std::size_t i = 0; i < warps.size(); ++i) jets[i] = warps[i].jet(r);
        const CurvatureTensor R = closed_form_curvature(spec_, jets, Point{r, opt_.theta});
        const SectionalReport s = extremal_sectional(R, opt_.sectional);
        ev.min_K = std::min(ev.min_K, s.min_K);
        ev.max_K = std::max(ev.max_K, s.max_K);
        ev.violation = std::max({ev.violation, target_.lower - s.min_K, s.max_K - target_.upper});
      } catch (const Error&) {
        return Evaluation{};
      }
    }
    if (!std::isfinite(ev.violation)) return Evaluation{};
    return ev;
  }

  int evaluations = 0;

 private:
  FamilySpec spec_;
  const ParamFamily& params_;
  PinchTarget target_;
  PinchOptions opt_;
  std::vector<double> grid_;
};

struct Best {
  std::vector<double> x;
  Evaluation ev;
};

void consider(Best& best, const std::vector<double>& x, const Evaluation& ev) {
  if (ev.violation < best.ev.violation) best = {x, ev};
}

void nelder_mead(Objective& f, std::vector<double> start, const ParamFamily& params, int budget,
                 Best& best) {
  const int d = params.dim();
  std::vector<std::vector<double>> simplex{f.clamp(start)};
  for (int i = 0; i < d; ++i) {
    auto v = simplex[0];
    const double step = 0.1 * (params.upper[i] - params.lower[i]);
    v[i] = v[i] + step <= params.upper[i] ? v[i] + step : v[i] - step;
    simplex.push_back(f.clamp(v));
  }
  std::vector<double> fv;
  int used = 0;
  auto eval = [&](const std::vector<double>& x) {
    const Evaluation ev = f(x);
    ++used;
    consider(best, x, ev);
    return ev.violation;
  };
  for (const auto& v : simplex) fv.push_back(eval(v));

  while (used + 2 <= budget) {
    std::vector<int> order(d + 1);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int lo = order[0], hi = order[d], second = order[d - 1];
    if (fv[lo] == 0.0) break;
    if (std::isfinite(fv[hi]) && fv[hi] - fv[lo] <= 1e-14) {
      double size = 0.0;
      for (const auto& v : simplex)
        for (int i = 0; i < d; ++i) size = std::max(size, std::abs(v[i] - simplex[lo][i]));
      if (size <= 1e-10) break;
    }
    std::vector<double> centroid(d, 0.0);
    for (int p = 0; p <= d; ++p) {
      if (p == hi) continue;
      for (int i = 0; i < d; ++i) centroid[i] += simplex[p][i] / d;
    }
    auto along = [&](double t) {
      std::vector<double> x(d);
      for (int i = 0; i < d; ++i) x[i] = centroid[i] + t * (simplex[hi][i] - centroid[i]);
      return f.clamp(x);
    };
    const auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < fv[lo]) {
      const auto xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[hi] = xe;
        fv[hi] = fe;
      } else {
        simplex[hi] = xr;
        fv[hi] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[hi] = xr;
      fv[hi] = fr;
      continue;
    }
    const auto xc = fr < fv[hi] ? along(-0.5) : along(0.5);
    const double fc = eval(xc);
    if (fc < std::min(fr, fv[hi])) {
      simplex[hi] = xc;
      fv[hi] = fc;
      continue;
    }
    for (int p = 0; p <= d && used < budget; ++p) {
      if (p == lo) continue;
      for (int i = 0; i < d; ++i) simplex[p][i] = simplex[lo][i] + 0.5 * (simplex[p][i] - simplex[lo][i]);
      fv[p] = eval(simplex[p]);
    }
  }
}

}  // namespace

ParamFamily fixed_model_params(const FamilySpec& spec) {
  ParamFamily p;
  p.name = "model";
  const FamilyKind kind = spec.kind;
  p.make = [kind](std::span<const double>) { return model_warps(kind); };
  return p;
}

ParamFamily exp_cusp_params(const FamilySpec& spec) {
  ParamFamily p;
  p.name = "exp-cusp";
  p.lower = {0.05};
  p.upper = {5.0};
  p.initial = {1.0};
  const std::size_t count = family_warp_names(spec.kind).size();
  p.make = [count](std::span<const double> x) {
    const WarpFunction w = WarpFunction::expression("exp(" + shortest(x[0]) + "*r)");
    return std::vector<WarpFunction>(count, w);
  };
  return p;
}

ParamFamily param_family_by_name(std::string_view name, const FamilySpec& spec) {
  if (name == "model") return fixed_model_params(spec);
  if (name == "exp-cusp") return exp_cusp_params(spec);
  throw ConfigError("unknown parameter family '" + std::string(name) + "' (expected model or exp-cusp)");
}

PinchResult pinch_search(const FamilySpec& spec, const ParamFamily& params, PinchTarget target,
                         const PinchOptions& opt) {
  if (opt.budget < 1) throw ConfigError("search budget must be positive");
  if (opt.restarts < 1) throw ConfigError("search needs at least one restart");
  if (opt.budget < params.dim() + 1) throw ConfigError("search budget is smaller than the simplex size");
  if (params.lower.size() != params.initial.size() || params.upper.size() != params.initial.size()) {
    throw ConfigError("parameter bounds do not match the parameter vector");
  }
  Objective f(spec, params, target, opt);
  Best best;
  if (params.dim() == 0) {
    const std::vector<double> none;
    consider(best, none, f(none));
  } else {
    std::mt19937_64 gen(opt.seed);
    const int per_restart = std::max(params.dim() + 1, opt.budget / opt.restarts);
    for (int r = 0; r < opt.restarts && f.evaluations + params.dim() + 1 <= opt.budget; ++r) {
      if (best.ev.violation == 0.0) break;
      std::vector<double> start = params.initial;
      if (r > 0) {
        for (int i = 0; i < params.dim(); ++i) {
          std::uniform_real_distribution<double> u(params.lower[i], params.upper[i]);
          start[i] = u(gen);
        }
      }
      nelder_mead(f, start, params, std::min(per_restart, opt.budget - f.evaluations), best);
    }
  }

  PinchResult res;
  res.family = family_name(spec);
  res.param_family = params.name;
  res.evaluations = f.evaluations;
  res.found_admissible = std::isfinite(best.ev.violation);
  if (res.found_admissible) {
    res.best_params = best.x;
    res.best_violation = best.ev.violation;
    res.min_K = best.ev.min_K;
    res.max_K = best.ev.max_K;
    res.message = best.ev.violation == 0.0 ? "target met" : "target not met";
  } else {
    res.message = "no admissible parameters found within budget";
  }
  return res;
}

}  // namespace warpcurv
