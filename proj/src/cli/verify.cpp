#include <algorithm>
#include <cmath>

#include "warpcurv/cli.hpp"
#include "warpcurv/closedform.hpp"
#include "warpcurv/engine.hpp"
#include "warpcurv/errors.hpp"

namespace warpcurv::cli {
namespace {

bool engine_supports(const FamilySpec& s) {
  switch (s.kind) {
    case FamilyKind::H: return true;
    case FamilyKind::CH_H: return s.n == 3;
    case FamilyKind::CH_CH: return s.n == 5 && s.k == 2;
  }
  return false;
}

CurvatureTensor constant_minus_one(int dim) {
  CurvatureTensor R(dim);
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b) R.set_with_symmetries(a, b, a, b, -1.0);
  return R;
}

std::vector<Jet2> jets_at(std::span<const WarpFunction> warps, double r) {
  std::vector<Jet2> out;
  for (const auto& w : warps) out.push_back(w.jet(r));
  return out;
}

class Recorder {
 public:
  Recorder(std::string name, double tol) {
    check_.name = std::move(name);
    check_.tol = tol;
  }
  void observe(double dev) {
    if (!std::isfinite(dev)) {
      check_.pass = false;
      check_.max_deviation = dev;
      return;
    }
    if (std::isfinite(check_.max_deviation)) check_.max_deviation = std::max(check_.max_deviation, dev);
  }
  void fail(std::string why) {
    check_.pass = false;
    check_.detail = std::move(why);
  }
  VerifyCheck done(std::string detail = {}) {
    if (!(check_.max_deviation <= check_.tol)) check_.pass = false;
    if (check_.detail.empty()) check_.detail = std::move(detail);
    return check_;
  }

 private:
  VerifyCheck check_;
};

}  // namespace

bool VerifyResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

VerifyResult run_verify(const FamilySpec& spec, const VerifyOptions& opt) {
  if (opt.grid.empty()) throw ConfigError("verify needs a nonempty grid");
  if (!(opt.tol > 0.0)) throw ConfigError("tolerance must be positive");
  VerifyResult res;
  res.family = family_name(spec);
  const auto model = model_warps(spec.kind);
  std::vector<CurvatureTensor> produced;
  const std::vector<double> thetas =
      spec.kind == FamilyKind::CH_H ? opt.thetas : std::vector<double>{std::numbers::pi / 2};

  // Model reduction against the constant-curvature or ambient tensors.
  {
    Recorder rec("model-reduction", opt.tol);
    const CurvatureTensor target =
        spec.kind == FamilyKind::H ? constant_minus_one(spec.n)
                                   : ambient_constants(spec);
    for (double r : opt.grid) {
      const auto R = closed_form_curvature(spec, jets_at(model, r), Point{r, thetas.front()});
      rec.observe(R.max_abs_diff(target));
      produced.push_back(R);
    }
    res.checks.push_back(rec.done("closed form with model warps"));
  }

  if (engine_supports(spec)) {
    const SignBranch branches[] = {SignBranch::Plus, SignBranch::Minus};
    const int nbranch = spec.kind == FamilyKind::CH_H ? 2 : 1;

    Recorder model_rec("cross-path-model", opt.tol);
    for (int b = 0; b < nbranch; ++b) {
      const MetricFamily fam = family_from_warps(spec, model, branches[b], opt.grid);
      for (double r : opt.grid)
        for (double th : thetas) {
          const Point p{r, th};
          const auto E = compute_curvature(fam, p);
          const auto C = closed_form_curvature(spec, jets_at(model, r), p);
          model_rec.observe(E.max_abs_diff(C));
          produced.push_back(E);
        }
    }
    res.checks.push_back(model_rec.done("engine path vs closed form, model warps"));

    Recorder rand_rec("cross-path-random", opt.tol);
    Recorder branch_rec("sign-branch-invariance", opt.tol);
    for (int s = 0; s < opt.random_sets; ++s) {
      const auto warps = random_admissible_warps(spec.kind, opt.seed * 1000003ULL + s);
      const MetricFamily plus = family_from_warps(spec, warps, SignBranch::Plus, opt.grid);
      const MetricFamily minus = family_from_warps(spec, warps, SignBranch::Minus, opt.grid);
      for (double r : opt.grid)
        for (double th : thetas) {
          const Point p{r, th};
          const auto E = compute_curvature(plus, p);
          const auto C = closed_form_curvature(spec, jets_at(warps, r), p);
          rand_rec.observe(E.max_abs_diff(C) / std::max(1.0, C.max_abs()));
          produced.push_back(E);
          if (spec.kind == FamilyKind::CH_H) branch_rec.observe(E.max_abs_diff(compute_curvature(minus, p)));
        }
    }
    res.checks.push_back(rand_rec.done("engine path vs closed form, " + std::to_string(opt.random_sets) +
                                       " random warp sets, relative"));
    if (spec.kind == FamilyKind::CH_H) res.checks.push_back(branch_rec.done("plus vs minus bracket tables"));

    if (spec.kind != FamilyKind::H) {
      Recorder nij("nijenhuis", opt.tol);
      for (int b = 0; b < nbranch; ++b) {
        const MetricFamily fam = family_from_warps(spec, model, branches[b]);
        for (double r : opt.grid)
          for (double th : thetas) nij.observe(nijenhuis_residual(fam, Point{r, th}));
      }
      res.checks.push_back(nij.done("model brackets"));
    }

    if (spec.kind == FamilyKind::CH_CH) {
      Recorder fit("structure-constants", opt.tol);
      const MetricFamily fam = make_model_family(spec);
      std::vector<double> mean(4, 0.0);
      for (double r : opt.grid) {
        const auto c = rederive_structure_constants(fam, r);
        if (c.rank != c.unknowns) fit.fail("rank deficient fit");
        for (int a = 0; a < 8; ++a)
          for (int b = a + 1; b < 8; ++b) {
            const double expect = (b == a + 1 && a % 2 == 0) ? 2.0 : 0.0;
            fit.observe(std::abs(c(a, b) - expect));
          }
        for (int q = 0; q < 4; ++q) mean[q] += c(2 * q, 2 * q + 1) / static_cast<double>(opt.grid.size());
      }
      res.structure_constants = mean;
      res.checks.push_back(fit.done("least-squares fit of 28 horizontal constants"));
    }
  }

  Recorder sym("symmetries", 1e-9);
  for (const auto& R : produced) sym.observe(std::max(R.symmetry_defect(), R.bianchi_defect()));
  res.checks.push_back(sym.done("pair symmetries and first Bianchi on " + std::to_string(produced.size()) +
                                " tensors"));
  return res;
}

}  // namespace warpcurv::cli
