#include "warpcurv/engine.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "warpcurv/closedform.hpp"
#include "warpcurv/errors.hpp"

namespace warpcurv {
namespace {

struct Cube {
  int d;
  std::size_t operator()(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * d + j) * d + k;
  }
};

void require_finite(const CurvatureTensor& R, const char* what) {
  for (double v : R.data()) {
    if (!std::isfinite(v)) throw NumericError(std::string("non-finite component in ") + what);
  }
}

std::vector<double> values_of(std::span<const Field> f) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].v;
  return out;
}

// Gamma values at p from bracket values only.
std::vector<double> gamma_values(const MetricFamily& fam, Point p) {
  const auto jets = fam.warp_jets(p.r);
  return values_of(koszul_fields(fam.dim, bracket_fields(fam, jets, p)));
}

std::vector<double> richardson_partial(const std::function<std::vector<double>(double)>& g,
                                       double x) {
  constexpr double step = 1e-5;
  auto central = [&](double s) {
    const auto up = g(x + s);
    const auto dn = g(x - s);
    std::vector<double> out(up.size());
    for (std::size_t i = 0; i < up.size(); ++i) out[i] = (up[i] - dn[i]) / (2.0 * s);
    return out;
  };
  const auto coarse = central(step);
  const auto fine = central(step / 2);
  std::vector<double> out(coarse.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  return out;
}

}  // namespace

double ConnectionTable::metric_defect() const {
  double worst = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) worst = std::max(worst, std::abs((*this)(i, j, k) + (*this)(i, k, j)));
  return worst;
}

std::vector<Field> koszul_fields(int dim, std::span<const Field> C) {
  const Cube at{dim};
  std::vector<Field> G(C.size());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        G[at(i, j, k)] = -0.5 * (C[at(j, k, i)] + C[at(i, k, j)] + C[at(j, i, k)]);
  return G;
}

ConnectionTable koszul_connection(const MetricFamily& fam, Point p) {
  const auto C = bracket_fields(fam, p);
  ConnectionTable table{fam.dim, p, values_of(koszul_fields(fam.dim, C))};
  return table;
}

CurvatureTensor curvature_from_connection(const MetricFamily& fam, Point p, DerivativeMode mode) {
  fam.check_point(p);
  const int d = fam.dim;
  const Cube at{d};
  const auto jets = fam.warp_jets(p.r);
  const auto Cf = bracket_fields(fam, jets, p);
  const auto Gf = koszul_fields(d, Cf);
  const auto C = values_of(Cf);
  const auto G = values_of(Gf);

  if (mode == DerivativeMode::Auto) {
    mode = fam.exact_derivatives() ? DerivativeMode::Jet : DerivativeMode::CentralDifference;
  }
  std::vector<double> dGr(G.size()), dGt(G.size(), 0.0);
  if (mode == DerivativeMode::Jet) {
    for (std::size_t i = 0; i < G.size(); ++i) {
      dGr[i] = Gf[i].dr;
      dGt[i] = Gf[i].dt;
    }
  } else {
    dGr = richardson_partial([&](double r) { return gamma_values(fam, {r, p.theta}); }, p.r);
    if (fam.chart.theta >= 0) {
      dGt = richardson_partial([&](double t) { return gamma_values(fam, {p.r, t}); }, p.theta);
    }
  }

  // Y_q(f) = a_q df/dr + b_q df/dtheta.
  std::vector<double> a(d, 0.0), b(d, 0.0);
  a[fam.chart.radial] = 1.0;
  if (fam.chart.theta >= 0) b[fam.chart.theta] = 1.0 / fam.coefficient_jet(jets, fam.chart.theta).value;
  auto Y = [&](int q, std::size_t slot) { return a[q] * dGr[slot] + b[q] * dGt[slot]; };

  CurvatureTensor R(d, "Y", p);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = Y(j, at(i, k, l)) - Y(i, at(j, k, l));
          for (int m = 0; m < d; ++m) {
            s += G[at(i, k, m)] * G[at(j, m, l)] - G[at(j, k, m)] * G[at(i, m, l)] +
                 C[at(i, j, m)] * G[at(m, k, l)];
          }
          R(i, j, k, l) = s;
        }
  require_finite(R, "curvature_from_connection");
  return R;
}

CurvatureTensor belegradek_assemble(const CurvatureTensor& levelset, std::span<const Jet2> coeff,
                                    std::span<const Field> brackets, int radial, Point p) {
  const int d = levelset.dim();
  if (static_cast<int>(coeff.size()) != d) throw ConfigError("coefficient count mismatch");
  const Cube at{d};
  std::vector<double> lambda(d, 0.0), second(d, 0.0);
  for (int i = 0; i < d; ++i) {
    if (i == radial) continue;
    if (!(coeff[i].value > 0.0)) throw DomainError("non-positive warping coefficient");
    lambda[i] = coeff[i].d1 / coeff[i].value;
    second[i] = coeff[i].d2 / coeff[i].value;
  }
  auto C = [&](int x, int y, int z) { return brackets[at(x, y, z)].v; };

  CurvatureTensor R(d, "Y", p);
  for (int i = 0; i < d; ++i) {
    if (i == radial) continue;
    for (int j = 0; j < d; ++j) {
      if (j == radial) continue;
      for (int k = 0; k < d; ++k) {
        if (k == radial) continue;
        // One radial slot: mixed formula with log-derivative weights.
        const double v = 0.5 * (C(i, k, j) * (lambda[j] - lambda[k]) +
                                C(j, i, k) * (lambda[k] - lambda[j]) +
                                C(j, k, i) * (2.0 * lambda[i] - lambda[j] - lambda[k]));
        R(radial, i, j, k) = v;
        R(i, radial, j, k) = -v;
        R(j, k, radial, i) = v;
        R(j, k, i, radial) = -v;
        for (int l = 0; l < d; ++l) {
          if (l == radial) continue;
          // No radial slot: level-set tensor plus the diagonal Gauss term.
          double gauss = 0.0;
          if (i == k && j == l) gauss -= lambda[i] * lambda[j];
          if (i == l && j == k) gauss += lambda[i] * lambda[j];
          R(i, j, k, l) = levelset(i, j, k, l) + gauss;
        }
      }
    }
    // Two radial slots: only the radial sectional planes survive.
    R.set_with_symmetries(i, radial, i, radial, -second[i]);
  }
  require_finite(R, "belegradek_assemble");
  return R;
}

double ATensor::alternation_defect() const {
  double worst = 0.0;
  for (int i = 0; i < horizontal_dim; ++i)
    for (int j = 0; j < horizontal_dim; ++j) {
      const std::size_t s = static_cast<std::size_t>(i) * horizontal_dim + j;
      worst = std::max(worst, std::abs(vh[s] + hv[s]));
    }
  return worst;
}

ATensor a_tensor(const MetricFamily& fam, Point p) {
  if (fam.kind != FamilyKind::CH_CH) throw ConfigError("A-tensor is defined for family CH-CH");
  const auto C = bracket_fields(fam, p);
  const Cube at{fam.dim};
  ATensor A;
  A.horizontal_dim = 8;
  A.vertical = 8;
  A.hv.assign(64, 0.0);
  A.vh.assign(64, 0.0);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const double c = C[at(i, j, 8)].v;
      A.hv[i * 8 + j] = 0.5 * c;
      A.vh[i * 8 + j] = -0.5 * c;
    }
  return A;
}

CurvatureTensor submersion_curvature(const MetricFamily& fam, Point p) {
  if (fam.kind != FamilyKind::CH_CH) throw ConfigError("submersion path is defined for family CH-CH");
  fam.check_point(p);
  const auto jets = fam.warp_jets(p.r);
  const double h = fam.coefficient_jet(jets, 0).value;
  const double v = fam.coefficient_jet(jets, 4).value;
  const ATensor A = a_tensor(fam, p);

  const std::pair<int, int> pairs[] = {{0, 1}, {2, 3}};
  const JStructure J4 = JStructure::from_pairs(4, pairs);
  const CurvatureTensor base_ch = j_formula_tensor(J4, 1.0 / (h * h));
  const CurvatureTensor base_cp = j_formula_tensor(J4, -1.0 / (v * v));
  auto base = [&](int x, int y, int z, int w) {
    if (x < 4 && y < 4 && z < 4 && w < 4) return base_ch(x, y, z, w);
    if (x >= 4 && y >= 4 && z >= 4 && w >= 4) return base_cp(x - 4, y - 4, z - 4, w - 4);
    return 0.0;
  };
  auto hv = [&](int x, int y) { return A.hv[x * 8 + y]; };
  auto vh = [&](int x, int y) { return A.vh[x * 8 + y]; };

  CurvatureTensor R(fam.dim, "Y", p);
  const int V = A.vertical;
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      for (int z = 0; z < 8; ++z)
        for (int w = 0; w < 8; ++w) {
          R(x, y, z, w) = base(x, y, z, w) - 2.0 * hv(x, y) * hv(z, w) + hv(y, z) * hv(x, w) -
                          hv(x, z) * hv(y, w);
        }
      double s = 0.0;
      for (int j = 0; j < 8; ++j) s += vh(x, j) * vh(y, j);
      R(x, V, y, V) = s;
      R(V, x, y, V) = -s;
      R(x, V, V, y) = -s;
      R(V, x, V, y) = s;
    }
  require_finite(R, "submersion_curvature");
  return R;
}

double nijenhuis_residual(std::span<const Field> C, const JStructure& J) {
  const int d = J.dim();
  const Cube at{d};
  auto bracket = [&](int a, int b, double scale, std::vector<double>& out) {
    for (int k = 0; k < d; ++k) out[k] += scale * C[at(a, b, k)].v;
  };
  auto applyJ = [&](const std::vector<double>& w) {
    std::vector<double> out(d, 0.0);
    for (int m = 0; m < d; ++m) out[J.perm[m]] += J.sign[m] * w[m];
    return out;
  };
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const int ja = J.perm[a], jb = J.perm[b];
      const double sa = J.sign[a], sb = J.sign[b];
      std::vector<double> n(d, 0.0), inner(d, 0.0);
      bracket(a, b, 1.0, n);
      bracket(ja, jb, -sa * sb, n);
      bracket(ja, b, sa, inner);
      bracket(a, jb, sb, inner);
      const auto Jinner = applyJ(inner);
      for (int k = 0; k < d; ++k) worst = std::max(worst, std::abs(n[k] + Jinner[k]));
    }
  return worst;
}

double nijenhuis_residual(const MetricFamily& fam, Point p) {
  if (!fam.J) throw ConfigError("family " + fam.name() + " has no complex structure");
  const auto C = bracket_fields(fam, p);
  return nijenhuis_residual(C, *fam.J);
}

StructureConstantFit rederive_structure_constants(const MetricFamily& fam, double r) {
  if (fam.kind != FamilyKind::CH_CH || !fam.J) {
    throw ConfigError("structure-constant fit is defined for family CH-CH");
  }
  const int d = fam.dim;
  const int rho = fam.radial();
  const int fiber = 8;
  const auto jets = fam.warp_jets(r);
  std::vector<double> c(d), lambda(d, 0.0);
  for (int i = 0; i < d; ++i) {
    const Jet2 j = fam.coefficient_jet(jets, i);
    c[i] = j.value;
    if (i != rho) lambda[i] = j.d1 / j.value;
  }
  const CurvatureTensor ambient = j_formula_tensor(*fam.J);

  std::vector<std::pair<int, int>> unknowns;
  std::vector<int> slot(64, -1);
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b) {
      slot[a * 8 + b] = static_cast<int>(unknowns.size());
      unknowns.emplace_back(a, b);
    }
  const int nu = static_cast<int>(unknowns.size());

  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (int i = 0; i < rho; ++i)
    for (int j = 0; j < rho; ++j)
      for (int k = 0; k < rho; ++k) {
        std::vector<double> row(nu, 0.0);
        bool any = false;
        // Contribution of <[Y_x,Y_y],Y_z> under the ansatz [X_a,X_b] = c_ab X_9.
        auto term = [&](int x, int y, int z, double weight) {
          if (z != fiber || x >= 8 || y >= 8 || x == y) return;
          const int a = std::min(x, y), b = std::max(x, y);
          const double sgn = x < y ? 1.0 : -1.0;
          row[slot[a * 8 + b]] += 0.5 * weight * sgn * c[fiber] / (c[x] * c[y]);
          any = true;
        };
        term(i, k, j, lambda[j] - lambda[k]);
        term(j, i, k, lambda[k] - lambda[j]);
        term(j, k, i, 2.0 * lambda[i] - lambda[j] - lambda[k]);
        const double b = ambient(rho, i, j, k);
        if (!any && std::abs(b) < 1e-14) continue;
        rows.push_back(std::move(row));
        rhs.push_back(b);
      }

  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), nu);
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t e = 0; e < rows.size(); ++e) {
    for (int u = 0; u < nu; ++u) M(static_cast<Eigen::Index>(e), u) = rows[e][u];
    y(static_cast<Eigen::Index>(e)) = rhs[e];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  qr.setThreshold(1e-12);
  StructureConstantFit fit;
  fit.unknowns = nu;
  fit.rank = static_cast<int>(qr.rank());
  if (fit.rank < nu) throw NumericError("singular structure-constant system");
  const Eigen::VectorXd x = qr.solve(y);
  fit.residual = (M * x - y).cwiseAbs().maxCoeff();
  fit.c.assign(64, 0.0);
  for (int u = 0; u < nu; ++u) {
    const auto [a, b] = unknowns[u];
    fit.c[a * 8 + b] = x(u);
    fit.c[b * 8 + a] = -x(u);
  }
  return fit;
}

CurvatureTensor compute_curvature(const MetricFamily& fam, Point p) {
  fam.check_point(p);
  switch (fam.kind) {
    case FamilyKind::H: {
      const auto jets = fam.warp_jets(p.r);
      std::vector<Jet2> coeff(fam.dim);
      for (int i = 0; i < fam.dim; ++i) coeff[i] = fam.coefficient_jet(jets, i);
      return belegradek_assemble(levelset_space_form(fam, jets, p), coeff,
                                 bracket_fields(fam, jets, p), fam.radial(), p);
    }
    case FamilyKind::CH_H: return curvature_from_connection(fam, p);
    case FamilyKind::CH_CH: {
      const auto jets = fam.warp_jets(p.r);
      std::vector<Jet2> coeff(fam.dim);
      for (int i = 0; i < fam.dim; ++i) coeff[i] = fam.coefficient_jet(jets, i);
      return belegradek_assemble(submersion_curvature(fam, p), coeff, bracket_fields(fam, jets, p),
                                 fam.radial(), p);
    }
  }
  throw ConfigError("unknown family");
}

}  // namespace warpcurv
