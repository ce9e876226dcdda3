#include "warpcurv/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "warpcurv/errors.hpp"

namespace warpcurv {
namespace {

using Index = std::array<int, 4>;

std::array<std::pair<Index, double>, 8> images(const Index& x) {
  const auto [i, j, k, l] = x;
  return {{{{i, j, k, l}, 1.0},
           {{j, i, k, l}, -1.0},
           {{i, j, l, k}, -1.0},
           {{j, i, l, k}, 1.0},
           {{k, l, i, j}, 1.0},
           {{l, k, i, j}, -1.0},
           {{k, l, j, i}, -1.0},
           {{l, k, j, i}, 1.0}}};
}

double sq(double x) { return x * x; }

// Pairs (i, j) with J e_j = e_i, in increasing order of i.
std::vector<std::pair<int, int>> j_pairs(const JStructure& J) {
  std::vector<std::pair<int, int>> out;
  for (int b = 0; b < J.dim(); ++b) {
    if (J.sign[b] == 1) out.emplace_back(J.perm[b], b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// R_ijkl = X, R_ikjl = X/2, R_iljk = -X/2 for pairs (i,j), (k,l).
void add_triple(ComponentFormulaSet& set, std::pair<int, int> P, std::pair<int, int> Q,
                const ComponentFormula& X, const std::string& label) {
  const auto [i, j] = P;
  const auto [k, l] = Q;
  set.add({i, j, k, l}, X, label);
  set.add({i, k, j, l}, [X](WarpJets w) { return 0.5 * X(w); }, label + "/2");
  set.add({i, l, j, k}, [X](WarpJets w) { return -0.5 * X(w); }, "-" + label + "/2");
}

}  // namespace

void ComponentFormulaSet::add(std::array<int, 4> index, ComponentFormula formula,
                              std::string label) {
  for (int x : index) {
    if (x < 0 || x >= dim_) throw ConfigError("formula index out of range");
  }
  entries_.push_back({index, std::move(formula), std::move(label)});
}

std::vector<ComponentFormulaSet::Image> ComponentFormulaSet::completion() const {
  std::map<Index, std::pair<std::size_t, double>> owner;
  std::vector<Image> out;
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    for (const auto& [idx, sign] : images(entries_[e].index)) {
      auto it = owner.find(idx);
      if (it != owner.end()) {
        if (it->second.first != e) {
          std::ostringstream os;
          os << family_ << ": formulas '" << entries_[it->second.first].label << "' and '"
             << entries_[e].label << "' collide at (" << idx[0] + 1 << "," << idx[1] + 1 << ","
             << idx[2] + 1 << "," << idx[3] + 1 << ")";
          throw ConfigError(os.str());
        }
        if (it->second.second != sign) throw ConfigError(family_ + ": self-inconsistent pattern");
        continue;
      }
      owner.emplace(idx, std::make_pair(e, sign));
      out.push_back({idx, sign, e});
    }
  }
  return out;
}

CurvatureTensor ComponentFormulaSet::evaluate(WarpJets jets, Point p) const {
  CurvatureTensor R(dim_, "Y", p);
  for (const auto& e : entries_) {
    const auto [i, j, k, l] = e.index;
    R.set_with_symmetries(i, j, k, l, e.formula(jets));
  }
  return R;
}

CurvatureTensor ComponentFormulaSet::evaluate_completed(WarpJets jets, Point p) const {
  CurvatureTensor R(dim_, "Y", p);
  for (const auto& im : completion()) {
    const auto [i, j, k, l] = im.index;
    R(i, j, k, l) = im.sign * entries_[im.entry].formula(jets);
  }
  return R;
}

ComponentFormulaSet formulas_H(int n, int k) {
  if (n < 2 || k < 0 || k > n - 2) throw ConfigError("H:n,k needs n >= 2 and 0 <= k <= n-2");
  ComponentFormulaSet set(family_name({FamilyKind::H, n, k}), n);
  const int rho = n - 1;
  auto is_base = [k](int i) { return i < k; };
  for (int a = 0; a < rho; ++a) {
    for (int b = a + 1; b < rho; ++b) {
      if (is_base(a) && is_base(b)) {
        set.add({a, b, a, b}, [](WarpJets w) {
          const Jet2& h = w[0];
          return -1.0 / sq(h.value) - sq(h.d1 / h.value);
        }, "base");
      } else if (!is_base(a) && !is_base(b)) {
        set.add({a, b, a, b}, [](WarpJets w) {
          const Jet2& v = w[1];
          return 1.0 / sq(v.value) - sq(v.d1 / v.value);
        }, "sphere");
      } else {
        set.add({a, b, a, b}, [](WarpJets w) {
          return -w[0].d1 * w[1].d1 / (w[0].value * w[1].value);
        }, "base-sphere");
      }
    }
    if (is_base(a)) {
      set.add({a, rho, a, rho}, [](WarpJets w) { return -w[0].d2 / w[0].value; }, "base-radial");
    } else {
      set.add({a, rho, a, rho}, [](WarpJets w) { return -w[1].d2 / w[1].value; }, "sphere-radial");
    }
  }
  return set;
}

ComponentFormulaSet formulas_CH_H(int n) {
  if (n < 2) throw ConfigError("CH-H:n needs n >= 2");
  const int dim = 2 * n;
  ComponentFormulaSet set(family_name({FamilyKind::CH_H, n, n}), dim);
  const int t = n - 1;
  const int rho = dim - 1;
  const int nb = n - 1;
  auto star = [n](int a) { return n + a; };

  auto f1212 = [](WarpJets w) {
    const Jet2& h = w[0];
    return -sq(h.d1 / h.value) - 1.0 / sq(h.value);
  };
  auto f4545 = [](WarpJets w) {
    const Jet2& v = w[2];
    return -sq(v.d1 / v.value) + 1.0 / sq(v.value);
  };
  auto f1515 = [](WarpJets w) { return -w[0].d1 * w[2].d1 / (w[0].value * w[2].value); };
  auto f1414 = [](WarpJets w) {
    const double h = w[0].value, hr = w[1].value, v = w[2].value;
    const double h2 = h * h, hr2 = hr * hr, v2 = v * v;
    return -w[2].d1 * w[0].d1 / (v * h) -
           (-v2 / (4 * h2 * hr2) - h2 / (4 * v2 * hr2) + 3 * hr2 / (4 * v2 * h2) - 1 / (2 * v2) +
            1 / (2 * h2) - 1 / (2 * hr2));
  };
  auto f3434 = [](WarpJets w) {
    const double h = w[0].value, hr = w[1].value, v = w[2].value;
    const double h2 = h * h, hr2 = hr * hr, v2 = v * v;
    return -w[2].d1 * w[1].d1 / (v * hr) -
           (-v2 / (4 * h2 * hr2) + 3 * h2 / (4 * v2 * hr2) - hr2 / (4 * v2 * h2) - 1 / (2 * v2) -
            1 / (2 * h2) + 1 / (2 * hr2));
  };
  auto f1313 = [](WarpJets w) {
    const double h = w[0].value, hr = w[1].value, v = w[2].value;
    const double h2 = h * h, hr2 = hr * hr, v2 = v * v;
    return -w[0].d1 * w[1].d1 / (h * hr) -
           (3 * v2 / (4 * h2 * hr2) - h2 / (4 * v2 * hr2) - hr2 / (4 * v2 * h2) + 1 / (2 * v2) +
            1 / (2 * h2) + 1 / (2 * hr2));
  };
  auto f1436 = [](WarpJets w) {
    const Jet2 &h = w[0], &hr = w[1], &v = w[2];
    return 1.0 / (2 * hr.value) * ((h / v).d1 - (v / h).d1 - (hr * hr / (v * h)).d1);
  };
  auto f1634 = [](WarpJets w) {
    const Jet2 &h = w[0], &hr = w[1], &v = w[2];
    return 1.0 / (2 * h.value) * (-(hr / v).d1 + (v / hr).d1 + (h * h / (v * hr)).d1);
  };
  auto f1346 = [](WarpJets w) {
    const Jet2 &h = w[0], &hr = w[1], &v = w[2];
    return -1.0 / (2 * v.value) * ((h / hr).d1 + (hr / h).d1 + (v * v / (h * hr)).d1);
  };
  auto f1425 = [](WarpJets w) {
    const double h2 = sq(w[0].value), hr2 = sq(w[1].value), v2 = sq(w[2].value);
    return 1 / (2 * v2) - 1 / (2 * h2) - hr2 / (2 * h2 * v2);
  };
  auto f1245 = [](WarpJets w) {
    const double h2 = sq(w[0].value), hr2 = sq(w[1].value), v2 = sq(w[2].value);
    return -0.25 * (h2 / (hr2 * v2) + hr2 / (h2 * v2) + v2 / (h2 * hr2) + 2 / h2 + 2 / hr2 -
                    2 / v2);
  };
  auto f1524 = [](WarpJets w) {
    const double h2 = sq(w[0].value), hr2 = sq(w[1].value), v2 = sq(w[2].value);
    return -0.25 * (-h2 / (hr2 * v2) + hr2 / (h2 * v2) - v2 / (h2 * hr2) - 2 / hr2);
  };

  for (int a = 0; a < nb; ++a) {
    for (int b = a + 1; b < nb; ++b) set.add({a, b, a, b}, f1212, "1212");
    for (int c = n; c < rho; ++c) {
      if (c == star(a)) {
        set.add({a, c, a, c}, f1414, "1414");
      } else {
        set.add({a, c, a, c}, f1515, "1515");
      }
    }
    set.add({a, t, a, t}, f1313, "1313");
    set.add({a, rho, a, rho}, [](WarpJets w) { return -w[0].d2 / w[0].value; }, "1616");
    set.add({a, star(a), t, rho}, f1436, "1436");
    set.add({a, rho, t, star(a)}, f1634, "1634");
    set.add({a, t, star(a), rho}, f1346, "1346");
    for (int b = a + 1; b < nb; ++b) {
      set.add({a, star(a), b, star(b)}, f1425, "1425");
      set.add({a, b, star(a), star(b)}, f1245, "1245");
      set.add({a, star(b), b, star(a)}, f1524, "1524");
    }
  }
  for (int c = n; c < rho; ++c) {
    for (int d = c + 1; d < rho; ++d) set.add({c, d, c, d}, f4545, "4545");
    set.add({t, c, t, c}, f3434, "3434");
    set.add({c, rho, c, rho}, [](WarpJets w) { return -w[2].d2 / w[2].value; }, "4646");
  }
  set.add({t, rho, t, rho}, [](WarpJets w) { return -w[1].d2 / w[1].value; }, "3636");
  return set;
}

ComponentFormulaSet formulas_CH_CH(int n, int k) {
  if (n < 2 || k < 0 || k > n - 1) throw ConfigError("CH-CH:n,k needs n >= 2 and 0 <= k <= n-1");
  const int dim = 2 * n;
  const int m = n - k - 1;
  const int f = dim - 2;
  const int rho = dim - 1;
  ComponentFormulaSet set(family_name({FamilyKind::CH_CH, n, k}), dim);
  auto is_base = [k](int i) { return i < 2 * k; };
  const int nt = 2 * k + 2 * m;  // tangential indices other than the fiber

  for (int a = 0; a < nt; ++a) {
    for (int b = a + 1; b < nt; ++b) {
      const bool paired = (a % 2 == 0) && b == a + 1;
      if (is_base(a) && is_base(b)) {
        if (paired) {
          set.add({a, b, a, b}, [](WarpJets w) {
            const Jet2& h = w[0];
            const double vr = w[2].value;
            return -sq(h.d1 / h.value) - 4 / sq(h.value) - 3 * vr * vr / (4 * std::pow(h.value, 4));
          }, "1212");
        } else {
          set.add({a, b, a, b}, [](WarpJets w) {
            const Jet2& h = w[0];
            return -sq(h.d1 / h.value) - 1 / sq(h.value);
          }, "1313");
        }
      } else if (!is_base(a) && !is_base(b)) {
        if (paired) {
          set.add({a, b, a, b}, [](WarpJets w) {
            const Jet2& v = w[1];
            const double vr = w[2].value;
            return -sq(v.d1 / v.value) + 4 / sq(v.value) - 3 * vr * vr / (4 * std::pow(v.value, 4));
          }, "5656");
        } else {
          set.add({a, b, a, b}, [](WarpJets w) {
            const Jet2& v = w[1];
            return -sq(v.d1 / v.value) + 1 / sq(v.value);
          }, "5757");
        }
      } else {
        set.add({a, b, a, b}, [](WarpJets w) {
          return -w[0].d1 * w[1].d1 / (w[0].value * w[1].value);
        }, "ikik");
      }
    }
    if (is_base(a)) {
      set.add({a, f, a, f}, [](WarpJets w) {
        const Jet2 &h = w[0], &vr = w[2];
        return -h.d1 * vr.d1 / (h.value * vr.value) + vr.value * vr.value / (4 * std::pow(h.value, 4));
      }, "i9i9");
      set.add({a, rho, a, rho}, [](WarpJets w) { return -w[0].d2 / w[0].value; }, "i10i10");
    } else {
      set.add({a, f, a, f}, [](WarpJets w) {
        const Jet2 &v = w[1], &vr = w[2];
        return -v.d1 * vr.d1 / (v.value * vr.value) + vr.value * vr.value / (4 * std::pow(v.value, 4));
      }, "k9k9");
      set.add({a, rho, a, rho}, [](WarpJets w) { return -w[1].d2 / w[1].value; }, "k10k10");
    }
  }
  set.add({f, rho, f, rho}, [](WarpJets w) { return -w[2].d2 / w[2].value; }, "9,10,9,10");

  std::vector<std::pair<int, int>> base_pairs, cp_pairs;
  for (int a = 0; a < 2 * k; a += 2) base_pairs.emplace_back(a, a + 1);
  for (int a = 2 * k; a < nt; a += 2) cp_pairs.emplace_back(a, a + 1);
  const std::pair<int, int> radial_pair{f, rho};

  const ComponentFormula base_base = [](WarpJets w) {
    const double h = w[0].value, vr = w[2].value;
    return -2 / (h * h) - vr * vr / (2 * std::pow(h, 4));
  };
  const ComponentFormula cp_cp = [](WarpJets w) {
    const double v = w[1].value, vr = w[2].value;
    return 2 / (v * v) - vr * vr / (2 * std::pow(v, 4));
  };
  const ComponentFormula base_cp = [](WarpJets w) {
    const double h = w[0].value, v = w[1].value, vr = w[2].value;
    return -vr * vr / (2 * h * h * v * v);
  };
  const ComponentFormula base_radial = [](WarpJets w) {
    const Jet2 &h = w[0], &vr = w[2];
    return -vr.value / sq(h.value) * (vr.d1 / vr.value - h.d1 / h.value);
  };
  const ComponentFormula cp_radial = [](WarpJets w) {
    const Jet2 &v = w[1], &vr = w[2];
    return -vr.value / sq(v.value) * (vr.d1 / vr.value - v.d1 / v.value);
  };

  for (std::size_t p = 0; p < base_pairs.size(); ++p) {
    for (std::size_t q = p + 1; q < base_pairs.size(); ++q)
      add_triple(set, base_pairs[p], base_pairs[q], base_base, "1234");
    for (const auto& Q : cp_pairs) add_triple(set, base_pairs[p], Q, base_cp, "ijkl");
    add_triple(set, base_pairs[p], radial_pair, base_radial, "ij9,10");
  }
  for (std::size_t p = 0; p < cp_pairs.size(); ++p) {
    for (std::size_t q = p + 1; q < cp_pairs.size(); ++q)
      add_triple(set, cp_pairs[p], cp_pairs[q], cp_cp, "5678");
    add_triple(set, cp_pairs[p], radial_pair, cp_radial, "kl9,10");
  }
  return set;
}

ComponentFormulaSet formulas_for(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::H: return formulas_H(spec.n, spec.k);
    case FamilyKind::CH_H: return formulas_CH_H(spec.n);
    case FamilyKind::CH_CH: return formulas_CH_CH(spec.n, spec.k);
  }
  throw ConfigError("unknown family");
}

CurvatureTensor curvature_H(const Jet2& h, const Jet2& v, int n, int k) {
  const Jet2 jets[] = {h, v};
  return formulas_H(n, k).evaluate(jets);
}

CurvatureTensor curvature_CH_H(const Jet2& h, const Jet2& h_r, const Jet2& v, int n) {
  const Jet2 jets[] = {h, h_r, v};
  return formulas_CH_H(n).evaluate(jets);
}

CurvatureTensor curvature_CH_CH(const Jet2& h, const Jet2& v, const Jet2& v_r, int n, int k) {
  const Jet2 jets[] = {h, v, v_r};
  return formulas_CH_CH(n, k).evaluate(jets);
}

CurvatureTensor closed_form_curvature(const FamilySpec& spec, WarpJets jets, Point p) {
  return formulas_for(spec).evaluate(jets, p);
}

JStructure ch_h_structure(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n - 1; ++a) pairs.emplace_back(a, n + a);
  pairs.emplace_back(n - 1, 2 * n - 1);
  return JStructure::from_pairs(2 * n, pairs);
}

JStructure ch_ch_structure(int n, int /*k*/) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < 2 * n; a += 2) pairs.emplace_back(a, a + 1);
  return JStructure::from_pairs(2 * n, pairs);
}

JStructure structure_for(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::CH_H: return ch_h_structure(spec.n);
    case FamilyKind::CH_CH: return ch_ch_structure(spec.n, spec.k);
    case FamilyKind::H: break;
  }
  throw ConfigError("family H has no complex structure");
}

CurvatureTensor j_formula_tensor(const JStructure& J, double scale) {
  J.validate();
  const int d = J.dim();
  const std::vector<double> M = J.matrix();
  auto m = [&](int a, int b) { return M[static_cast<std::size_t>(a) * d + b]; };
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  CurvatureTensor R(d, "Y");
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int w = 0; w < d; ++w) {
          const double v = delta(x, w) * delta(y, z) - delta(x, z) * delta(y, w) +
                           m(x, w) * m(y, z) - m(x, z) * m(y, w) + 2.0 * m(x, y) * m(w, z);
          R(x, y, z, w) = scale * v;
        }
  return R;
}

CurvatureTensor ambient_constants(const FamilySpec& spec) {
  const JStructure J = structure_for(spec);
  const int d = J.dim();
  const auto pairs = j_pairs(J);
  auto paired = [&](int a, int b) {
    for (auto [i, j] : pairs)
      if ((i == a && j == b) || (i == b && j == a)) return true;
    return false;
  };
  CurvatureTensor table(d, "Y");
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) table.set_with_symmetries(a, b, a, b, paired(a, b) ? -4.0 : -1.0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t q = p + 1; q < pairs.size(); ++q) {
      const auto [i, j] = pairs[p];
      const auto [k, l] = pairs[q];
      table.set_with_symmetries(i, j, k, l, -2.0);
      table.set_with_symmetries(i, k, j, l, -1.0);
      table.set_with_symmetries(i, l, j, k, 1.0);
    }
  }
  const CurvatureTensor formula = j_formula_tensor(J);
  const double diff = table.max_abs_diff(formula);
  if (diff > 1e-12) {
    std::ostringstream os;
    os << family_name(spec) << ": tabulated model constants differ from the J formula by " << diff;
    throw NumericError(os.str());
  }
  return table;
}

}  // namespace warpcurv
