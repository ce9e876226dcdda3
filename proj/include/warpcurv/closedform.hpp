#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "warpcurv/family.hpp"
#include "warpcurv/jet.hpp"
#include "warpcurv/tensor.hpp"

namespace warpcurv {

using WarpJets = std::span<const Jet2>;
using ComponentFormula = std::function<double(WarpJets)>;

// Independent components of a curvature tensor as formulas over warp jets.
class ComponentFormulaSet {
 public:
  struct Entry {
    std::array<int, 4> index;
    ComponentFormula formula;
    std::string label;
  };
  struct Image {
    std::array<int, 4> index;
    double sign;
    std::size_t entry;
  };

  ComponentFormulaSet(std::string family, int dim) : family_(std::move(family)), dim_(dim) {}

  void add(std::array<int, 4> index, ComponentFormula formula, std::string label);

  const std::string& family() const { return family_; }
  int dim() const { return dim_; }
  const std::vector<Entry>& entries() const { return entries_; }

  // The eight symmetry images of every entry. Throws ConfigError if two
  // distinct entries claim the same slot.
  std::vector<Image> completion() const;

  // Evaluates each entry once and writes its images.
  CurvatureTensor evaluate(WarpJets jets, Point p = {}) const;
  // Evaluates the completed list slot by slot.
  CurvatureTensor evaluate_completed(WarpJets jets, Point p = {}) const;

 private:
  std::string family_;
  int dim_;
  std::vector<Entry> entries_;
};

// Warp jet order follows the family: H (h, v); CH/H (h, h_r, v); CH/CH (h, v, v_r).
ComponentFormulaSet formulas_H(int n, int k);
ComponentFormulaSet formulas_CH_H(int n = 3);
ComponentFormulaSet formulas_CH_CH(int n = 5, int k = 2);
ComponentFormulaSet formulas_for(const FamilySpec& spec);

CurvatureTensor curvature_H(const Jet2& h, const Jet2& v, int n, int k);
CurvatureTensor curvature_CH_H(const Jet2& h, const Jet2& h_r, const Jet2& v, int n = 3);
CurvatureTensor curvature_CH_CH(const Jet2& h, const Jet2& v, const Jet2& v_r, int n = 5,
                                int k = 2);
CurvatureTensor closed_form_curvature(const FamilySpec& spec, WarpJets jets, Point p = {});

// Complex structures of the model frames for general dimensions.
JStructure ch_h_structure(int n);
JStructure ch_ch_structure(int n, int k);
JStructure structure_for(const FamilySpec& spec);

// Five-term curvature of a complex hyperbolic metric written with J, times scale.
CurvatureTensor j_formula_tensor(const JStructure& J, double scale = 1.0);

// Tabulated model constants (-4 holomorphic, -1 other planes, -2/-1/+1 on
// J-paired quadruples), checked against the J formula. Throws NumericError on
// a mismatch above 1e-12.
CurvatureTensor ambient_constants(const FamilySpec& spec);

}  // namespace warpcurv
