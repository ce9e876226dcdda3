#pragma once

#include <span>
#include <utility>
#include <vector>

#include "warpcurv/family.hpp"
#include "warpcurv/tensor.hpp"

namespace warpcurv {

// Gamma(i,j,k) = <nabla_{Y_i} Y_j, Y_k> at a point.
struct ConnectionTable {
  int dim = 0;
  Point point{};
  std::vector<double> gamma;

  double operator()(int i, int j, int k) const {
    return gamma[(static_cast<std::size_t>(i) * dim + j) * dim + k];
  }
  // Max |Gamma(i,j,k) + Gamma(i,k,j)|.
  double metric_defect() const;
};

// Koszul formula in an orthonormal frame applied to bracket fields; partials
// propagate linearly.
std::vector<Field> koszul_fields(int dim, std::span<const Field> brackets);
ConnectionTable koszul_connection(const MetricFamily& fam, Point p);

enum class DerivativeMode { Auto, Jet, CentralDifference };

CurvatureTensor curvature_from_connection(const MetricFamily& fam, Point p,
                                          DerivativeMode mode = DerivativeMode::Auto);

// Warped-product assembly of the full tensor from the level-set tensor (same
// dimension, radial slots ignored), the coefficient jets of each frame index
// and the level-set bracket values.
CurvatureTensor belegradek_assemble(const CurvatureTensor& levelset, std::span<const Jet2> coeff,
                                    std::span<const Field> brackets, int radial, Point p);

// O'Neill A-tensor of the fibration of a CH/CH level set over CH^2 x CP^2.
struct ATensor {
  int horizontal_dim = 8;
  int vertical = 8;
  // hv[i*8 + j] = <A_{Y_i} Y_j, Y_vertical>, vh[i*8 + j] = <A_{Y_i} Y_vertical, Y_j>.
  std::vector<double> hv;
  std::vector<double> vh;

  double alternation_defect() const;
};

ATensor a_tensor(const MetricFamily& fam, Point p);
CurvatureTensor submersion_curvature(const MetricFamily& fam, Point p);

// Max-abs frame component of N(Y_a,Y_b) = [X,Y] + J[JX,Y] + J[X,JY] - [JX,JY]
// over all frame pairs.
double nijenhuis_residual(std::span<const Field> brackets, const JStructure& J);
double nijenhuis_residual(const MetricFamily& fam, Point p);

struct StructureConstantFit {
  // c[a*8 + b] for the eight horizontal X-frame indices, antisymmetric.
  std::vector<double> c;
  int rank = 0;
  int unknowns = 0;
  double residual = 0.0;

  double operator()(int a, int b) const { return c[static_cast<std::size_t>(a) * 8 + b]; }
};

// Least-squares solve of the radial-mixed assembly relations for the
// horizontal structure constants, with the ambient tensor from J as data.
StructureConstantFit rederive_structure_constants(const MetricFamily& fam, double r);

// Dispatcher: H uses the space-form level set and assembly, CH/H the Koszul
// path, CH/CH the submersion level set and assembly.
CurvatureTensor compute_curvature(const MetricFamily& fam, Point p);

}  // namespace warpcurv
