#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "warpcurv/family.hpp"
#include "warpcurv/tensor.hpp"
#include "warpcurv/warp.hpp"

namespace warpcurv {

// K(u,w) = R(u,w,u,w) / (|u|^2 |w|^2 - <u,w>^2). Throws DomainError when the
// Gram determinant is below 1e-14.
double sectional(const CurvatureTensor& R, std::span<const double> u, std::span<const double> w);

struct Plane {
  std::vector<double> u;
  std::vector<double> w;
};

struct SectionalReport {
  double min_K = 0.0;
  double max_K = 0.0;
  Plane argmin;
  Plane argmax;
  int samples = 0;
  int refine_iters = 0;
  std::uint64_t seed = 0;
  std::string kernel;
};

struct ExtremalOptions {
  int samples = 10000;
  int refine_iters = 50;
  std::uint64_t seed = 1;
  int threads = 1;
  // Number of best candidates refined on each side.
  int refine_candidates = 8;
};

// Coordinate planes plus random Gaussian planes, then projected-gradient
// refinement of the best candidates. Sample i draws from its own stream, so
// results do not depend on the thread count.
SectionalReport extremal_sectional(const CurvatureTensor& R, const ExtremalOptions& opt = {});

struct ObstructionQuantity {
  std::string name;
  bool counts = true;  // false for informational columns
  std::vector<double> values;
};

struct CuspEntry {
  std::string warp;
  bool ok = true;
  std::string reason;
  std::vector<double> values;
  std::vector<double> derivatives;
};

struct CuspReport {
  bool ok = true;
  std::vector<double> probes;
  std::vector<CuspEntry> entries;
};

struct ObstructionReport {
  std::string family;
  std::vector<std::string> warps;
  std::vector<double> r_grid;
  std::vector<ObstructionQuantity> quantities;
  double tol = 0.0;
  bool violation = false;
  double violation_r = 0.0;
  std::string violation_component;
  std::optional<CuspReport> cusp;
};

// Evaluates the sign obstructions that apply to the family at every grid r.
ObstructionReport obstruction_scan(const FamilySpec& spec, std::span<const WarpFunction> warps,
                                   std::span<const double> r_grid, double tol = 0.0);

// probes must be strictly decreasing. Each warp and its derivative must shrink
// in magnitude along the probes and end below 1e-3.
CuspReport cusp_limit_check(std::span<const WarpFunction> warps,
                            std::span<const std::string> names, std::span<const double> probes);

enum class TailDirection { MinusInfinity, PlusInfinity };

struct VolumeWindow {
  double lo = 0.0;
  double hi = 0.0;
  double estimate = 0.0;
  double increment = 0.0;
  bool converged = false;
};

struct VolumeReport {
  std::string family;
  double r0 = 0.0;
  TailDirection direction = TailDirection::MinusInfinity;
  std::vector<std::pair<double, double>> samples;
  std::vector<VolumeWindow> windows;
  double estimate = 0.0;
  bool converged = false;
  std::string note;
};

// The radial volume density of the family (product of coefficients with
// multiplicity) at r.
double volume_density(const FamilySpec& spec, std::span<const Jet2> jets);

struct VolumeOptions {
  int max_windows = 12;
  double first_width = 1.0;
  double rel_tol = 1e-12;
};

VolumeReport volume_report(const FamilySpec& spec, std::span<const WarpFunction> warps, double r0,
                           TailDirection direction, const VolumeOptions& opt = {});

struct ParamFamily {
  std::string name;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> initial;
  std::function<std::vector<WarpFunction>(std::span<const double>)> make;
  int dim() const { return static_cast<int>(initial.size()); }
};

// Model warps, no parameters.
ParamFamily fixed_model_params(const FamilySpec& spec);
// Every warp equal to exp(alpha r), alpha in [0.05, 5].
ParamFamily exp_cusp_params(const FamilySpec& spec);
ParamFamily param_family_by_name(std::string_view name, const FamilySpec& spec);

struct PinchTarget {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

struct PinchOptions {
  double r_lo = 0.5;
  double r_hi = 2.0;
  int r_points = 5;
  double theta = std::numbers::pi / 2;
  int budget = 200;
  int restarts = 3;
  std::uint64_t seed = 1;
  ExtremalOptions sectional{400, 10, 1, 1, 4};
};

struct PinchResult {
  std::string family;
  std::string param_family;
  std::vector<double> best_params;
  double best_violation = std::numeric_limits<double>::infinity();
  double min_K = 0.0;
  double max_K = 0.0;
  int evaluations = 0;
  bool found_admissible = false;
  std::string message;
};

// Nelder-Mead with seeded restarts minimising the worst violation of
// lower <= K <= upper over the r window.
PinchResult pinch_search(const FamilySpec& spec, const ParamFamily& params, PinchTarget target,
                         const PinchOptions& opt = {});

}  // namespace warpcurv
