#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "warpcurv/family.hpp"

namespace warpcurv::cli {

// Runs the command line (args excludes the program name). Exit codes: 0 ok,
// 1 check or numeric failure, 2 usage or parse error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "start:stop:count", inclusive, count >= 1.
std::vector<double> parse_grid(const std::string& text);

// Shortest decimal that round-trips, as used in JSON and CSV output.
std::string format_number(double x);

struct VerifyCheck {
  std::string name;
  bool pass = true;
  double max_deviation = 0.0;
  double tol = 0.0;
  std::string detail;
};

struct VerifyOptions {
  std::vector<double> grid{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  std::vector<double> thetas{std::numbers::pi / 2, std::numbers::pi / 3};
  double tol = 1e-8;
  std::uint64_t seed = 1;
  int random_sets = 5;
};

struct VerifyResult {
  std::string family;
  std::vector<VerifyCheck> checks;
  // Rederived c12, c34, c56, c78 for family CH-CH, averaged over the grid.
  std::vector<double> structure_constants;

  bool pass() const;
};

VerifyResult run_verify(const FamilySpec& spec, const VerifyOptions& opt);

}  // namespace warpcurv::cli
