#include "warpcurv/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "warpcurv/analysis.hpp"
#include "warpcurv/closedform.hpp"
#include "warpcurv/engine.hpp"
#include "warpcurv/errors.hpp"

namespace warpcurv::cli {
namespace {

using Json = nlohmann::ordered_json;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Config {
  std::string command;
  std::string family = "H:3,1";
  std::string out;
  // Empty selects the command default: text for verify, json otherwise.
  std::string format;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::map<std::string, std::string> warps;
  std::vector<double> r;
  std::string grid;
  double theta = std::numbers::pi / 2;
  std::string sign = "plus";
  std::string path = "auto";
  bool complete = false;
  bool nonzero = false;
  std::string tail = "-inf:0";
  std::string paramfam = "model";
  double target_lower = -kInf;
  double target_upper = kInf;
  int budget = 200;
  int samples = 400;
  int refine = 10;
  int random_sets = 5;
};

double parse_real(const std::string& text, const std::string& what) {
  if (text == "inf" || text == "+inf") return kInf;
  if (text == "-inf") return -kInf;
  double x = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, x);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ParseError("invalid number '" + text + "' in " + what, text,
                     static_cast<std::size_t>(res.ptr - text.data()));
  }
  return x;
}

std::vector<std::string> split_colon(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

bool engine_supports(const FamilySpec& s) {
  switch (s.kind) {
    case FamilyKind::H: return true;
    case FamilyKind::CH_H: return s.n == 3;
    case FamilyKind::CH_CH: return s.n == 5 && s.k == 2;
  }
  return false;
}

std::vector<WarpFunction> warps_for(const Config& cfg, const FamilySpec& spec) {
  const auto names = family_warp_names(spec.kind);
  for (const auto& [name, text] : cfg.warps) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw ConfigError("warp --" + name + " is not used by family " + family_name(spec));
    }
  }
  if (cfg.warps.empty()) return model_warps(spec.kind);
  std::vector<WarpFunction> out;
  for (const auto& name : names) {
    const auto it = cfg.warps.find(name);
    if (it == cfg.warps.end()) throw ConfigError("missing warp --" + name + " for family " + family_name(spec));
    out.push_back(parse_warp(it->second));
  }
  return out;
}

std::vector<double> points_for(const Config& cfg, std::vector<double> fallback) {
  std::vector<double> pts = cfg.r;
  if (!cfg.grid.empty()) {
    const auto g = parse_grid(cfg.grid);
    pts.insert(pts.end(), g.begin(), g.end());
  }
  return pts.empty() ? fallback : pts;
}

Json warps_json(const FamilySpec& spec, std::span<const WarpFunction> warps) {
  Json j = Json::object();
  const auto names = family_warp_names(spec.kind);
  for (std::size_t i = 0; i < warps.size(); ++i) j[names[i]] = warps[i].describe();
  return j;
}

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + cfg.out);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int cmd_eval(const Config& cfg, std::ostream& out) {
  const FamilySpec spec = parse_family_name(cfg.family);
  const auto warps = warps_for(cfg, spec);
  const auto pts = points_for(cfg, {1.0});
  const SignBranch sign = cfg.sign == "minus" ? SignBranch::Minus : SignBranch::Plus;
  bool use_engine = engine_supports(spec);
  if (cfg.path == "closedform") use_engine = false;
  if (cfg.path == "engine" && !use_engine) {
    throw ConfigError("no frame engine for family " + family_name(spec) + "; use --path closedform");
  }
  std::optional<MetricFamily> fam;
  if (use_engine) {
    fam = family_from_warps(spec, warps, sign, pts);
  } else {
    const auto names = family_warp_names(spec.kind);
    for (std::size_t i = 0; i < warps.size(); ++i) {
      const auto rep = check_admissible(warps[i], pts);
      if (!rep.ok) {
        throw ConfigError("warp " + names[i] + " = " + warps[i].describe() + " is not admissible at r = " +
                          format_number(rep.violations.front().r) + " (" + rep.violations.front().reason + ")");
      }
    }
  }

  Json all = Json::array();
  std::ostringstream csv;
  csv << "r,theta,i,j,k,l,value\n";
  for (double r : pts) {
    const Point p{r, cfg.theta};
    CurvatureTensor R;
    if (fam) {
      R = compute_curvature(*fam, p);
    } else {
      std::vector<Jet2> jets;
      for (const auto& w : warps) jets.push_back(w.jet(r));
      R = closed_form_curvature(spec, jets, p);
    }
    Json comps = Json::array();
    const int d = R.dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            if (!cfg.complete && !(i < j && k < l && (i < k || (i == k && j <= l)))) continue;
            const double v = R(i, j, k, l);
            if (!std::isfinite(v)) throw NumericError("non-finite curvature component at r = " + format_number(r));
            if ((cfg.nonzero || cfg.complete) && v == 0.0) continue;
            comps.push_back({{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"l", l + 1}, {"value", v}});
            csv << format_number(r) << ',' << format_number(cfg.theta) << ',' << i + 1 << ',' << j + 1 << ','
                << k + 1 << ',' << l + 1 << ',' << format_number(v) << '\n';
          }
    Json entry;
    entry["family"] = family_name(spec);
    entry["point"] = {{"r", r}, {"theta", cfg.theta}};
    entry["components"] = std::move(comps);
    all.push_back(std::move(entry));
  }
  if (cfg.format == "csv") {
    emit(cfg, csv.str(), out);
  } else {
    emit(cfg, dump(all.size() == 1 ? all[0] : all), out);
  }
  return 0;
}

int cmd_verify(const Config& cfg, std::ostream& out) {
  const FamilySpec spec = parse_family_name(cfg.family);
  if (!cfg.warps.empty()) throw ConfigError("verify runs on model and seeded random warps; drop the warp flags");
  VerifyOptions opt;
  opt.grid = points_for(cfg, opt.grid);
  opt.tol = cfg.tol.value_or(opt.tol);
  opt.seed = cfg.seed;
  opt.random_sets = cfg.random_sets;
  const VerifyResult res = run_verify(spec, opt);
  if (cfg.format == "json") {
    Json j;
    j["family"] = res.family;
    Json checks = Json::array();
    for (const auto& c : res.checks) {
      checks.push_back({{"name", c.name},
                        {"pass", c.pass},
                        {"max_deviation", c.max_deviation},
                        {"tol", c.tol},
                        {"detail", c.detail}});
    }
    j["checks"] = std::move(checks);
    if (!res.structure_constants.empty()) j["structure_constants"] = res.structure_constants;
    j["pass"] = res.pass();
    emit(cfg, dump(j), out);
  } else {
    std::ostringstream os;
    os << "family " << res.family << "\n";
    for (const auto& c : res.checks) {
      os << (c.pass ? "PASS " : "FAIL ") << c.name << " max_dev=" << std::setprecision(3) << std::scientific
         << c.max_deviation << " tol=" << c.tol << std::defaultfloat << " (" << c.detail << ")\n";
    }
    if (!res.structure_constants.empty()) {
      os << "rederived c12,c34,c56,c78 = ";
      for (std::size_t q = 0; q < res.structure_constants.size(); ++q) {
        os << (q ? "," : "") << std::setprecision(10) << res.structure_constants[q];
      }
      os << "\n";
    }
    os << "verdict " << (res.pass() ? "PASS" : "FAIL") << "\n";
    emit(cfg, os.str(), out);
  }
  return res.pass() ? 0 : 1;
}

const char* sign_label(double v) {
  if (std::isnan(v)) return "nan";
  return v > 0.0 ? "+" : (v < 0.0 ? "-" : "0");
}

int cmd_obstruct(const Config& cfg, std::ostream& out) {
  const FamilySpec spec = parse_family_name(cfg.family);
  const auto warps = warps_for(cfg, spec);
  const auto grid = points_for(cfg, parse_grid("-10:-1:10"));
  const double tol = cfg.tol.value_or(0.0);
  if (tol < 0.0) throw ConfigError("tolerance must be non-negative");
  const ObstructionReport rep = obstruction_scan(spec, warps, grid, tol);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "r,quantity_name,value,sign\n";
    for (std::size_t i = 0; i < rep.r_grid.size(); ++i)
      for (const auto& q : rep.quantities) {
        os << format_number(rep.r_grid[i]) << ',' << q.name << ',' << format_number(q.values[i]) << ','
           << sign_label(q.values[i]) << '\n';
      }
    emit(cfg, os.str(), out);
    return 0;
  }
  Json j;
  j["family"] = rep.family;
  j["warps"] = warps_json(spec, warps);
  j["r_grid"] = rep.r_grid;
  Json qs = Json::array();
  for (const auto& q : rep.quantities) qs.push_back({{"name", q.name}, {"counts", q.counts}, {"values", q.values}});
  j["quantities"] = std::move(qs);
  j["tol"] = rep.tol;
  if (rep.violation) {
    j["verdict"] = {{"violation", {{"r", rep.violation_r}, {"component", rep.violation_component}}}};
  } else {
    j["verdict"] = "no-violation-found";
  }
  if (rep.cusp) {
    Json entries = Json::array();
    for (const auto& e : rep.cusp->entries) {
      entries.push_back({{"warp", e.warp},
                         {"ok", e.ok},
                         {"reason", e.reason},
                         {"values", e.values},
                         {"derivatives", e.derivatives}});
    }
    j["cusp"] = {{"ok", rep.cusp->ok}, {"probes", rep.cusp->probes}, {"entries", std::move(entries)}};
  }
  emit(cfg, dump(j), out);
  return 0;
}

int cmd_volume(const Config& cfg, std::ostream& out) {
  const FamilySpec spec = parse_family_name(cfg.family);
  const auto warps = warps_for(cfg, spec);
  const auto parts = split_colon(cfg.tail);
  if (parts.size() != 2) throw ParseError("tail must be lo:hi", cfg.tail, 0);
  const double lo = parse_real(parts[0], "--tail"), hi = parse_real(parts[1], "--tail");
  double r0 = 0.0;
  TailDirection dir;
  if (std::isinf(lo) && lo < 0 && std::isfinite(hi)) {
    r0 = hi;
    dir = TailDirection::MinusInfinity;
  } else if (std::isinf(hi) && hi > 0 && std::isfinite(lo)) {
    r0 = lo;
    dir = TailDirection::PlusInfinity;
  } else {
    throw ConfigError("tail needs exactly one infinite end, as -inf:r0 or r0:inf");
  }
  const VolumeReport rep = volume_report(spec, warps, r0, dir);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "lo,hi,increment,estimate,converged\n";
    for (const auto& w : rep.windows) {
      os << format_number(w.lo) << ',' << format_number(w.hi) << ',' << format_number(w.increment) << ','
         << format_number(w.estimate) << ',' << (w.converged ? "true" : "false") << '\n';
    }
    emit(cfg, os.str(), out);
    return 0;
  }
  Json j;
  j["family"] = rep.family;
  j["warps"] = warps_json(spec, warps);
  j["r0"] = rep.r0;
  j["direction"] = dir == TailDirection::MinusInfinity ? "-inf" : "+inf";
  j["estimate"] = rep.estimate;
  j["converged"] = rep.converged;
  j["note"] = rep.note;
  Json windows = Json::array();
  for (const auto& w : rep.windows) {
    windows.push_back({{"lo", w.lo}, {"hi", w.hi}, {"increment", w.increment}, {"estimate", w.estimate},
                       {"converged", w.converged}});
  }
  j["windows"] = std::move(windows);
  Json samples = Json::array();
  for (const auto& [r, f] : rep.samples) samples.push_back({r, f});
  j["samples"] = std::move(samples);
  emit(cfg, dump(j), out);
  return 0;
}

int cmd_search(const Config& cfg, std::ostream& out) {
  const FamilySpec spec = parse_family_name(cfg.family);
  if (!cfg.warps.empty()) throw ConfigError("search builds warps from --paramfam; drop the warp flags");
  const ParamFamily params = param_family_by_name(cfg.paramfam, spec);
  PinchOptions opt;
  const std::vector<double> window =
      cfg.grid.empty() ? parse_grid(params.name == "exp-cusp" ? "-3:-1:5" : "0.5:2:5") : parse_grid(cfg.grid);
  opt.r_lo = window.front();
  opt.r_hi = window.back();
  opt.r_points = static_cast<int>(window.size());
  opt.theta = cfg.theta;
  opt.budget = cfg.budget;
  opt.seed = cfg.seed;
  opt.sectional.samples = cfg.samples;
  opt.sectional.refine_iters = cfg.refine;
  opt.sectional.seed = cfg.seed;
  const PinchTarget target{cfg.target_lower, cfg.target_upper};
  if (!(target.lower <= target.upper)) throw ConfigError("target lower bound exceeds upper bound");
  const PinchResult res = pinch_search(spec, params, target, opt);
  Json j;
  j["family"] = res.family;
  j["param_family"] = res.param_family;
  j["seed"] = cfg.seed;
  j["target"] = {{"lower", target.lower}, {"upper", target.upper}};
  j["r_window"] = {{"lo", opt.r_lo}, {"hi", opt.r_hi}, {"points", opt.r_points}};
  j["found_admissible"] = res.found_admissible;
  j["best_params"] = res.best_params;
  j["best_violation"] = res.best_violation;
  j["min_K"] = res.min_K;
  j["max_K"] = res.max_K;
  j["evaluations"] = res.evaluations;
  j["message"] = res.message;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "param_family,best_violation,min_K,max_K,evaluations\n"
       << res.param_family << ',' << format_number(res.best_violation) << ',' << format_number(res.min_K) << ','
       << format_number(res.max_K) << ',' << res.evaluations << '\n';
    emit(cfg, os.str(), out);
  } else {
    emit(cfg, dump(j), out);
  }
  return res.found_admissible ? 0 : 1;
}

// CLI11 reads "-inf:0" or "-10:-1:10" as an option name; bind such values to
// their flag with '=' first.
std::vector<std::string> bind_dash_values(const std::vector<std::string>& args,
                                          const std::set<std::string>& valued) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (valued.count(args[i]) && i + 1 < args.size() && args[i + 1].size() > 1 && args[i + 1][0] == '-' &&
        args[i + 1][1] != '-') {
      out.push_back(args[i] + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

void print_error(std::ostream& err, const Error& e) {
  err << "error: " << e.what() << "\n";
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    std::istringstream lines(pe->caret());
    for (std::string line; std::getline(lines, line);) err << "  " << line << "\n";
  }
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return Json(x).dump();
}

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split_colon(text);
  if (parts.size() != 3) throw ParseError("grid must be start:stop:count", text, 0);
  const double a = parse_real(parts[0], "grid start"), b = parse_real(parts[1], "grid stop");
  if (!std::isfinite(a) || !std::isfinite(b)) throw ConfigError("grid ends must be finite");
  int count = 0;
  const auto& c = parts[2];
  const auto res = std::from_chars(c.data(), c.data() + c.size(), count);
  if (res.ec != std::errc{} || res.ptr != c.data() + c.size()) {
    throw ParseError("invalid grid count '" + c + "'", text, text.size() - c.size());
  }
  if (count < 1) throw ConfigError("grid count must be at least 1");
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
  return g;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Curvature of warped-product metrics on hyperbolic and complex hyperbolic spaces", "warpcurv"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  app.fallthrough();

  std::string h, hr, v, vr;
  std::string target_lower, target_upper;
  app.add_option("--family", cfg.family, "H:n,k | CH-H | CH-H:n | CH-CH | CH-CH:n,k");
  app.add_option("--out", cfg.out, "write output to this file");
  app.add_option("--format", cfg.format, "json, csv or text (verify)")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--tol", cfg.tol, "tolerance");

  auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--h", h, "warp h(r)");
    sub->add_option("--hr", hr, "warp h_r(r)");
    sub->add_option("--v", v, "warp v(r)");
    sub->add_option("--vr", vr, "warp v_r(r)");
    sub->add_option("--r", cfg.r, "evaluation radius (repeatable)");
    sub->add_option("--grid,--rgrid", cfg.grid, "radius grid start:stop:count");
    sub->add_option("--theta", cfg.theta, "polar angle for CH-H");
  };
  auto* eval = app.add_subcommand("eval", "curvature tensor components");
  add_common(eval);
  eval->add_option("--sign", cfg.sign, "CH-H bracket sign branch")->check(CLI::IsMember({"plus", "minus"}));
  eval->add_option("--path", cfg.path, "auto, engine or closedform")
      ->check(CLI::IsMember({"auto", "engine", "closedform"}));
  eval->add_flag("--complete", cfg.complete, "every nonzero slot instead of independent components");
  eval->add_flag("--nonzero", cfg.nonzero, "drop zero components");
  auto* verify = app.add_subcommand("verify", "cross-path and model-reduction checks");
  add_common(verify);
  verify->add_option("--random-sets", cfg.random_sets, "random warp sets per family");
  auto* obstruct = app.add_subcommand("obstruct", "sign obstruction scan");
  add_common(obstruct);
  auto* volume = app.add_subcommand("volume", "radial volume tail integral");
  add_common(volume);
  volume->add_option("--tail", cfg.tail, "-inf:r0 or r0:inf");
  auto* search = app.add_subcommand("search", "pinching parameter search");
  add_common(search);
  search->add_option("--paramfam", cfg.paramfam, "model or exp-cusp");
  search->add_option("--target-lower", target_lower, "lower curvature bound");
  search->add_option("--target-upper", target_upper, "upper curvature bound");
  search->add_option("--budget", cfg.budget, "objective evaluations");
  search->add_option("--samples", cfg.samples, "random planes per point");
  search->add_option("--refine", cfg.refine, "refinement iterations per candidate");

  const std::set<std::string> valued{"--family", "--out", "--format", "--seed", "--tol", "--h", "--hr",
                                     "--v", "--vr", "--r", "--grid", "--rgrid", "--theta", "--sign",
                                     "--path", "--tail", "--paramfam", "--target-lower",
                                     "--target-upper", "--budget", "--samples", "--refine",
                                     "--random-sets"};
  std::vector<std::string> args = bind_dash_values(raw_args, valued);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!h.empty()) cfg.warps["h"] = h;
    if (!hr.empty()) cfg.warps["hr"] = hr;
    if (!v.empty()) cfg.warps["v"] = v;
    if (!vr.empty()) cfg.warps["vr"] = vr;
    if (!target_lower.empty()) cfg.target_lower = parse_real(target_lower, "--target-lower");
    if (!target_upper.empty()) cfg.target_upper = parse_real(target_upper, "--target-upper");
    if (cfg.tol && !(*cfg.tol >= 0.0)) throw ConfigError("tolerance must be non-negative");
    if (eval->parsed()) return cmd_eval(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (obstruct->parsed()) return cmd_obstruct(cfg, out);
    if (volume->parsed()) return cmd_volume(cfg, out);
    if (search->parsed()) return cmd_search(cfg, out);
  } catch (const ParseError& e) {
    print_error(err, e);
    return 2;
  } catch (const ConfigError& e) {
    print_error(err, e);
    return 2;
  } catch (const Error& e) {
    print_error(err, e);
    return 1;
  }
  return 2;
}

}  // namespace warpcurv::cli
