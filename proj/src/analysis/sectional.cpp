#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "warpcurv/analysis.hpp"
#include "warpcurv/errors.hpp"
#include "warpcurv/kernels.hpp"

namespace warpcurv {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class PlaneEvaluator {
 public:
  explicit PlaneEvaluator(const CurvatureTensor& R)
      : R_(R), d_(R.dim()), k_(kernels::active()), p_(static_cast<std::size_t>(d_) * d_),
        y_(p_.size()) {}

  const kernels::KernelTable& kernel() const { return k_; }

  double numerator(const std::vector<double>& u, const std::vector<double>& w) {
    outer(u, w);
    return k_.quadratic_form(R_.data().data(), p_.data(), p_.size());
  }

  // Gradients of R(u,w,u,w) with respect to u and w.
  void gradient(const std::vector<double>& u, const std::vector<double>& w, std::vector<double>& gu,
                std::vector<double>& gw) {
    outer(u, w);
    k_.matvec(R_.data().data(), p_.data(), y_.data(), p_.size());
    gu.assign(d_, 0.0);
    gw.assign(d_, 0.0);
    for (int a = 0; a < d_; ++a) gu[a] = 2.0 * k_.dot(&y_[static_cast<std::size_t>(a) * d_], w.data(), d_);
    for (int i = 0; i < d_; ++i) {
      const double ui = u[i];
      if (ui == 0.0) continue;
      for (int b = 0; b < d_; ++b) gw[b] += 2.0 * ui * y_[static_cast<std::size_t>(i) * d_ + b];
    }
  }

 private:
  void outer(const std::vector<double>& u, const std::vector<double>& w) {
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) p_[static_cast<std::size_t>(i) * d_ + j] = u[i] * w[j];
  }

  const CurvatureTensor& R_;
  int d_;
  const kernels::KernelTable& k_;
  std::vector<double> p_;
  std::vector<double> y_;
};

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

bool orthonormalize(std::vector<double>& u, std::vector<double>& w) {
  const double nu = std::sqrt(dotv(u, u));
  if (!(nu > 1e-300)) return false;
  for (double& x : u) x /= nu;
  const double c = dotv(u, w);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * u[i];
  const double nw = std::sqrt(dotv(w, w));
  if (!(nw > 1e-12)) return false;
  for (double& x : w) x /= nw;
  return true;
}

Plane random_plane(int d, std::uint64_t seed, std::uint64_t index) {
  std::mt19937_64 gen(splitmix64(seed ^ splitmix64(index + 1)));
  std::normal_distribution<double> normal;
  Plane p{std::vector<double>(d), std::vector<double>(d)};
  for (;;) {
    for (int i = 0; i < d; ++i) p.u[i] = normal(gen);
    for (int i = 0; i < d; ++i) p.w[i] = normal(gen);
    if (orthonormalize(p.u, p.w)) return p;
  }
}

struct Candidate {
  double K;
  std::size_t index;
  Plane plane;
};

// Projected-gradient descent (sign = -1) or ascent (sign = +1) on the pair of
// unit vectors, with backtracking and re-orthonormalisation each step.
Candidate refine(PlaneEvaluator& ev, Candidate c, int iters, double sign) {
  std::vector<double> gu, gw;
  double step = 0.5;
  for (int it = 0; it < iters; ++it) {
    ev.gradient(c.plane.u, c.plane.w, gu, gw);
    for (auto* g : {&gu, &gw}) {
      const double a = dotv(*g, c.plane.u), b = dotv(*g, c.plane.w);
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] -= a * c.plane.u[i] + b * c.plane.w[i];
    }
    const double gnorm = std::sqrt(dotv(gu, gu) + dotv(gw, gw));
    if (!(gnorm > 1e-14)) break;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      Plane trial = c.plane;
      for (std::size_t i = 0; i < trial.u.size(); ++i) {
        trial.u[i] += sign * step * gu[i] / gnorm;
        trial.w[i] += sign * step * gw[i] / gnorm;
      }
      if (!orthonormalize(trial.u, trial.w)) {
        step *= 0.5;
        continue;
      }
      const double K = ev.numerator(trial.u, trial.w);
      if (sign * (K - c.K) > 0.0) {
        c.K = K;
        c.plane = std::move(trial);
        step = std::min(1.0, step * 1.5);
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return c;
}

}  // namespace

double sectional(const CurvatureTensor& R, std::span<const double> u, std::span<const double> w) {
  const int d = R.dim();
  if (static_cast<int>(u.size()) != d || static_cast<int>(w.size()) != d) {
    throw ConfigError("plane vectors must match the tensor dimension");
  }
  const auto& k = kernels::active();
  const double uu = k.dot(u.data(), u.data(), d);
  const double ww = k.dot(w.data(), w.data(), d);
  const double uw = k.dot(u.data(), w.data(), d);
  const double gram = uu * ww - uw * uw;
  if (!(gram >= 1e-14)) throw DomainError("degenerate plane: Gram determinant below 1e-14");
  std::vector<double> p(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) p[static_cast<std::size_t>(i) * d + j] = u[i] * w[j];
  return k.quadratic_form(R.data().data(), p.data(), p.size()) / gram;
}

SectionalReport extremal_sectional(const CurvatureTensor& R, const ExtremalOptions& opt) {
  if (opt.samples < 100) throw ConfigError("extremal_sectional needs at least 100 samples");
  if (opt.refine_iters < 0) throw ConfigError("refine_iters must be non-negative");
  const int d = R.dim();
  if (d < 2) throw ConfigError("tensor dimension must be at least 2");

  std::vector<Candidate> pool;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      Plane p{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
      p.u[a] = 1.0;
      p.w[b] = 1.0;
      pool.push_back({R(a, b, a, b), pool.size(), std::move(p)});
    }
  const std::size_t offset = pool.size();

  const auto n = static_cast<std::size_t>(opt.samples);
  std::vector<Candidate> sampled(n);
  const int threads = std::max(1, std::min<int>(opt.threads, opt.samples));
  auto work = [&](std::size_t begin, std::size_t end) {
    PlaneEvaluator ev(R);
    for (std::size_t i = begin; i < end; ++i) {
      Plane p = random_plane(d, opt.seed, i);
      const double K = ev.numerator(p.u, p.w);
      sampled[i] = {K, offset + i, std::move(p)};
    }
  };
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool_threads;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk, e = std::min(n, b + chunk);
      if (b < e) pool_threads.emplace_back(work, b, e);
    }
    for (auto& th : pool_threads) th.join();
  }
  for (auto& c : sampled) pool.push_back(std::move(c));

  auto by_K = [](const Candidate& x, const Candidate& y) {
    return x.K < y.K || (x.K == y.K && x.index < y.index);
  };
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return by_K(pool[x], pool[y]); });

  PlaneEvaluator ev(R);
  const std::size_t nc = std::min<std::size_t>(std::max(1, opt.refine_candidates), pool.size());
  Candidate best_min = pool[order.front()];
  Candidate best_max = pool[order.back()];
  for (std::size_t c = 0; c < nc; ++c) {
    Candidate lo = refine(ev, pool[order[c]], opt.refine_iters, -1.0);
    if (lo.K < best_min.K) best_min = std::move(lo);
    Candidate hi = refine(ev, pool[order[order.size() - 1 - c]], opt.refine_iters, 1.0);
    if (hi.K > best_max.K) best_max = std::move(hi);
  }

  SectionalReport rep;
  rep.min_K = best_min.K;
  rep.max_K = best_max.K;
  rep.argmin = std::move(best_min.plane);
  rep.argmax = std::move(best_max.plane);
  rep.samples = opt.samples;
  rep.refine_iters = opt.refine_iters;
  rep.seed = opt.seed;
  rep.kernel = ev.kernel().name;
  return rep;
}

}  // namespace warpcurv
