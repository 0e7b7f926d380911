#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "heatflow/heat.hpp"
#include "heatflow/resultant.hpp"
#include "heatflow/roots.hpp"
#include "heatflow/sextic.hpp"

namespace heatflow {

struct XtPoint {
  double t;
  double x;
};

/// One connected curve of the zero set of d^k p(x, t) / dx^k over scale.
struct FingerprintBranch {
  int k = 1;
  std::vector<XtPoint> samples;
  double born_at = 0.0;
  std::optional<double> dies_at;
};

enum class MergeKind { InflectionCusp, CriticalFold };  // FP2 ∩ FP3, FP1 ∩ FP2

inline std::string_view to_string(MergeKind k) {
  return k == MergeKind::InflectionCusp ? "FP2∩FP3" : "FP1∩FP2";
}

struct MergePoint {
  double x;
  double t;
  MergeKind kind;
};

struct FingerprintOptions {
  double death_tol = 1e-9;   // bisection accuracy in t for branch deaths
  double root_tol = kDefaultRootTol;
};

namespace detail {

// Roots of one t-slice that are sign crossings (odd multiplicity).  At t = 0
// every distinct root is kept so the initial branch count matches p^{(k)}.
inline std::vector<double> crossing_roots(const TPoly& dk, double t, bool keep_all, double tol) {
  const Polynomial slice = at_t(dk, t);
  std::vector<double> out;
  if (slice.degree() <= 0) return out;
  for (const auto& r : real_roots(slice, tol))
    if (keep_all || r.multiplicity % 2 == 1) out.push_back(r.value);
  return out;
}

class BranchTracer {
 public:
  BranchTracer(const TPoly& dk, int k, const FingerprintOptions& opt) : dk_(dk), k_(k), opt_(opt) {}

  std::vector<FingerprintBranch> run(double t_max, int n_steps) {
    auto r0 = crossing_roots(dk_, 0.0, true, opt_.root_tol);
    for (double x : r0) start_branch(0.0, x);
    double t_prev = 0.0;
    for (int j = 1; j <= n_steps; ++j) {
      const double t = t_max * static_cast<double>(j) / n_steps;
      advance(t_prev, std::move(r0), t);
      r0 = slice(t);
      t_prev = t;
    }
    return std::move(branches_);
  }

 private:
  std::vector<double> slice(double t) const { return crossing_roots(dk_, t, false, opt_.root_tol); }

  void start_branch(double t, double x) {
    FingerprintBranch b;
    b.k = k_;
    b.born_at = t;
    b.samples.push_back({t, x});
    active_.push_back(branches_.size());
    branches_.push_back(std::move(b));
    std::sort(active_.begin(), active_.end(), [&](std::size_t a, std::size_t c) {
      return branches_[a].samples.back().x < branches_[c].samples.back().x;
    });
  }

  void append(double t, const std::vector<double>& xs) {
    for (std::size_t i = 0; i < xs.size() && i < active_.size(); ++i) branches_[active_[i]].samples.push_back({t, xs[i]});
  }

  // Move the active set from slice ta (roots ra, already recorded) to tb.
  void advance(double ta, std::vector<double> ra, double tb) {
    for (int guard = 0; guard < 64; ++guard) {
      auto rb = slice(tb);
      if (rb.size() == active_.size()) {
        append(tb, rb);
        return;
      }
      if (rb.size() > active_.size()) {
        births(tb, rb);
        return;
      }
      // Locate the first time the count drops.
      double lo = ta, hi = tb;
      std::vector<double> r_lo = ra, r_hi = rb;
      while (hi - lo > opt_.death_tol) {
        const double mid = 0.5 * (lo + hi);
        auto rm = slice(mid);
        if (rm.size() >= active_.size()) {
          lo = mid;
          r_lo = std::move(rm);
        } else {
          hi = mid;
          r_hi = std::move(rm);
        }
      }
      if (r_lo.size() != active_.size()) r_lo = ra;
      kill(lo, r_lo, hi, active_.size() - r_hi.size());
      append(hi, r_hi);
      ta = hi;
      ra = std::move(r_hi);
      if (ta >= tb) return;
    }
  }

  // Retire `count` branches at t_hi: repeatedly the live adjacent pair with
  // the smallest gap at t_lo (a lone root when the drop is odd).
  void kill(double t_lo, const std::vector<double>& xs, double t_hi, std::size_t count) {
    if (!active_.empty() && branches_[active_.front()].samples.back().t < t_lo) append(t_lo, xs);
    const std::size_t n = active_.size();
    std::vector<bool> dead(n, false);
    std::size_t killed = 0;
    while (killed < count) {
      std::vector<std::size_t> live;
      for (std::size_t i = 0; i < n; ++i)
        if (!dead[i]) live.push_back(i);
      if (live.empty()) break;
      double best = std::numeric_limits<double>::infinity();
      std::size_t at = 0;
      for (std::size_t i = 0; i + 1 < live.size(); ++i) {
        const double gap = xs[live[i + 1]] - xs[live[i]];
        if (gap < best) {
          best = gap;
          at = i;
        }
      }
      if (count - killed >= 2 && live.size() >= 2) {
        const std::size_t a = live[at], b = live[at + 1];
        const double xm = 0.5 * (xs[a] + xs[b]);
        finish(active_[a], t_hi, xm);
        finish(active_[b], t_hi, xm);
        dead[a] = dead[b] = true;
        killed += 2;
      } else {
        const std::size_t a = live[at];
        finish(active_[a], t_hi, xs[a]);
        dead[a] = true;
        ++killed;
      }
    }
    std::vector<std::size_t> survivors;
    for (std::size_t i = 0; i < n; ++i)
      if (!dead[i]) survivors.push_back(active_[i]);
    active_ = std::move(survivors);
  }

  void finish(std::size_t b, double t, double x) {
    branches_[b].samples.push_back({t, x});
    branches_[b].dies_at = t;
  }

  void births(double t, const std::vector<double>& xs) {
    // Match existing branches to their nearest new roots; the rest are new.
    std::vector<bool> used(xs.size(), false);
    for (std::size_t a : active_) {
      const double x0 = branches_[a].samples.back().x;
      std::size_t best = xs.size();
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (used[i]) continue;
        if (std::abs(xs[i] - x0) < bd) {
          bd = std::abs(xs[i] - x0);
          best = i;
        }
      }
      if (best < xs.size()) {
        used[best] = true;
        branches_[a].samples.push_back({t, xs[best]});
      }
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!used[i]) start_branch(t, xs[i]);
  }

  const TPoly& dk_;
  int k_;
  FingerprintOptions opt_;
  std::vector<FingerprintBranch> branches_;
  std::vector<std::size_t> active_;  // ordered by x
};

}  // namespace detail

/// Trace the zero set of the k-th x-derivative of p(x, t) over t in [0, t_max]
/// on a uniform grid of n_steps intervals.  Branches are continued by order
/// between slices; when the count drops, the death time is located by
/// bisection and the adjacent pair with the smallest gap is retired there.
inline std::vector<FingerprintBranch> fingerprint(const Polynomial& p, int k, double t_max, int n_steps,
                                                  const FingerprintOptions& opt = {}) {
  const TPoly dk = derivative(evolve_symbolic(p).sym, k);
  if (dk.degree() <= 0) return {};
  detail::BranchTracer tracer(dk, k, opt);
  return tracer.run(t_max, std::max(n_steps, 1));
}

/// Default horizon for fingerprint tracing: 1.5 T* + 1.
inline double default_t_max(const Polynomial& p) {
  return 1.5 * convexification_time(p).t_star + 1.0;
}

namespace detail {

// Simultaneous zeros (x, t), t >= 0, of A = d^j p and B = dA/dx.
inline std::vector<MergePoint> merge_points_of(const Polynomial& p, int j, MergeKind kind) {
  std::vector<MergePoint> out;
  const TPoly sym = evolve_symbolic(p).sym;
  const TPoly A = derivative(sym, j);
  const TPoly B = derivative(sym, j + 1);
  const TPoly C = derivative(sym, j + 2);
  const TPoly At = t_derivative(A);
  const TPoly Bt = t_derivative(B);
  if (A.degree() < 2) return out;
  if (B.degree() == 0) return out;
  const Polynomial res = resultant_in_t(A, B);
  if (res.degree() <= 0) return out;
  const double scale = coeff_scale(p);
  for (const auto& r : real_roots(res)) {
    double t = r.value;
    if (t < -1e-9) continue;
    const Polynomial bslice = at_t(B, t);
    const Polynomial aslice = at_t(A, t);
    if (bslice.degree() <= 0) continue;
    for (const auto& xr : real_roots(bslice)) {
      double x = xr.value;
      double tt = t;
      // Newton on (A, B) = 0.  At a solution A_x = B = 0 so the Jacobian is
      // [[0, A_t], [B_x, B_t]].
      for (int it = 0; it < 8; ++it) {
        const double a = eval_xt(A, x, tt);
        const double b = eval_xt(B, x, tt);
        const double ax = b;
        const double at = eval_xt(At, x, tt);
        const double bx = eval_xt(C, x, tt);
        const double bt = eval_xt(Bt, x, tt);
        const double det = ax * bt - at * bx;
        if (std::abs(det) < 1e-14 * scale * scale) break;
        const double dx = (a * bt - at * b) / det;
        const double dt = (ax * b - a * bx) / det;
        x -= dx;
        tt -= dt;
        if (std::abs(dx) < 1e-15 * (1 + std::abs(x)) && std::abs(dt) < 1e-15 * (1 + std::abs(tt))) break;
      }
      if (std::abs(tt - t) > 1e-6 * (1.0 + std::abs(t))) tt = t, x = xr.value;
      const double ra = std::abs(eval_xt(A, x, tt));
      if (ra > 1e-7 * std::max(scale, magnitude_at(at_t(A, tt), x))) continue;
      if (tt < 0.0) {
        if (tt < -1e-9) continue;
        tt = 0.0;
      }
      bool dup = false;
      for (const auto& m : out)
        if (std::abs(m.t - tt) < 1e-7 * (1 + tt) && std::abs(m.x - x) < 1e-6 * (1 + std::abs(x))) dup = true;
      if (!dup) out.push_back({x, tt, kind});
    }
    if (kind == MergeKind::InflectionCusp && p.degree() == 6 && p[5] == 0.0 &&
        std::none_of(out.begin(), out.end(), [&](const MergePoint& m) { return std::abs(m.t - std::max(t, 0.0)) < 1e-7; })) {
      // Closed-form abscissa for depressed sextics.
      const Polynomial q = make_monic(p);
      try {
        const double x = x_of_t(q[4], q[3], q[2], t);
        if (std::abs(aslice(x)) <= 1e-7 * scale && std::abs(bslice(x)) <= 1e-7 * scale)
          out.push_back({x, std::max(t, 0.0), kind});
      } catch (const DegenerateDenominator&) {
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const MergePoint& a, const MergePoint& b) { return a.t < b.t; });
  return out;
}

}  // namespace detail

/// Points where p_xx(., t) has a real double root (inflection pairs annihilate).
inline std::vector<MergePoint> fp2_fp3_intersections(const Polynomial& p) {
  if (p.degree() < 4) return {};
  return detail::merge_points_of(p, 2, MergeKind::InflectionCusp);
}

/// Points where p_x(., t) has a real double root (a minimum and a maximum annihilate).
inline std::vector<MergePoint> fp1_merge_points(const Polynomial& p) {
  if (p.degree() < 4) return {};
  return detail::merge_points_of(p, 1, MergeKind::CriticalFold);
}

}  // namespace heatflow
