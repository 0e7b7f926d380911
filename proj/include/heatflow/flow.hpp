#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "heatflow/errors.hpp"
#include "heatflow/fingerprint.hpp"
#include "heatflow/heat.hpp"
#include "heatflow/oracle.hpp"
#include "heatflow/roots.hpp"

namespace heatflow {

enum class Termination { ReachedTarget, SingularityMerge, StepFailure };
enum class Direction { Forward, Backward };

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::ReachedTarget: return "ReachedTarget";
    case Termination::SingularityMerge: return "SingularityMerge";
    case Termination::StepFailure: return "StepFailure";
  }
  return "?";
}

/// An integral curve of dx/dt = -p_xxx / (2 p_xx).
struct Trajectory {
  std::vector<XtPoint> samples;
  Termination termination = Termination::ReachedTarget;
  Direction direction = Direction::Forward;
  // Set when the curve went straight through an FP2 ∩ FP3 point; p_xx
  // changes sign there and only there.
  std::optional<XtPoint> cusp_crossing;

  const XtPoint& end() const { return samples.back(); }
};

struct FlowOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 0.0;   // 0: |t1 - t0| / 1000
  double sing_tol = 0.0;   // 0: 1e-7 (1 + max |c_k|)
  double cusp_tol = 1e-4;  // |p_xxx| above this at a singularity means a fold
  bool record = true;      // keep every accepted step, else only the ends
};

/// The vector field of the critical-point flow with its derivative data.
class YpField {
 public:
  explicit YpField(const Polynomial& p) {
    const TPoly sym = evolve_symbolic(p).sym;
    d1_ = derivative(sym, 1);
    d2_ = derivative(sym, 2);
    d3_ = derivative(sym, 3);
    d4_ = derivative(sym, 4);
    d5_ = derivative(sym, 5);
    scale_ = coeff_scale(p);
  }

  double px(double x, double t) const { return eval_xt(d1_, x, t); }
  double pxx(double x, double t) const { return eval_xt(d2_, x, t); }
  double pxxx(double x, double t) const { return eval_xt(d3_, x, t); }
  double pxxxx(double x, double t) const { return eval_xt(d4_, x, t); }
  double pxxxxx(double x, double t) const { return eval_xt(d5_, x, t); }
  double slope(double x, double t) const { return -pxxx(x, t) / (2.0 * pxx(x, t)); }
  double scale() const { return scale_; }

 private:
  TPoly d1_, d2_, d3_, d4_, d5_;
  double scale_ = 1.0;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DoPri {
  static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr std::array<double, 7> b{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
  static constexpr std::array<double, 7> e{71.0 / 57600,   0.0,        -71.0 / 16695, 71.0 / 1920,
                                           -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
};

class YpIntegrator {
 public:
  YpIntegrator(const YpField& field, double x0, double t0, double t1, const FlowOptions& opt)
      : f_(field), t_(t0), x_(x0), t1_(t1), opt_(opt) {
    dir_ = (t1 >= t0) ? 1.0 : -1.0;
    span_ = std::abs(t1 - t0);
    max_step_ = opt.max_step > 0.0 ? opt.max_step : span_ / 1000.0;
    if (max_step_ <= 0.0) max_step_ = 1e-3;
    sing_tol_ = opt.sing_tol > 0.0 ? opt.sing_tol : 1e-7 * field.scale();
    level_ = f_.px(x0, t0);
  }

  Trajectory run() {
    traj_.direction = dir_ > 0 ? Direction::Forward : Direction::Backward;
    traj_.samples.push_back({t_, x_});
    double d2 = f_.pxx(x_, t_);
    if (std::abs(d2) < sing_tol_) {
      if (std::abs(f_.pxxx(x_, t_)) > opt_.cusp_tol) throw StartOnSingularity(x_, t_);
      if (!cross_cusp()) return finish(Termination::SingularityMerge);
      d2 = f_.pxx(x_, t_);
    }
    sign_ = d2 > 0 ? 1 : -1;
    double h = dir_ * std::min(max_step_, std::max(span_ * 1e-3, 1e-12));
    double k1 = f_.slope(x_, t_);
    int steps = 0;
    while (dir_ * (t1_ - t_) > 0.0) {
      if (++steps > 2000000) return finish(Termination::StepFailure);
      const double h_min = 1e-14 * std::max(1.0, std::abs(t_));
      if (dir_ * (t_ + h - t1_) > 0.0) h = t1_ - t_;
      double x_new = 0.0, err = 0.0, k7 = 0.0;
      if (!attempt(h, k1, x_new, err, k7)) {
        h *= 0.5;
        if (std::abs(h) < h_min) {
          const auto r = at_singularity();
          if (r) return finish(*r);
          k1 = f_.slope(x_, t_);
          h = dir_ * std::min(max_step_, std::max(span_ * 1e-6, 1e-12));
        }
        continue;
      }
      if (err <= 1.0) {
        t_ += h;
        x_ = x_new;
        project();
        if (opt_.record) traj_.samples.push_back({t_, x_});
        if (std::abs(f_.pxx(x_, t_)) < sing_tol_) {
          const auto r = at_singularity();
          if (r) return finish(*r);
        }
        k1 = f_.slope(x_, t_);
        (void)k7;
        const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
      } else {
        h *= std::max(0.1, 0.9 * std::pow(err, -0.25));
        if (std::abs(h) < h_min) {
          const auto r = at_singularity();
          if (r) return finish(*r);
          k1 = f_.slope(x_, t_);
          h = dir_ * std::min(max_step_, std::max(span_ * 1e-6, 1e-12));
        }
      }
      if (std::abs(h) > max_step_) h = dir_ * max_step_;
    }
    return finish(Termination::ReachedTarget);
  }

 private:
  // One trial step.  Fails when any stage lands on the other side of (or on)
  // the inflection set.
  bool attempt(double h, double k1, double& x_new, double& err, double& k7) {
    using D = DoPri;
    auto stage = [&](double tc, double xc, double& k) {
      const double d2 = f_.pxx(xc, tc);
      if (!std::isfinite(xc) || (d2 > 0 ? 1 : -1) != sign_ || std::abs(d2) < sing_tol_) return false;
      k = -f_.pxxx(xc, tc) / (2.0 * d2);
      return std::isfinite(k);
    };
    double k2, k3, k4, k5, k6;
    if (!stage(t_ + D::c[1] * h, x_ + h * D::a21 * k1, k2)) return false;
    if (!stage(t_ + D::c[2] * h, x_ + h * (D::a31 * k1 + D::a32 * k2), k3)) return false;
    if (!stage(t_ + D::c[3] * h, x_ + h * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3), k4)) return false;
    if (!stage(t_ + D::c[4] * h, x_ + h * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 + D::a54 * k4), k5)) return false;
    if (!stage(t_ + h, x_ + h * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 + D::a64 * k4 + D::a65 * k5), k6))
      return false;
    x_new = x_ + h * (D::b[0] * k1 + D::b[2] * k3 + D::b[3] * k4 + D::b[4] * k5 + D::b[5] * k6);
    if (!stage(t_ + h, x_new, k7)) return false;
    const double e = h * (D::e[0] * k1 + D::e[2] * k3 + D::e[3] * k4 + D::e[4] * k5 + D::e[5] * k6 + D::e[6] * k7);
    err = std::abs(e) / (opt_.atol + opt_.rtol * std::max(std::abs(x_), std::abs(x_new)));
    return std::isfinite(err);
  }

  // Curves are level sets of p_x; pull the state back onto its level.
  void project() {
    for (int i = 0; i < 2; ++i) {
      const double d2 = f_.pxx(x_, t_);
      if (std::abs(d2) < 10.0 * sing_tol_) return;
      const double dx = (f_.px(x_, t_) - level_) / d2;
      if (!(std::abs(dx) < 1e-6 * (1.0 + std::abs(x_)))) return;
      x_ -= dx;
    }
  }

  // Called when the step size collapses or p_xx becomes negligible.
  std::optional<Termination> at_singularity() {
    const double d2 = std::abs(f_.pxx(x_, t_));
    const double d3 = std::abs(f_.pxxx(x_, t_));
    if (d2 > 1e-3 * f_.scale()) return Termination::StepFailure;
    if (d3 > opt_.cusp_tol) return Termination::SingularityMerge;
    if (!cross_cusp()) return Termination::SingularityMerge;
    return std::nullopt;
  }

  // Continue straight through an FP2 ∩ FP3 point.  The through-going curve
  // has limiting slope -p_xxxxx / (4 p_xxxx) there (zero for quartics).
  bool cross_cusp() {
    const double d4 = f_.pxxxx(x_, t_);
    const double slope = (d4 != 0.0) ? -f_.pxxxxx(x_, t_) / (4.0 * d4) : 0.0;
    const XtPoint at{t_, x_};
    double delta = 1e-8 * std::max(1.0, std::abs(t_));
    const double limit = std::max(1e-2 * span_, 10.0 * delta);
    while (delta <= limit) {
      double tn = t_ + dir_ * delta;
      if (dir_ * (tn - t1_) > 0.0) tn = t1_;
      double xn = x_ + slope * (tn - t_);
      bool ok = true;
      for (int i = 0; i < 30; ++i) {
        const double d2 = f_.pxx(xn, tn);
        if (d2 == 0.0) {
          ok = false;
          break;
        }
        const double dx = (f_.px(xn, tn) - level_) / d2;
        xn -= dx;
        if (!std::isfinite(xn)) {
          ok = false;
          break;
        }
        if (std::abs(dx) < 1e-15 * (1.0 + std::abs(xn))) break;
      }
      if (ok && std::abs(xn - x_) < 10.0 * (std::abs(slope) + 1.0) * delta + 1e-6 &&
          std::abs(f_.px(xn, tn) - level_) <= 1e-12 * f_.scale() && std::abs(f_.pxx(xn, tn)) > 100.0 * sing_tol_) {
        t_ = tn;
        x_ = xn;
        sign_ = f_.pxx(x_, t_) > 0 ? 1 : -1;
        traj_.cusp_crossing = at;
        traj_.samples.push_back({t_, x_});
        return true;
      }
      if (tn == t1_) break;
      delta *= 2.0;
    }
    return false;
  }

  Trajectory finish(Termination why) {
    traj_.termination = why;
    if (traj_.samples.back().t != t_ || traj_.samples.back().x != x_) traj_.samples.push_back({t_, x_});
    return std::move(traj_);
  }

  const YpField& f_;
  double t_, x_, t1_;
  FlowOptions opt_;
  double dir_ = 1.0, span_ = 0.0, max_step_ = 0.0, sing_tol_ = 0.0, level_ = 0.0;
  int sign_ = 1;
  Trajectory traj_;
};

}  // namespace detail

/// Integrate the critical-point flow from (x0, t0) to t1 (either direction).
///
/// Stops early with SingularityMerge when the curve runs into the inflection
/// set p_xx = 0 while |p_xxx| > cusp_tol (two critical points annihilate).
inline Trajectory integrate_yp(const YpField& field, double x0, double t0, double t1, const FlowOptions& opt = {}) {
  return detail::YpIntegrator(field, x0, t0, t1, opt).run();
}

inline Trajectory integrate_yp(const Polynomial& p, double x0, double t0, double t1, const FlowOptions& opt = {}) {
  return integrate_yp(YpField(p), x0, t0, t1, opt);
}

// ---------------------------------------------------------------------------
// Backward flow

struct MinimizeResult {
  double minimizer = 0.0;
  double value = 0.0;
  std::optional<bool> attainable;  // set when the oracle ran
  std::optional<double> oracle_minimizer;
  double t0 = 0.0;
  Trajectory trajectory;
};

/// Root of the increasing function g inside [lo, hi] by safeguarded Newton.
template <class G, class DG>
double safeguarded_newton(G g, DG dg, double x, double lo, double hi) {
  double glo = g(lo);
  for (int i = 0; i < 200; ++i) {
    const double gx = g(x);
    if (gx == 0.0) return x;
    if ((gx < 0.0) == (glo < 0.0)) {
      lo = x;
      glo = gx;
    } else {
      hi = x;
    }
    const double d = dg(x);
    double next = d != 0.0 ? x - gx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4e-16 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

/// Newton polish of a critical point of p, staying near the start.
inline double polish_critical(const Polynomial& p, double x) {
  const Polynomial d1 = derivative(p);
  const Polynomial d2 = derivative(p, 2);
  for (int i = 0; i < 50; ++i) {
    const double s = d2(x);
    if (s == 0.0) break;
    const double dx = d1(x) / s;
    if (!std::isfinite(dx)) break;
    x -= dx;
    if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

struct MinimizeOptions {
  bool with_oracle = true;
  double match_tol = kMatchTol;
  FlowOptions flow;
};

/// Global minimization by the backward critical-point flow: convexify at
/// t0 = 1.2 max(T*, 1), take the unique minimizer there, follow it back to t = 0.
inline MinimizeResult backward_flow_minimize(const Polynomial& p, const MinimizeOptions& opt = {}) {
  require_even_positive(p);
  if (p.degree() < 2) throw DomainError("degree must be at least 2");
  MinimizeResult res;
  const double t_star = convexification_time(p).t_star;
  res.t0 = 1.2 * std::max(t_star, 1.0);

  const Polynomial slice = evolve_at(p, res.t0);
  const Polynomial g = derivative(slice);
  const Polynomial dg = derivative(slice, 2);
  const int n = slice.degree();
  const double centroid = -slice[static_cast<std::size_t>(n - 1)] / (n * slice.leading());
  const double bound = cauchy_bound(g);
  const double x_start = safeguarded_newton(g, dg, std::clamp(centroid, -bound, bound), -bound, bound);

  res.trajectory = integrate_yp(p, x_start, res.t0, 0.0, opt.flow);
  if (res.trajectory.termination != Termination::ReachedTarget)
    throw ConsistencyViolation("backward flow did not reach t = 0 (" +
                               std::string(to_string(res.trajectory.termination)) + ")");
  res.minimizer = polish_critical(p, res.trajectory.end().x);
  res.value = p(res.minimizer);
  if (opt.with_oracle) {
    const auto oracle = brute_force_min(p);
    double best = std::numeric_limits<double>::infinity();
    for (double m : oracle.minimizers) {
      if (std::abs(m - res.minimizer) < best) {
        best = std::abs(m - res.minimizer);
        res.oracle_minimizer = m;
      }
    }
    res.attainable = best <= opt.match_tol;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Confinement / escape zones

struct Interval {
  double lo;
  double hi;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct ZoneReport {
  std::vector<Interval> confinement;
  std::vector<MergePoint> merge_points;  // FP1 ∩ FP2 events
  double boundary_tol = 1e-6;
  double t_max = 0.0;

  bool confined(double x) const {
    return std::any_of(confinement.begin(), confinement.end(), [&](const Interval& i) { return i.contains(x); });
  }
};

struct ZoneOptions {
  int grid = 400;
  double boundary_tol = 1e-6;
  double t_max = 0.0;  // 0: 1.5 T* + 1
  unsigned threads = 0;  // 0: hardware concurrency
  FlowOptions flow;
};

namespace detail {

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Whether the flow line starting at (x0, 0) is absorbed by a merge before
/// t_stop.  Starting on the inflection set counts as confined.
inline bool is_confined(const YpField& field, double x0, double t_stop, const FlowOptions& flow) {
  FlowOptions f = flow;
  f.record = false;
  try {
    const auto tr = integrate_yp(field, x0, 0.0, t_stop, f);
    return tr.termination == Termination::SingularityMerge;
  } catch (const StartOnSingularity&) {
    return true;
  }
}

/// Confinement zone by shooting flow lines forward from a grid at t = 0.
///
/// The grid covers an interval containing every root of p' - v for each
/// merge level v, plus the critical points of p themselves.  Since p(., t) is
/// convex past T* no merge can happen later, so each shot stops at
/// min(t_max, T* (1 + 1e-6)).  Adjacent grid points with different verdicts
/// are bisected to boundary_tol.
inline ZoneReport classify_zones(const Polynomial& p, const ZoneOptions& opt = {}) {
  require_even_positive(p);
  ZoneReport rep;
  rep.boundary_tol = opt.boundary_tol;
  const double t_star = convexification_time(p).t_star;
  rep.t_max = opt.t_max > 0.0 ? opt.t_max : 1.5 * t_star + 1.0;
  if (p.degree() < 4 || t_star <= 0.0) return rep;
  rep.merge_points = fp1_merge_points(p);

  const YpField field(p);
  const double t_stop = std::min(rep.t_max, t_star * (1.0 + 1e-6) + 1e-12);
  FlowOptions flow = opt.flow;
  if (flow.max_step <= 0.0) flow.max_step = rep.t_max / 1000.0;

  // Bounding interval from the flow levels through inflection cusps.
  const Polynomial dp = derivative(p);
  double bound = std::max(cauchy_bound(dp), cauchy_bound(derivative(p, 2)));
  for (const auto& c : fp2_fp3_intersections(p)) {
    const double level = field.px(c.x, c.t);
    bound = std::max(bound, cauchy_bound(dp - Polynomial::constant(level)));
  }

  std::vector<double> xs;
  const int grid = std::max(opt.grid, 2);
  for (int i = 0; i < grid; ++i) xs.push_back(-bound + 2.0 * bound * i / (grid - 1));
  for (const auto& r : real_roots(dp)) xs.push_back(r.value);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<char> conf(xs.size());
  detail::parallel_for(xs.size(), opt.threads,
                       [&](std::size_t i) { conf[i] = is_confined(field, xs[i], t_stop, flow) ? 1 : 0; });

  // Boundaries between adjacent verdicts.
  std::vector<double> edge(xs.size() > 0 ? xs.size() - 1 : 0, 0.0);
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (conf[i] != conf[i + 1]) todo.push_back(i);
  detail::parallel_for(todo.size(), opt.threads, [&](std::size_t j) {
    const std::size_t i = todo[j];
    double in = conf[i] ? xs[i] : xs[i + 1];
    double out = conf[i] ? xs[i + 1] : xs[i];
    while (std::abs(out - in) > opt.boundary_tol) {
      const double mid = 0.5 * (in + out);
      if (is_confined(field, mid, t_stop, flow))
        in = mid;
      else
        out = mid;
    }
    edge[i] = 0.5 * (in + out);
  });

  std::optional<double> open;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (conf[i] && !open) open = (i == 0) ? xs[0] : edge[i - 1];
    if (conf[i] && (i + 1 == xs.size() || !conf[i + 1])) {
      const double hi = (i + 1 == xs.size()) ? xs[i] : edge[i];
      if (!rep.confinement.empty() && rep.confinement.back().hi >= *open)
        rep.confinement.back().hi = std::max(rep.confinement.back().hi, hi);
      else
        rep.confinement.push_back({*open, hi});
      open.reset();
    }
  }
  return rep;
}

struct AttainabilityReport {
  bool attainable = false;  // the oracle minimizer lies in the escape zone
  OracleResult oracle;
  ZoneReport zones;
  MinimizeResult flow;
  bool flow_matches_oracle = false;
};

/// The backward flow reaches the global minimizer exactly when that minimizer
/// lies outside the confinement zone.  Both sides are computed independently
/// and a disagreement raises ConsistencyViolation.
inline AttainabilityReport attainability(const Polynomial& p, const ZoneOptions& zopt = {},
                                         const MinimizeOptions& mopt = {}) {
  AttainabilityReport rep;
  rep.oracle = brute_force_min(p);
  rep.zones = classify_zones(p, zopt);
  MinimizeOptions m = mopt;
  m.with_oracle = false;
  rep.flow = backward_flow_minimize(p, m);
  double best = std::numeric_limits<double>::infinity();
  for (double x : rep.oracle.minimizers) {
    best = std::min(best, std::abs(x - rep.flow.minimizer));
    if (!rep.zones.confined(x)) rep.attainable = true;
  }
  rep.flow_matches_oracle = best <= mopt.match_tol;
  rep.flow.attainable = rep.flow_matches_oracle;
  if (!rep.oracle.minimizers.empty()) {
    double nearest = rep.oracle.minimizers.front();
    for (double x : rep.oracle.minimizers)
      if (std::abs(x - rep.flow.minimizer) < std::abs(nearest - rep.flow.minimizer)) nearest = x;
    rep.flow.oracle_minimizer = nearest;
  }
  if (rep.flow_matches_oracle != rep.attainable)
    throw ConsistencyViolation("backward flow " + std::string(rep.flow_matches_oracle ? "reached" : "missed") +
                               " the global minimizer but the zone test says " +
                               (rep.attainable ? "escape" : "confined"));
  return rep;
}

}  // namespace heatflow
