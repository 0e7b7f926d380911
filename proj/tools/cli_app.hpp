#pragma once

// Command-line front end.  main() is a thin wrapper around run_cli so the
// tests can drive every subcommand in-process.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "heatflow/heatflow.hpp"

namespace heatflow::cli {

enum ExitCode { kOk = 0, kFailure = 1, kDomain = 2, kUsage = 64, kConsistency = 70 };

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::optional<std::string> poly;
  std::optional<std::string> coeffs;
  std::optional<double> t;
  std::optional<double> t_max;
  std::optional<double> x0;
  std::optional<double> t_end;
  std::optional<double> candidate;
  int grid = 0;  // 0: per-command default
  std::string ks = "1,2,3";
  std::string method = "backward-flow";
  std::optional<std::string> json_path, csv_path, svg_path;
  unsigned threads = 0;
  double tol_root = kDefaultRootTol;
  double tol_match = kMatchTol;
  double tol_rtol = 1e-9;
  double tol_sing = 0.0;
  double tol_boundary = 1e-6;
};

namespace detail {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Polynomial input_polynomial(const RunConfig& c) {
  if (c.poly.has_value() == c.coeffs.has_value()) throw UsageError("give exactly one of --poly or --coeffs");
  return c.poly ? parse(*c.poly) : parse_descending_coeffs(*c.coeffs);
}

inline Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v == 0.0 ? 0.0 : v;  // no "-0.0"
}

inline Json descending(const Polynomial& p) {
  Json a = Json::array();
  for (int k = p.degree(); k >= 0; --k) a.push_back(num(p.coefficient(k)));
  return a;
}

inline Json intervals(const std::vector<Interval>& zs) {
  Json a = Json::array();
  for (const auto& z : zs) a.push_back(Json::array({num(z.lo), num(z.hi)}));
  return a;
}

inline Json merges(const std::vector<MergePoint>& ms) {
  Json a = Json::array();
  for (const auto& m : ms) a.push_back({{"x", num(m.x)}, {"t", num(m.t)}, {"kind", to_string(m.kind)}});
  return a;
}

// Writes text to a path, or to `out` when the path is "-".
inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline FlowOptions flow_options(const RunConfig& c) {
  FlowOptions f;
  f.rtol = c.tol_rtol;
  f.sing_tol = c.tol_sing;
  return f;
}

inline ZoneOptions zone_options(const RunConfig& c) {
  ZoneOptions z;
  if (c.grid > 0) z.grid = c.grid;
  z.boundary_tol = c.tol_boundary;
  if (c.t_max) z.t_max = *c.t_max;
  z.threads = c.threads;
  z.flow = flow_options(c);
  return z;
}

inline std::vector<int> parse_ks(const std::string& s) {
  std::vector<int> ks;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const int k = std::stoi(item);
      if (k < 1) throw std::invalid_argument("k");
      ks.push_back(k);
    } catch (const std::exception&) {
      throw UsageError("--k expects positive integers, got '" + item + "'");
    }
  }
  if (ks.empty()) throw UsageError("--k is empty");
  return ks;
}

inline int cmd_evolve(const RunConfig& c, std::ostream& out) {
  const Polynomial p = input_polynomial(c);
  if (!c.t) throw UsageError("evolve needs --t");
  const Polynomial q = evolve_at(p, *c.t);
  if (c.json_path) {
    emit(*c.json_path, dump({{"t", num(*c.t)}, {"poly", format(q)}, {"coeffs", descending(q)}}), out);
  } else {
    out << format(q) << "\n";
  }
  return kOk;
}

inline int cmd_fingerprint(const RunConfig& c, std::ostream& out) {
  const Polynomial p = input_polynomial(c);
  require_even_positive(p);
  const double t_max = c.t_max ? *c.t_max : default_t_max(p);
  const int steps = c.grid > 0 ? c.grid : 400;
  FingerprintOptions fo;
  fo.root_tol = c.tol_root;
  std::vector<FingerprintBranch> branches;
  for (int k : parse_ks(c.ks)) {
    auto b = fingerprint(p, k, t_max, steps, fo);
    branches.insert(branches.end(), b.begin(), b.end());
  }
  const std::string csv = fingerprint_csv(branches);
  if (c.csv_path) emit(*c.csv_path, csv, out);
  if (c.svg_path) {
    std::vector<MergePoint> ms = fp1_merge_points(p);
    for (const auto& m : fp2_fp3_intersections(p)) ms.push_back(m);
    const auto zones = classify_zones(p, zone_options(c)).confinement;
    emit(*c.svg_path, render_fingerprint_svg(branches, zones, ms), out);
  }
  if (c.json_path) {
    Json a = Json::array();
    for (const auto& b : branches) {
      Json j = {{"k", b.k}, {"born_at", num(b.born_at)}, {"dies_at", b.dies_at ? num(*b.dies_at) : Json(nullptr)},
                {"samples", b.samples.size()}};
      a.push_back(j);
    }
    emit(*c.json_path, dump({{"t_max", num(t_max)}, {"branches", a}}), out);
  }
  if (!c.csv_path && !c.svg_path && !c.json_path) out << csv;
  return kOk;
}

inline Json minimize_json(const Polynomial& p, const RunConfig& c, std::vector<double>& all) {
  const ZoneOptions zo = zone_options(c);
  MinimizeOptions mo;
  mo.match_tol = c.tol_match;
  mo.flow = flow_options(c);
  Json j;
  if (c.method == "backward-flow") {
    const auto rep = attainability(p, zo, mo);
    all = {rep.flow.minimizer};
    j["minimizer"] = num(rep.flow.minimizer);
    j["value"] = num(rep.flow.value);
    j["attainable"] = rep.attainable;
    j["oracle"] = rep.flow.oracle_minimizer ? num(*rep.flow.oracle_minimizer) : Json(nullptr);
    j["zones"] = intervals(rep.zones.confinement);
    j["t0"] = num(rep.flow.t0);
    return j;
  }
  const auto oracle = brute_force_min(p);
  std::optional<double> t0;
  if (c.method == "oracle") {
    all = oracle.minimizers;
  } else if (c.method == "quartic-direct") {
    all = {backward_iteration(QuarticCoeffs::from(p))};
    t0 = analyze(QuarticCoeffs::from(p)).t_u;
  } else if (c.method == "fixed-start") {
    all = fixed_start_descent(QuarticCoeffs::from(p));
  } else {
    throw UsageError("unknown --method " + c.method);
  }
  const auto check = verify_method(p, all.front(), c.tol_match);
  double nearest = oracle.minimizers.front();
  for (double m : oracle.minimizers)
    if (std::abs(m - all.front()) < std::abs(nearest - all.front())) nearest = m;
  j["minimizer"] = num(all.front());
  j["value"] = num(p(all.front()));
  j["attainable"] = check.match;
  j["oracle"] = num(nearest);
  j["zones"] = intervals(classify_zones(p, zo).confinement);
  j["t0"] = t0 ? num(*t0) : Json(nullptr);
  return j;
}

inline int cmd_minimize(const RunConfig& c, std::ostream& out) {
  const Polynomial p = input_polynomial(c);
  std::vector<double> all;
  Json j = minimize_json(p, c, all);
  if (all.size() > 1) {
    Json a = Json::array();
    for (double x : all) a.push_back(num(x));
    j["minimizers"] = a;
  }
  if (c.json_path) {
    emit(*c.json_path, dump(j), out);
  } else {
    for (double x : all) out << "minimizer " << fmt_num(x) << "\n";
    out << "value " << fmt_num(p(all.front())) << "\n";
    out << "attainable " << (j["attainable"].get<bool>() ? "true" : "false") << "\n";
  }
  return kOk;
}

inline int cmd_zones(const RunConfig& c, std::ostream& out) {
  const Polynomial p = input_polynomial(c);
  const auto rep = classify_zones(p, zone_options(c));
  const Json j = {{"zones", intervals(rep.confinement)},
                  {"merge_points", merges(rep.merge_points)},
                  {"t_max", num(rep.t_max)},
                  {"boundary_tol", num(rep.boundary_tol)}};
  emit(c.json_path.value_or("-"), dump(j), out);
  return kOk;
}

inline int cmd_quartic(const RunConfig& c, std::ostream& out) {
  QuarticCoeffs q;
  if (c.coeffs && !c.poly) {
    // Four values are the monic tail a,b,c,d; five are a full descending list.
    const Polynomial p = parse_descending_coeffs(*c.coeffs);
    const auto n = std::count(c.coeffs->begin(), c.coeffs->end(), ',') + 1;
    q = n == 4 ? QuarticCoeffs{p.coefficient(3), p.coefficient(2), p.coefficient(1), p.coefficient(0)}
               : QuarticCoeffs::from(p);
  } else {
    q = QuarticCoeffs::from(input_polynomial(c));
  }
  const auto r = analyze(q);
  Json crit = Json::array();
  for (double x : r.critical_points) crit.push_back(num(x));
  Json j;
  j["coeffs"] = {{"a", num(q.a)}, {"b", num(q.b)}, {"c", num(q.c)}, {"d", num(q.d)}};
  j["t_star"] = num(r.t_star);
  j["t_u"] = num(r.t_u);
  j["merge_x"] = num(r.merge_x);
  j["x_init"] = num(r.x_init);
  j["confinement"] = r.confinement ? Json::array({num(r.confinement->lo), num(r.confinement->hi)}) : Json(nullptr);
  j["side"] = to_string(r.side);
  j["critical_points"] = crit;
  emit(c.json_path.value_or("-"), dump(j), out);
  return kOk;
}

inline int cmd_sextic(const RunConfig& c, std::ostream& out) {
  const Polynomial p = input_polynomial(c);
  const auto a = analyze_sextic(p);
  Json delta = Json::array();
  for (int k = a.delta.degree(); k >= 0; --k) delta.push_back(num(a.delta.coefficient(k)));
  Json ms = Json::array();
  for (const auto& m : a.merges)
    ms.push_back({{"t", num(m.t)}, {"x", num(m.x)}, {"x_original", num(m.x + a.form.shift)}, {"case", to_string(m.kind)}});
  Json neg = Json::array(), rej = Json::array();
  for (double t : a.negative_roots) neg.push_back(num(t));
  for (double t : a.rejected_roots) rej.push_back(num(t));
  Json j;
  j["depressed"] = {{"b", num(a.form.b)}, {"c", num(a.form.c)}, {"d", num(a.form.d)}, {"e", num(a.form.e)},
                    {"f", num(a.form.f)}, {"shift", num(a.form.shift)}};
  j["delta_t"] = delta;
  j["table_mismatch"] = num(a.table_mismatch);
  j["merges"] = ms;
  j["negative_roots"] = neg;
  j["rejected_roots"] = rej;
  j["degenerate"] = a.degenerate;
  emit(c.json_path.value_or("-"), dump(j), out);
  return kOk;
}

inline int cmd_trace(const RunConfig& c, std::ostream& out) {
  const Polynomial p = input_polynomial(c);
  require_even_positive(p);
  if (!c.x0) throw UsageError("trace needs --x0");
  const double t0 = c.t.value_or(0.0);
  const double t1 = c.t_end ? *c.t_end : (c.t_max ? *c.t_max : default_t_max(p));
  const auto tr = integrate_yp(p, *c.x0, t0, t1, flow_options(c));
  if (c.csv_path) emit(*c.csv_path, trajectory_csv(tr), out);
  if (c.json_path || !c.csv_path) {
    Json j = {{"x0", num(*c.x0)},
              {"t0", num(t0)},
              {"t1", num(t1)},
              {"end", {{"t", num(tr.end().t)}, {"x", num(tr.end().x)}}},
              {"termination", to_string(tr.termination)},
              {"samples", tr.samples.size()}};
    if (tr.cusp_crossing) j["cusp_crossing"] = {{"t", num(tr.cusp_crossing->t)}, {"x", num(tr.cusp_crossing->x)}};
    emit(c.json_path.value_or("-"), dump(j), out);
  }
  return kOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
  const Polynomial p = input_polynomial(c);
  Json j;
  if (c.candidate) {
    const auto oracle = brute_force_min(p);
    const auto m = verify_method(p, *c.candidate, c.tol_match);
    j = {{"candidate", num(*c.candidate)}, {"match", m.match}, {"distance", num(m.distance)}};
    Json mins = Json::array();
    for (double x : oracle.minimizers) mins.push_back(num(x));
    j["oracle"] = mins;
  } else {
    MinimizeOptions mo;
    mo.match_tol = c.tol_match;
    mo.flow = flow_options(c);
    const auto rep = attainability(p, zone_options(c), mo);  // throws on a biconditional failure
    j = {{"flow_minimizer", num(rep.flow.minimizer)},
         {"flow_matches_oracle", rep.flow_matches_oracle},
         {"oracle_outside_zone", rep.attainable},
         {"consistent", true}};
  }
  emit(c.json_path.value_or("-"), dump(j), out);
  return kOk;
}

inline int dispatch(const RunConfig& c, std::ostream& out) {
  if (c.command == "evolve") return cmd_evolve(c, out);
  if (c.command == "fingerprint") return cmd_fingerprint(c, out);
  if (c.command == "minimize") return cmd_minimize(c, out);
  if (c.command == "zones") return cmd_zones(c, out);
  if (c.command == "quartic") return cmd_quartic(c, out);
  if (c.command == "sextic") return cmd_sextic(c, out);
  if (c.command == "trace") return cmd_trace(c, out);
  if (c.command == "verify") return cmd_verify(c, out);
  throw UsageError("no subcommand given");
}

}  // namespace detail

inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    return detail::dispatch(c, out);
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const SyntaxError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const MultipleVariables& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const ConsistencyViolation& e) {
    err << "consistency violation: " << e.what() << "\n";
    return kConsistency;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Global minimization of univariate polynomials by heat evolution", "heatflow"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* s) {
    auto* poly = s->add_option("--poly", c.poly, "polynomial expression, e.g. \"x^4-3x^2+1\"");
    auto* coeffs = s->add_option("--coeffs", c.coeffs, "coefficients, highest degree first, comma separated");
    poly->excludes(coeffs);
    s->add_option("--json", c.json_path, "write JSON to PATH ('-' for stdout)");
    s->add_option("--threads", c.threads, "worker threads for zone shooting (0: all cores)");
    s->add_option("--tol-root", c.tol_root, "relative root tolerance")->check(CLI::PositiveNumber);
    s->add_option("--tol-match", c.tol_match, "oracle match tolerance")->check(CLI::PositiveNumber);
    s->add_option("--tol-rtol", c.tol_rtol, "integrator relative tolerance")->check(CLI::PositiveNumber);
    s->add_option("--tol-sing", c.tol_sing, "singularity tolerance (0: scaled default)")->check(CLI::NonNegativeNumber);
    s->add_option("--tol-boundary", c.tol_boundary, "zone boundary tolerance")->check(CLI::PositiveNumber);
  };
  auto t_max = [&](CLI::App* s) { s->add_option("--t-max", c.t_max, "largest scale")->check(CLI::PositiveNumber); };
  auto grid = [&](CLI::App* s, const char* what) { s->add_option("--grid", c.grid, what)->check(CLI::PositiveNumber); };

  auto* evolve = app.add_subcommand("evolve", "print the heat-evolved polynomial p(., t)");
  common(evolve);
  evolve->add_option("--t", c.t, "scale")->required();

  auto* fp = app.add_subcommand("fingerprint", "trace zero sets of x-derivatives over scale");
  common(fp);
  t_max(fp);
  grid(fp, "number of t steps (default 400)");
  fp->add_option("--k", c.ks, "derivative orders, comma separated (default 1,2,3)");
  fp->add_option("--csv", c.csv_path, "write CSV to PATH ('-' for stdout)");
  fp->add_option("--svg", c.svg_path, "write SVG to PATH ('-' for stdout)");

  auto* mini = app.add_subcommand("minimize", "global minimizer");
  common(mini);
  t_max(mini);
  grid(mini, "zone shooting grid (default 400)");
  mini->add_option("--method", c.method, "backward-flow | quartic-direct | fixed-start | oracle")
      ->check(CLI::IsMember({"backward-flow", "quartic-direct", "fixed-start", "oracle"}));

  auto* zones = app.add_subcommand("zones", "confinement zone by forward shooting");
  common(zones);
  t_max(zones);
  grid(zones, "shooting grid (default 400)");

  auto* quartic = app.add_subcommand("quartic", "closed-form quartic report");
  common(quartic);

  auto* sextic = app.add_subcommand("sextic", "merge discriminant of a sextic");
  common(sextic);

  auto* trace = app.add_subcommand("trace", "one critical-point trajectory");
  common(trace);
  t_max(trace);
  trace->add_option("--x0", c.x0, "start abscissa")->required();
  trace->add_option("--t", c.t, "start scale (default 0)")->check(CLI::NonNegativeNumber);
  trace->add_option("--t-end", c.t_end, "end scale (default 1.5 T* + 1)")->check(CLI::NonNegativeNumber);
  trace->add_option("--csv", c.csv_path, "write samples as CSV to PATH ('-' for stdout)");

  auto* verify = app.add_subcommand("verify", "check a candidate or the backward flow against the oracle");
  common(verify);
  t_max(verify);
  grid(verify, "zone shooting grid (default 400)");
  verify->add_option("--candidate", c.candidate, "candidate minimizer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  for (auto* s : app.get_subcommands()) c.command = s->get_name();
  return run(c, out, err);
}

}  // namespace heatflow::cli
