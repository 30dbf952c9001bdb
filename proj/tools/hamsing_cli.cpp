// Command-line front end: reads JSON Hamiltonian specs, dispatches to the
// symbolic and numeric engines, and emits JSON reports plus CSV plot data.
//
// Exit codes: 0 success, 1 domain errors (spec rejected, conditions violated,
// numerical failures), 2 usage errors.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "hamsing/auxw.hpp"
#include "hamsing/flow.hpp"
#include "hamsing/model.hpp"
#include "hamsing/report.hpp"
#include "hamsing/series.hpp"

using nlohmann::json;
using namespace hamsing;

namespace {

struct Config {
  std::string command;
  std::string spec_path;
  double tol = 1e-10;
  double r_switch = 1e3;
  int precision = 16;
  long order = 10;
  long loops = 0;  // 0 = sheets expected from the structure
  double radius = 0;
  int rays = 16;
  int branch_class = 0;
  std::string out;  // output path prefix; empty = report to stdout only
  std::string z0 = "0,0", y1 = "1,0", y2 = "1,0";
  std::string target;       // endpoint of the probe/continuation ray
  std::string z_inf = "auto";
  std::string region = "0,0,1";
};

std::pair<double, double> parse_complex(const std::string& s) {
  std::size_t comma = s.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("expected a complex number as \"re\" or \"re,im\": " + s);
  }
}

std::tuple<double, double, double> parse_region(const std::string& s) {
  std::size_t c1 = s.find(','), c2 = s.rfind(',');
  if (c1 == std::string::npos || c2 == c1)
    throw CLI::ValidationError("expected a disc as \"re,im,radius\": " + s);
  try {
    return {std::stod(s.substr(0, c1)), std::stod(s.substr(c1 + 1, c2 - c1 - 1)),
            std::stod(s.substr(c2 + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("expected a disc as \"re,im,radius\": " + s);
  }
}

void emit_report(const Config& cfg, json report) {
  report["command"] = cfg.command;
  report["spec"] = cfg.spec_path;
  std::string text = report.dump(2) + "\n";
  if (cfg.out.empty())
    std::cout << text;
  else
    write_file(cfg.out + ".json", text);
}

json rat_json(const Rat& r) {
  return json::array(
      {json::parse(r.get_num().get_str()), json::parse(r.get_den().get_str())});
}

int cmd_validate(const Config& cfg) {
  auto spec = spec_from_file(cfg.spec_path);
  auto sc = structural_constants(spec.M, spec.N);
  json j;
  j["valid"] = true;
  j["normalized"] = spec.normalized;
  j["index_set_size"] = build_index_set(spec.M, spec.N).size();
  j["structural"] = {{"p", rat_json(sc.p)},
                     {"q", rat_json(sc.q)},
                     {"d", sc.d},
                     {"ramification", sc.ramification}};
  j["canonical_spec"] = json::parse(spec_to_json(spec));
  emit_report(cfg, j);
  return 0;
}

int cmd_resonance(const Config& cfg) {
  auto spec = spec_from_file(cfg.spec_path);
  json j;
  json conds = json::array();
  for (const auto& c : resonance_conditions(spec.M, spec.N))
    conds.push_back({{"order", c.order}, {"text", c.text()}});
  j["generic_conditions"] = conds;
  json viol = json::array();
  for (const auto& c : violated_conditions(spec))
    viol.push_back(c.text());
  j["violated_by_spec"] = viol;
  j["admissible"] = viol.empty();
  emit_report(cfg, j);
  return 0;
}

template <class C>
int cmd_series(const Config& cfg) {
  auto spec = spec_from_file(cfg.spec_path);
  auto [z0re, z0im] = parse_complex(cfg.z0);
  C z0(z0re, z0im);
  auto series = instantiate_numeric<C>(spec, z0, cfg.branch_class, cfg.order);
  json j;
  j["z0"] = complex_json(z0);
  j["branch_class"] = cfg.branch_class;
  j["ramification"] = series.ramification;
  j["start_exponents"] = {series.k1, series.k2};
  j["truncation"] = series.K;
  json c1 = json::array(), c2 = json::array();
  for (const auto& v : series.coeffs1) c1.push_back(complex_json(v));
  for (const auto& v : series.coeffs2) c2.push_back(complex_json(v));
  j["coeffs1"] = c1;
  j["coeffs2"] = c2;
  auto [e1, e2] = predicted_residual_exponents(spec, cfg.order);
  j["predicted_residual_exponents"] = {e1, e2};
  C t(0.1, 0.05);
  auto [r1, r2] = series_residual(spec, series, t);
  j["residual_at_t"] = {{"t", complex_json(t)},
                        {"r1", abs_d(r1)},
                        {"r2", abs_d(r2)}};
  emit_report(cfg, j);
  return 0;
}

template <class C>
AuxiliaryW aux_or_relaxed(const HamiltonianSpec& spec, bool* gamma_nonzero) {
  try {
    auto aux = solve_betas(spec);
    *gamma_nonzero = false;
    return aux;
  } catch (const Error& e) {
    if (std::string(e.code()) != "GammaNonzero") throw;
    *gamma_nonzero = true;
    return solve_betas(spec, /*allow_nonzero_gamma=*/true);
  }
}

template <class C>
int cmd_continue(const Config& cfg) {
  auto spec = spec_from_file(cfg.spec_path);
  auto [zr, zi] = parse_complex(cfg.z0);
  auto [ar, ai] = parse_complex(cfg.y1);
  auto [br, bi] = parse_complex(cfg.y2);
  if (cfg.target.empty()) throw CLI::ValidationError("continue requires --target");
  auto [tr_, ti_] = parse_complex(cfg.target);
  C z0(zr, zi), y10(ar, ai), y20(br, bi), target(tr_, ti_);

  FlowOptions opts;
  opts.rtol = cfg.tol;
  opts.atol = cfg.tol * 1e-2;
  opts.r_switch = cfg.r_switch;
  Path<C> path{PathSeg<C>::line(z0, target)};
  auto trace = continue_along_path(spec, z0, y10, y20, path, opts);

  bool gamma_nonzero = false;
  auto aux = aux_or_relaxed<C>(spec, &gamma_nonzero);
  std::vector<C> ws;
  bool have_w = true;
  try {
    ws = w_trace(aux, spec, trace);
  } catch (const Error&) {
    have_w = false;
  }

  json j;
  j["blew_up"] = trace.blew_up;
  j["samples"] = trace.samples.size();
  j["steps"] = {{"accepted", trace.accepted}, {"rejected", trace.rejected}};
  if (trace.blew_up && !gamma_nonzero) {
    auto land = land_on_singularity(spec, aux, trace, opts);
    SingularityEvent<C> ev;
    ev.z_inf = land.z_inf;
    ev.branch_class = land.branch_class;
    ev.sheets_expected = structural_constants(spec.M, spec.N).ramification;
    ev.leading = land.leading;
    ev.exponent1 = land.fit.exponent1;
    ev.exponent2 = land.fit.exponent2;
    ev.fit_residual = land.fit.residual;
    ev.chart_defect = land.chart_defect;
    j["event"] = event_json(ev);
  } else if (trace.blew_up) {
    j["event"] = "skipped: resonance conditions violated (GammaNonzero)";
  }
  if (!cfg.out.empty())
    write_file(cfg.out + "_trace.csv", trace_csv(trace, have_w ? &ws : nullptr));
  emit_report(cfg, j);
  return 0;
}

template <class C>
int cmd_hunt(const Config& cfg) {
  auto spec = spec_from_file(cfg.spec_path);
  auto aux = solve_betas(spec);
  auto [zr, zi] = parse_complex(cfg.z0);
  auto [ar, ai] = parse_complex(cfg.y1);
  auto [br, bi] = parse_complex(cfg.y2);
  auto [cr, ci, rad] = parse_region(cfg.region);
  C z0(zr, zi), y10(ar, ai), y20(br, bi), center(cr, ci);

  FlowOptions opts;
  opts.rtol = cfg.tol;
  opts.atol = cfg.tol * 1e-2;
  opts.r_switch = cfg.r_switch;
  auto hunt = hunt_singularities(spec, aux, z0, y10, y20, center, rad, cfg.rays,
                                 opts, cfg.loops);
  json j;
  json evs = json::array();
  for (const auto& ev : hunt.events) evs.push_back(event_json(ev));
  j["events"] = evs;
  j["ray_log"] = hunt.ray_log;
  if (!cfg.out.empty()) write_file(cfg.out + "_events.csv", events_csv(hunt.events));
  emit_report(cfg, j);
  return 0;
}

template <class C>
int cmd_monodromy(const Config& cfg) {
  auto spec = spec_from_file(cfg.spec_path);
  auto aux = solve_betas(spec);
  auto [zr, zi] = parse_complex(cfg.z0);
  auto [ar, ai] = parse_complex(cfg.y1);
  auto [br, bi] = parse_complex(cfg.y2);
  C z0(zr, zi), y10(ar, ai), y20(br, bi);
  auto sc = structural_constants(spec.M, spec.N);
  long loops = cfg.loops > 0 ? cfg.loops : sc.ramification;

  FlowOptions opts;
  opts.rtol = cfg.tol;
  opts.atol = cfg.tol * 1e-2;
  opts.r_switch = cfg.r_switch;

  // Probe for a singularity: along --target when given, otherwise rotate
  // through eight outward rays until one blows up.
  std::vector<C> targets;
  if (!cfg.target.empty()) {
    auto [xr, xi] = parse_complex(cfg.target);
    targets.push_back(C(xr, xi));
  } else {
    for (int k = 0; k < 8; ++k) {
      double th = 2 * M_PI * k / 8;
      targets.push_back(z0 + C(3 * std::cos(th), 3 * std::sin(th)));
    }
  }
  ContinuationTrace<C> trace;
  LandingResult<C> land;
  bool located = false;
  std::string last_err = "no probe rays";
  for (const C& target : targets) {
    try {
      Path<C> path{PathSeg<C>::line(z0, target)};
      std::tie(trace, land) = locate_singularity(spec, aux, z0, y10, y20, path, opts);
      located = true;
      break;
    } catch (const Error& e) {
      last_err = e.what();
    }
  }
  if (!located) throw Error("NoBlowUp", "no probe ray blew up: " + last_err);
  C z_inf = land.z_inf;
  if (cfg.z_inf != "auto") {
    auto [xr, xi] = parse_complex(cfg.z_inf);
    z_inf = C(xr, xi);
  }
  auto start = sample_near_abs_y1(trace, 15.0);
  if (cfg.radius > 0) {
    // Walk radially until the requested loop radius is reached.
    C on_circle = z_inf + (start.z - z_inf) * C(cfg.radius / abs_d(start.z - z_inf));
    Path<C> ray{PathSeg<C>::line(start.z, on_circle)};
    auto t2 = continue_along_path(spec, start.z, start.y1, start.y2, ray, opts);
    if (t2.blew_up) throw Error("LoopBlowUp", "blow-up while moving to the loop radius");
    start = t2.samples.back();
  }
  auto mono = monodromy_loop(spec, z_inf, start, loops, opts);
  json j;
  j["z_inf"] = complex_json(z_inf);
  j["radius"] = mono.radius;
  j["loops"] = loops;
  j["closure_defects"] = mono.defects;
  j["sheets"] = mono.sheets;
  j["sheets_expected"] = sc.ramification;
  emit_report(cfg, j);
  return 0;
}

template <class C>
int cmd_wcheck(const Config& cfg) {
  auto spec = spec_from_file(cfg.spec_path);
  bool gamma_nonzero = false;
  auto aux = aux_or_relaxed<C>(spec, &gamma_nonzero);
  auto [zr, zi] = parse_complex(cfg.z0);
  auto [ar, ai] = parse_complex(cfg.y1);
  auto [br, bi] = parse_complex(cfg.y2);
  C z0(zr, zi), y10(ar, ai), y20(br, bi);
  std::vector<C> targets;
  if (!cfg.target.empty()) {
    auto [xr, xi] = parse_complex(cfg.target);
    targets.push_back(C(xr, xi));
  } else {
    for (int k = 0; k < 8; ++k) {
      double th = 2 * M_PI * k / 8;
      targets.push_back(z0 + C(3 * std::cos(th), 3 * std::sin(th)));
    }
  }

  FlowOptions opts;
  opts.rtol = cfg.tol;
  opts.atol = cfg.tol * 1e-2;
  opts.r_switch = std::min(cfg.r_switch, 1e2);  // window |y1|: 1e2 ... 1e6
  ContinuationTrace<C> trace;
  for (const C& target : targets) {
    Path<C> path{PathSeg<C>::line(z0, target)};
    trace = continue_along_path(spec, z0, y10, y20, path, opts);
    if (trace.blew_up) break;
  }
  if (!trace.blew_up) throw Error("NoBlowUp", "no probe ray blew up");

  auto sc = structural_constants(spec.M, spec.N);
  double sigma_min =
      std::pow(opts.r_switch / 1e6, double(sc.d) / (spec.N + 1));
  auto land = land_on_singularity(spec, aux, trace, opts, sigma_min);
  double w_sw = abs_d(land.chart.front().W), w_max = 0;
  bool monotone = true;
  double prev = 0;
  for (const auto& p : land.chart) {
    double w = abs_d(p.W);
    w_max = std::max(w_max, w);
    if (w < prev * 0.8) monotone = false;  // allow small oscillation
    prev = std::max(prev, w);
  }
  json j;
  j["gamma_nonzero"] = gamma_nonzero;
  j["w_at_switch"] = w_sw;
  j["w_max"] = w_max;
  j["bounded"] = w_max <= 10.0 * std::max(w_sw, 1e-12);
  j["monotone_growth"] = gamma_nonzero && monotone && w_max > 2 * std::max(w_sw, 1e-12);
  emit_report(cfg, j);
  return gamma_nonzero ? 1 : 0;
}

template <class C>
int dispatch(const Config& cfg) {
  if (cfg.command == "series") return cmd_series<C>(cfg);
  if (cfg.command == "continue") return cmd_continue<C>(cfg);
  if (cfg.command == "hunt") return cmd_hunt<C>(cfg);
  if (cfg.command == "monodromy") return cmd_monodromy<C>(cfg);
  if (cfg.command == "wcheck") return cmd_wcheck<C>(cfg);
  throw CLI::ValidationError("unknown command " + cfg.command);
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"Movable-singularity toolkit for polynomial Hamiltonian systems"};
  app.require_subcommand(1);

  std::vector<CLI::App*> subs;
  for (const char* name : {"validate", "resonance", "series", "continue", "hunt",
                           "monodromy", "wcheck"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--spec", cfg.spec_path, "Hamiltonian spec JSON file")->required();
    sub->add_option("--tol", cfg.tol, "integration tolerance");
    sub->add_option("--r-switch", cfg.r_switch, "blow-up threshold on |y1|");
    sub->add_option("--precision", cfg.precision, "working precision in digits (>= 15)");
    sub->add_option("--order", cfg.order, "series truncation exponent K");
    sub->add_option("--loops", cfg.loops, "monodromy loop count");
    sub->add_option("--radius", cfg.radius, "monodromy loop radius");
    sub->add_option("--rays", cfg.rays, "number of hunt rays");
    sub->add_option("--region", cfg.region, "search disc as re,im,radius");
    sub->add_option("--out", cfg.out, "output path prefix for report/CSV files");
    sub->add_option("--z0", cfg.z0, "start point as re,im");
    sub->add_option("--y1", cfg.y1, "initial y1 as re,im");
    sub->add_option("--y2", cfg.y2, "initial y2 as re,im");
    sub->add_option("--target", cfg.target, "ray endpoint as re,im");
    sub->add_option("--z-inf", cfg.z_inf, "singularity location as re,im, or auto");
    sub->add_option("--class", cfg.branch_class, "branch class index");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  if (const char* env = std::getenv("HAMSING_PRECISION")) cfg.precision = std::atoi(env);
  if (cfg.precision < 15) {
    std::cerr << "usage error: precision must be at least 15 digits\n";
    return 2;
  }
  if (cfg.precision > 50) {
    std::cerr << "usage error: precision beyond 50 digits is not built in\n";
    return 2;
  }
  if (cfg.tol <= 0 || cfg.r_switch <= 0 || cfg.order <= 0) {
    std::cerr << "usage error: numeric options must be positive\n";
    return 2;
  }

  try {
    if (cfg.command == "validate") return cmd_validate(cfg);
    if (cfg.command == "resonance") return cmd_resonance(cfg);
    if (cfg.precision <= 16) return dispatch<CD>(cfg);
    return dispatch<CM>(cfg);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    json err{{"error", e.code()}, {"message", e.what()}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
