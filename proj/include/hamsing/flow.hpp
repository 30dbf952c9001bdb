#pragma once

// Numerical continuation of the Hamiltonian system in the complex plane,
// blow-up detection, landing on movable singularities through a regularizing
// chart, Puiseux-data extraction and monodromy measurement.
//
// Chart. Along a branch tracked by the continuous argument of y1 set
//   u = y1^{-d/(N+1)},   w = y2 * u^{(M+1)/d},   d = gcd{M+1, N+1}.
// The singularity is u = 0, where w tends to a root of L2 w^{N+1} = -L1.
// Multiplying the definition of the auxiliary function W by u^E,
// E = (M+1)(N+1)/d, gives the algebraic relation
//   0 = L1 + L2 w^{N+1} + sum_I alpha_ij(z) w^j u^{e_ij}
//          + sum_J beta_kl(z) w^k u^{f_kl} - W u^E              (*)
// with positive integer exponents e_ij = ((M+1)(N+1)-i(N+1)-j(M+1))/d and
// f_kl = ((M+1)(N+1)+l(N+1)-k(M+1))/d. Substituting (*) into the chain rule
// cancels the 1/u singularity of dw/du exactly, leaving the regular system
//   dz/du = -((N+1)/d) u^{rho/d - 1} / D1
//   dw/du = [ -d sum e_ij alpha w^j u^{e_ij-1}
//             - (M+1)(N+1) sum beta w^k u^{f_kl-1}
//             + (M+1)(N+1) W u^{E-1} ] / (d D1)
//   D1    = (N+1) L2 w^N + sum_{j>=1} j alpha_ij w^{j-1} u^{e_ij}
// with rho = MN-1. W itself is carried as V = W - R through the certificate
// W' = P W + sum gamma + Q + R' (all of P, Q, R bounded), so
//   dV/du = (P W + Q + sum gamma) dz/du.
// For admissible coefficients every gamma vanishes and the system is regular
// up to and including u = 0; nonzero gamma contributes a 1/u term (the
// logarithmic divergence of W), in which case the integration must stop at a
// positive sigma_min.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hamsing/auxw.hpp"
#include "hamsing/model.hpp"
#include "hamsing/mptypes.hpp"
#include "hamsing/rk.hpp"

namespace hamsing {

// ---------------------------------------------------------------------------
// Paths

template <class C>
struct PathSeg {
  enum class Kind { Line, Arc };
  Kind kind = Kind::Line;
  C a{}, b{};                               // Line endpoints
  C center{};                               // Arc data
  double radius = 0, ang0 = 0, ang1 = 0;    // radians; ang1 < ang0 = clockwise

  static PathSeg line(const C& a, const C& b) {
    PathSeg s;
    s.kind = Kind::Line;
    s.a = a;
    s.b = b;
    return s;
  }
  static PathSeg arc(const C& center, double radius, double ang0, double ang1) {
    PathSeg s;
    s.kind = Kind::Arc;
    s.center = center;
    s.radius = radius;
    s.ang0 = ang0;
    s.ang1 = ang1;
    return s;
  }

  C point(double t) const {
    using std::exp;
    if (kind == Kind::Line) return a + C(t) * (b - a);
    double th = ang0 + t * (ang1 - ang0);
    return center + C(radius) * exp(C(0.0, th));
  }
  C deriv(double t) const {
    using std::exp;
    if (kind == Kind::Line) return b - a;
    double th = ang0 + t * (ang1 - ang0);
    return C(0.0, ang1 - ang0) * C(radius) * exp(C(0.0, th));
  }
  double length() const {
    if (kind == Kind::Line) return abs_d(b - a);
    return radius * std::abs(ang1 - ang0);
  }
};

template <class C>
using Path = std::vector<PathSeg<C>>;

template <class C>
void validate_path(const Path<C>& path) {
  if (path.empty()) throw Error("EmptyPath", "path has no segments");
  double scale = 0;
  for (const auto& s : path) scale += s.length();
  if (scale <= 0) throw Error("EmptyPath", "path has zero length");
  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    if (abs_d(path[k].point(1.0) - path[k + 1].point(0.0)) > 1e-9 * scale)
      throw Error("PathDiscontinuity",
                  "segments " + std::to_string(k) + " and " + std::to_string(k + 1) +
                      " do not join");
}

/// Straight path from a to b with counterclockwise semicircular detours of
/// radius r around every avoid-point closer than r to the segment.
template <class C>
Path<C> line_with_detours(const C& a, const C& b, const std::vector<C>& avoid,
                          double r) {
  struct Hit {
    double t;  // projection parameter of the avoid point
    C p1, p2;  // circle/line intersections (entry, exit)
    C center;
  };
  C dir = b - a;
  double len = abs_d(dir);
  if (len == 0) throw Error("EmptyPath", "degenerate line");
  C u = dir / C(len);
  std::vector<Hit> hits;
  for (const C& zb : avoid) {
    // decompose zb - a in the (u, iu) frame
    C rel = (zb - a) / u;
    double along = real_d(rel), perp = imag_d(rel);
    if (along <= 0 || along >= len) continue;
    if (std::abs(perp) >= r) continue;
    double s = std::sqrt(r * r - perp * perp);
    hits.push_back({along / len, a + C(along - s) * u, a + C(along + s) * u, zb});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.t < y.t; });
  Path<C> path;
  C cur = a;
  for (const auto& h : hits) {
    if (abs_d(h.p1 - cur) > 0) path.push_back(PathSeg<C>::line(cur, h.p1));
    double th1 = arg_d(h.p1 - h.center);
    double th2 = arg_d(h.p2 - h.center);
    while (th2 <= th1) th2 += 2 * M_PI;  // counterclockwise around the point
    path.push_back(PathSeg<C>::arc(h.center, r, th1, th2));
    cur = h.p2;
  }
  path.push_back(PathSeg<C>::line(cur, b));
  validate_path(path);
  return path;
}

// ---------------------------------------------------------------------------
// Continuation

struct FlowOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double r_switch = 1e3;    // blow-up threshold on |y1|
  double clearance = 1e-3;  // minimum distance to fixed singularities
  double chart_tol_factor = 1e2;  // chart consistency: defect < factor * rtol
  double closure_tol = 1e-6;      // monodromy return-map closure
};

template <class C>
struct TraceSample {
  double s = 0;  // global path parameter: segment index + local t in [0,1]
  C z{}, y1{}, y2{};
  double theta1 = 0;  // continuously tracked argument of y1
};

template <class C>
struct ContinuationTrace {
  std::vector<TraceSample<C>> samples;
  bool blew_up = false;
  long accepted = 0, rejected = 0;
};

template <class C>
ContinuationTrace<C> continue_along_path(const HamiltonianSpec& spec, const C& z0,
                                         const C& y10, const C& y20,
                                         const Path<C>& path,
                                         const FlowOptions& opts = {}) {
  if (!spec.validated) throw Error("NotValidated", "spec must pass validate_spec");
  validate_path(path);
  if (abs_d(path.front().point(0.0) - z0) > 1e-9 * (1 + abs_d(z0)))
    throw Error("PathMismatch", "path does not start at z0");
  auto fixed = fixed_singularities(spec);

  ContinuationTrace<C> trace;
  std::array<C, 2> y{y10, y20};
  double theta = arg_d(y10);
  trace.samples.push_back({0.0, z0, y10, y20, theta});
  if (abs_d(y10) >= opts.r_switch) {
    trace.blew_up = true;
    return trace;
  }

  for (std::size_t k = 0; k < path.size(); ++k) {
    const auto& seg = path[k];
    auto f = [&](double t, const std::array<C, 2>& s, std::array<C, 2>& out) {
      C z = seg.point(t);
      auto [f1, f2] = rhs(spec, z, s[0], s[1]);
      C dz = seg.deriv(t);
      out[0] = f1 * dz;
      out[1] = f2 * dz;
    };
    bool stop = false;
    auto cb = [&](double t, const std::array<C, 2>& s, double) {
      C z = seg.point(t);
      for (const auto& zf : fixed)
        if (abs_d(z - C(zf.real(), zf.imag())) < opts.clearance)
          throw Error("ClearanceViolation", "path passes a fixed singularity");
      const C& prev = trace.samples.back().y1;
      if (abs_d(prev) > 0 && abs_d(s[0]) > 0) theta += arg_d(s[0] / prev);
      trace.samples.push_back({double(k) + t, z, s[0], s[1], theta});
      if (abs_d(s[0]) >= opts.r_switch) {
        stop = true;
        return false;
      }
      return true;
    };
    auto res = rk45<C, 2>(f, 0.0, 1.0, y, opts.rtol, opts.atol, cb);
    trace.accepted += res.accepted;
    trace.rejected += res.rejected;
    y = res.y;
    if (stop) {
      trace.blew_up = true;
      return trace;
    }
  }
  return trace;
}

/// Sample with |y1| closest to the target (for monodromy start points etc.).
template <class C>
const TraceSample<C>& sample_near_abs_y1(const ContinuationTrace<C>& trace,
                                         double target) {
  if (trace.samples.empty()) throw Error("EmptyTrace", "no samples");
  std::size_t best = 0;
  double bd = 1e300;
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    double d = std::abs(std::log(std::max(abs_d(trace.samples[i].y1), 1e-300) / target));
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return trace.samples[best];
}

/// Values of the auxiliary function along a trace.
template <class C>
std::vector<C> w_trace(const AuxiliaryW& aux, const HamiltonianSpec& spec,
                       const ContinuationTrace<C>& trace) {
  std::vector<C> ws;
  ws.reserve(trace.samples.size());
  for (const auto& s : trace.samples) {
    if (abs_d(s.y1) < 1e-9)
      throw Error("ZeroCrossing",
                  "y1 vanishes along the trace; route the path around the zero");
    ws.push_back(eval_W(aux, spec, s.z, s.y1, s.y2));
  }
  return ws;
}

// ---------------------------------------------------------------------------
// Regularizing chart

namespace chart_detail {

struct Term {
  int wexp = 0;
  long uexp = 0;
  const CoeffPoly* poly = nullptr;
};

struct Model {
  int M = 0, N = 0;
  long d = 1, rho = 1, E = 1;
  std::vector<Term> alpha;  // algebraic relation, wexp = j, uexp = e_ij
  std::vector<Term> beta;   // wexp = k, uexp = f_kl
  std::vector<Term> P, Q, R, gamma;
  const HamiltonianSpec* spec = nullptr;
};

inline long mono_uexp(const Model& m, int a, int b) {
  long num = -long(a) * (m.N + 1) - long(b) * (m.M + 1);
  if (num % m.d != 0) throw Error("ChartInconsistency", "exponent off the d-lattice");
  return num / m.d;
}

inline void push_laurent(const Model& m, const LaurentPoly& lp, std::vector<Term>& out,
                         bool require_regular) {
  for (const auto& [mono, poly] : lp.terms) {
    long e = mono_uexp(m, mono.first, mono.second);
    if (require_regular && e < 0)
      throw Error("ChartInconsistency", "unbounded certificate term");
    out.push_back({mono.second, e, &poly});
  }
}

inline Model build(const HamiltonianSpec& spec, const AuxiliaryW& aux) {
  Model m;
  m.spec = &spec;
  m.M = spec.M;
  m.N = spec.N;
  auto sc = structural_constants(spec.M, spec.N);
  m.d = sc.d;
  m.rho = long(spec.M) * spec.N - 1;
  m.E = (long(spec.M) + 1) * (spec.N + 1) / m.d;
  for (const auto& [ij, poly] : spec.alphas) {
    long e = m.E + mono_uexp(m, ij.first, ij.second);
    m.alpha.push_back({ij.second, e, &poly});
  }
  for (const auto& [kl, poly] : aux.betas) {
    if (poly.is_zero()) continue;
    long e = m.E + mono_uexp(m, -kl.second, kl.first);
    m.beta.push_back({kl.first, e, &poly});
  }
  push_laurent(m, aux.P, m.P, true);
  push_laurent(m, aux.Q, m.Q, true);
  push_laurent(m, aux.R, m.R, true);
  for (const auto& [ij, poly] : aux.gamma_report) {
    if (poly.is_zero()) continue;
    m.gamma.push_back({ij.second, mono_uexp(m, ij.first, ij.second), &poly});
  }
  return m;
}

template <class C>
C eval_terms(const std::vector<Term>& terms, const C& z, const C& w, const C& u) {
  C acc(0);
  for (const auto& t : terms)
    acc += t.poly->template eval<C>(z) * ipow(w, t.wexp) * ipow(u, t.uexp);
  return acc;
}

/// Residual and magnitude scale of the algebraic relation (*).
template <class C>
std::pair<double, double> relation_defect(const Model& m, const C& z, const C& w,
                                          const C& u, const C& W) {
  C L1 = to_complex<C>(m.spec->leading1), L2 = to_complex<C>(m.spec->leading2);
  C g = L1 + L2 * ipow(w, m.N + 1);
  double scale = abs_d(L1) + abs_d(L2 * ipow(w, m.N + 1));
  for (const auto& t : m.alpha) {
    C v = t.poly->template eval<C>(z) * ipow(w, t.wexp) * ipow(u, t.uexp);
    g += v;
    scale += abs_d(v);
  }
  for (const auto& t : m.beta) {
    C v = t.poly->template eval<C>(z) * ipow(w, t.wexp) * ipow(u, t.uexp);
    g += v;
    scale += abs_d(v);
  }
  C wu = W * ipow(u, m.E);
  g -= wu;
  scale += abs_d(wu);
  return {abs_d(g), std::max(scale, 1e-30)};
}

/// Newton refinement of the chart root of (*) in w at fixed (z, u, W).
template <class C>
C refine_root(const Model& m, const C& z, const C& u, const C& W, C w) {
  C L1 = to_complex<C>(m.spec->leading1), L2 = to_complex<C>(m.spec->leading2);
  for (int it = 0; it < 60; ++it) {
    C g = L1 + L2 * ipow(w, m.N + 1) - W * ipow(u, m.E);
    C dg = C(double(m.N + 1)) * L2 * ipow(w, m.N);
    for (const auto& t : m.alpha) {
      C a = t.poly->template eval<C>(z) * ipow(u, t.uexp);
      g += a * ipow(w, t.wexp);
      if (t.wexp >= 1) dg += C(double(t.wexp)) * a * ipow(w, t.wexp - 1);
    }
    for (const auto& t : m.beta) {
      C a = t.poly->template eval<C>(z) * ipow(u, t.uexp);
      g += a * ipow(w, t.wexp);
      if (t.wexp >= 1) dg += C(double(t.wexp)) * a * ipow(w, t.wexp - 1);
    }
    C dw = g / dg;
    w -= dw;
    if (abs_d(dw) < 1e-30 * (1 + abs_d(w))) break;
  }
  return w;
}

}  // namespace chart_detail

template <class C>
struct ChartPoint {
  double sigma = 0;  // u = sigma * u_switch
  C u{}, z{}, w{}, W{};
};

struct PuiseuxFit {
  double exponent1 = 0, exponent2 = 0;  // fitted log-log slopes of y1, y2
  double residual = 0;                  // rms residual of the component-1 fit
  std::size_t points = 0;
};

template <class C>
struct LandingResult {
  bool reached = true;  // false when stopped at sigma_min > 0
  C z_inf{};
  C w0{};              // chart value at u = 0
  C u_switch{};
  int root_index = 0;  // selected root of L2 w^{N+1} = -L1
  int branch_class = 0;
  C leading{};         // measured c1^{rho/d}, the single-valued leading datum
  double chart_defect = 0;  // max relative residual of the algebraic relation
  PuiseuxFit fit;
  std::vector<ChartPoint<C>> chart;
  int M = 0, N = 0;
  long d = 1;

  /// Reconstructed (z, y1, y2) samples from the chart, capped in |y1|.
  std::vector<TraceSample<C>> reconstruct(double max_abs_y1 = 1e12) const {
    using std::exp;
    std::vector<TraceSample<C>> out;
    for (const auto& p : chart) {
      if (p.sigma <= 0) continue;
      double la = -double(N + 1) / d * std::log(abs_d(p.u));
      if (la > std::log(max_abs_y1)) continue;
      C inv = C(1) / p.u;
      C y1 = ipow(inv, (N + 1) / int(d));
      C y2 = p.w * ipow(inv, (M + 1) / int(d));
      out.push_back({p.sigma, p.z, y1, y2, arg_d(y1)});
    }
    return out;
  }
};

namespace chart_detail {

inline std::pair<double, double> fit_line(const std::vector<std::pair<double, double>>& xy) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : xy) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = double(xy.size());
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double icpt = (sy - slope * sx) / n;
  double rss = 0;
  for (auto [x, y] : xy) {
    double r = y - slope * x - icpt;
    rss += r * r;
  }
  return {slope, std::sqrt(rss / n)};
}

}  // namespace chart_detail

/// Least-squares Puiseux exponents from trace samples near a singularity.
/// Requires at least 20 samples spanning two decades in |z - z_inf|.
template <class C>
PuiseuxFit local_puiseux_fit(const std::vector<TraceSample<C>>& samples, const C& z_inf) {
  std::vector<std::pair<double, double>> p1, p2;
  for (const auto& s : samples) {
    double dz = abs_d(s.z - z_inf);
    double a1 = abs_d(s.y1), a2 = abs_d(s.y2);
    if (dz <= 0 || a1 <= 0 || a2 <= 0) continue;
    p1.push_back({std::log(dz), std::log(a1)});
    p2.push_back({std::log(dz), std::log(a2)});
  }
  if (p1.size() < 20) throw Error("InsufficientSpan", "need at least 20 usable samples");
  auto [lo, hi] = std::minmax_element(p1.begin(), p1.end());
  if (hi->first - lo->first < 2 * std::log(10.0))
    throw Error("InsufficientSpan", "samples span fewer than two decades");
  PuiseuxFit fit;
  auto [s1, r1] = chart_detail::fit_line(p1);
  auto [s2, r2] = chart_detail::fit_line(p2);
  (void)r2;
  fit.exponent1 = s1;
  fit.exponent2 = s2;
  fit.residual = r1;
  fit.points = p1.size();
  return fit;
}

/// Integrates the regularizing chart from the blown-up end of a trace to the
/// singular point u = 0 (or to sigma_min when a nonzero gamma makes W itself
/// diverge). Throws RootAmbiguity when two chart roots compete and
/// ChartInconsistency when the algebraic relation degrades.
template <class C>
LandingResult<C> land_on_singularity(const HamiltonianSpec& spec, const AuxiliaryW& aux,
                                     const ContinuationTrace<C>& trace,
                                     const FlowOptions& opts = {},
                                     double sigma_min = 0.0) {
  using std::exp;
  using std::log;
  if (!trace.blew_up || trace.samples.empty())
    throw Error("NotBlownUp", "landing requires a trace that hit the blow-up threshold");
  auto model = chart_detail::build(spec, aux);
  const int M = spec.M, N = spec.N;
  const long d = model.d, rho = model.rho, E = model.E;
  if (!model.gamma.empty() && sigma_min <= 0)
    throw Error("GammaNonzero",
                "W diverges logarithmically; landing needs sigma_min > 0");

  const auto& last = trace.samples.back();
  using RT = typename C::value_type;
  const RT pi = acos(RT(-1));

  // Branch-consistent chart coordinates at the switch point.
  long winding = llround((last.theta1 - arg_d(last.y1)) / (2 * M_PI));
  C logy1 = log(last.y1) + C(RT(0), RT(2) * pi * RT(double(winding)));
  C u_sw = exp((C(-double(d)) / C(double(N + 1))) * logy1);
  C w_sw = last.y2 * ipow(u_sw, (M + 1) / int(d));
  C W_sw = eval_W(aux, spec, last.z, last.y1, last.y2);

  // Root selection: refine every root of L2 w^{N+1} = -L1 at the switch point
  // and pick the one the orbit is attached to.
  C ratio = -to_complex<C>(spec.leading1) / to_complex<C>(spec.leading2);
  double rr = std::pow(abs_d(ratio), 1.0 / (N + 1));
  double ra = arg_d(ratio);
  int best = -1;
  double bd = 1e300, second = 1e300;
  for (int n = 0; n <= N; ++n) {
    double th = (ra + 2 * M_PI * n) / (N + 1);
    C omega = C(rr) * exp(C(0.0, th));
    C refined = chart_detail::refine_root(model, last.z, u_sw, W_sw, omega);
    double dist = abs_d(w_sw - refined);
    if (dist < bd) {
      second = bd;
      bd = dist;
      best = n;
    } else if (dist < second) {
      second = dist;
    }
  }
  if (second < 2 * bd)
    throw Error("RootAmbiguity",
                "two chart roots within a factor 2; lower r_switch and retry");

  LandingResult<C> res;
  res.u_switch = u_sw;
  res.root_index = best;
  res.M = M;
  res.N = N;
  res.d = d;

  C Rval0 = chart_detail::eval_terms(model.R, last.z, w_sw, u_sw);
  std::array<C, 3> state{last.z, w_sw, W_sw - Rval0};

  double max_defect = 0;
  auto record = [&](double sigma, const std::array<C, 3>& s) {
    C u = C(sigma) * u_sw;
    C W = s[2] + chart_detail::eval_terms(model.R, s[0], s[1], u);
    auto [g, scale] = chart_detail::relation_defect(model, s[0], s[1], u, W);
    max_defect = std::max(max_defect, g / scale);
    res.chart.push_back({sigma, u, s[0], s[1], W});
  };
  record(1.0, state);

  auto f = [&](double sigma, const std::array<C, 3>& s, std::array<C, 3>& out) {
    C u = C(sigma) * u_sw;
    const C &z = s[0], &w = s[1];
    C Rv = chart_detail::eval_terms(model.R, z, w, u);
    C W = s[2] + Rv;
    C L2 = to_complex<C>(spec.leading2);
    C D1 = C(double(N + 1)) * L2 * ipow(w, N);
    C Bw = C(double((M + 1) * (N + 1))) * W * ipow(u, E - 1);
    for (const auto& t : model.alpha) {
      C a = t.poly->template eval<C>(z);
      if (t.wexp >= 1)
        D1 += C(double(t.wexp)) * a * ipow(w, t.wexp - 1) * ipow(u, t.uexp);
      Bw -= C(double(d * t.uexp)) * a * ipow(w, t.wexp) * ipow(u, t.uexp - 1);
    }
    for (const auto& t : model.beta)
      Bw -= C(double((M + 1) * (N + 1))) * t.poly->template eval<C>(z) *
            ipow(w, t.wexp) * ipow(u, t.uexp - 1);
    C dzdu = C(-double(N + 1) / d) * ipow(u, rho / d - 1) / D1;
    C dwdu = Bw / (C(double(d)) * D1);
    C dVdz = chart_detail::eval_terms(model.P, z, w, u) * W +
             chart_detail::eval_terms(model.Q, z, w, u);
    if (!model.gamma.empty())
      dVdz += chart_detail::eval_terms(model.gamma, z, w, u);
    out[0] = dzdu * u_sw;
    out[1] = dwdu * u_sw;
    out[2] = dVdz * dzdu * u_sw;
  };
  auto cb = [&](double sigma, const std::array<C, 3>& s, double) {
    record(sigma, s);
    return true;
  };
  // Integrate down a geometric ladder in sigma so the chart history is
  // log-spaced (the Puiseux fit needs samples across many decades).
  const double lo_limit = std::max(sigma_min, 1e-12);
  double hi = 1.0;
  while (hi > lo_limit * (1 + 1e-12)) {
    double lo = std::max(hi / 2, lo_limit);
    auto rk = rk45<C, 3>(f, hi, lo, state, opts.rtol, opts.atol, cb, (lo - hi) / 8);
    state = rk.y;
    hi = lo;
  }
  if (sigma_min <= 0) {
    auto rk = rk45<C, 3>(f, hi, 0.0, state, opts.rtol, opts.atol, cb);
    state = rk.y;
  }

  res.chart_defect = max_defect;
  if (max_defect > opts.chart_tol_factor * opts.rtol)
    throw Error("ChartInconsistency",
                "algebraic relation defect " + std::to_string(max_defect) +
                    " exceeds tolerance");

  res.reached = sigma_min <= 0;
  res.z_inf = state[0];
  res.w0 = state[1];
  if (!res.reached) return res;

  // Single-valued leading datum X = y1^{rho/d} (z - z_inf)^{(N+1)/d} -> c1^{rho/d},
  // measured in log space at a chart point small enough that the O(u)
  // correction is negligible but |z - z_inf| still dominates the z_inf error.
  double dz_sw = abs_d(last.z - res.z_inf);
  double floor_dz = std::max(1e4 * opts.rtol, 1e-8) * dz_sw;
  const ChartPoint<C>* pick = nullptr;
  for (const auto& p : res.chart)
    if (p.sigma > 0 && abs_d(p.z - res.z_inf) >= floor_dz) pick = &p;
  if (!pick) pick = &res.chart[res.chart.size() / 2];
  {
    double lu = std::log(abs_d(pick->u)), au = arg_d(pick->u);
    double ly1 = -double(N + 1) / d * lu, ty1 = -double(N + 1) / d * au;
    C dz = pick->z - res.z_inf;
    double re = double(rho) / d * ly1 + double(N + 1) / d * std::log(abs_d(dz));
    double im = double(rho) / d * ty1 + double(N + 1) / d * arg_d(dz);
    res.leading = C(std::exp(re) * std::cos(im), std::exp(re) * std::sin(im));
  }
  // Class index against the representative roots of X^d = modulus.
  C mod = C(-1) / (to_complex<C>(spec.leading2) *
                   ipow(to_complex<C>(spec.leading1), N) * ipow(C(double(rho)), N + 1));
  double mr = std::pow(abs_d(mod), 1.0 / d), ma = arg_d(mod);
  double cls_d = 1e300;
  for (int n = 0; n < d; ++n) {
    C xn = C(mr) * exp(C(0.0, (ma + 2 * M_PI * n) / d));
    if (abs_d(res.leading - xn) < cls_d) {
      cls_d = abs_d(res.leading - xn);
      res.branch_class = n;
    }
  }

  // Puiseux exponents from the chart history in log space (overflow-free).
  {
    std::vector<std::pair<double, double>> p1, p2;
    for (const auto& p : res.chart) {
      if (p.sigma <= 0) continue;
      double dz = abs_d(p.z - res.z_inf);
      if (dz < floor_dz) continue;
      double lu = std::log(abs_d(p.u));
      p1.push_back({std::log(dz), -double(N + 1) / d * lu});
      p2.push_back({std::log(dz), std::log(abs_d(p.w)) - double(M + 1) / d * lu});
    }
    if (p1.size() >= 20) {
      auto [s1, r1] = chart_detail::fit_line(p1);
      auto [s2, r2] = chart_detail::fit_line(p2);
      (void)r2;
      res.fit.exponent1 = s1;
      res.fit.exponent2 = s2;
      res.fit.residual = r1;
      res.fit.points = p1.size();
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Monodromy

struct MonodromyReport {
  double radius = 0;
  std::vector<double> defects;  // closure defect after each full loop
  long sheets = 0;              // first loop count with closure, 0 if none seen
};

template <class C>
MonodromyReport monodromy_loop(const HamiltonianSpec& spec, const C& z_inf,
                               TraceSample<C> start, long loops,
                               const FlowOptions& opts = {}, int max_retries = 3) {
  for (int attempt = 0;; ++attempt) {
    MonodromyReport rep;
    rep.radius = abs_d(start.z - z_inf);
    double ang = arg_d(start.z - z_inf);
    C z = start.z, y1 = start.y1, y2 = start.y2;
    const C z0 = z, y10 = y1, y20 = y2;
    bool blew = false;
    for (long k = 0; k < loops; ++k) {
      Path<C> circle{PathSeg<C>::arc(z_inf, rep.radius, ang, ang + 2 * M_PI)};
      auto tr = continue_along_path(spec, z, y1, y2, circle, opts);
      if (tr.blew_up) {
        blew = true;
        break;
      }
      const auto& e = tr.samples.back();
      z = e.z;
      y1 = e.y1;
      y2 = e.y2;
      double defect = std::max(abs_d(y1 - y10) / (1 + abs_d(y10)),
                               abs_d(y2 - y20) / (1 + abs_d(y20)));
      rep.defects.push_back(defect);
      if (rep.sheets == 0 && defect < opts.closure_tol) rep.sheets = k + 1;
      (void)z0;
    }
    if (!blew) return rep;
    if (attempt >= max_retries)
      throw Error("LoopBlowUp", "monodromy loop blew up after all radius retries");
    // Move the start point halfway in along the radial ray and retry.
    C mid = z_inf + (start.z - z_inf) / C(2);
    Path<C> ray{PathSeg<C>::line(start.z, mid)};
    auto tr = continue_along_path(spec, start.z, start.y1, start.y2, ray, opts);
    if (tr.blew_up)
      throw Error("LoopBlowUp", "blow-up while shrinking the monodromy radius");
    start = tr.samples.back();
  }
}

// ---------------------------------------------------------------------------
// Singularity hunting

template <class C>
struct SingularityEvent {
  C z_inf{};
  int branch_class = 0;
  long sheets = 0;           // measured by monodromy (0 = no closure observed)
  long sheets_expected = 0;  // (MN-1)/d from the structure of the class
  C leading{};               // c1^{rho/d}
  double exponent1 = 0, exponent2 = 0;
  double fit_residual = 0;
  double chart_defect = 0;
  std::vector<double> closure_defects;
};

template <class C>
struct HuntResult {
  std::vector<SingularityEvent<C>> events;
  std::vector<std::string> ray_log;  // one status line per ray
};

/// Continue outward, land with automatic retries on RootAmbiguity (halving the
/// blow-up threshold re-runs the continuation cheaply).
template <class C>
std::pair<ContinuationTrace<C>, LandingResult<C>> locate_singularity(
    const HamiltonianSpec& spec, const AuxiliaryW& aux, const C& z0, const C& y10,
    const C& y20, const Path<C>& path, const FlowOptions& opts = {}) {
  FlowOptions o = opts;
  for (int attempt = 0;; ++attempt) {
    auto trace = continue_along_path(spec, z0, y10, y20, path, o);
    if (!trace.blew_up) throw Error("NoBlowUp", "no blow-up along the path");
    try {
      auto land = land_on_singularity(spec, aux, trace, o);
      return {std::move(trace), std::move(land)};
    } catch (const Error& e) {
      if (std::string(e.code()) != "RootAmbiguity" || attempt >= 3) throw;
      o.r_switch /= 2;
    }
  }
}

template <class C>
HuntResult<C> hunt_singularities(const HamiltonianSpec& spec, const AuxiliaryW& aux,
                                 const C& z0, const C& y10, const C& y20,
                                 const C& region_center, double region_radius,
                                 int rays, const FlowOptions& opts = {},
                                 long loops = 0, double monodromy_abs_y1 = 15.0) {
  HuntResult<C> result;
  auto sc = structural_constants(spec.M, spec.N);
  if (loops <= 0) loops = sc.ramification;
  for (int k = 0; k < rays; ++k) {
    double th = 2 * M_PI * k / rays;
    C target = region_center + C(region_radius) * C(std::cos(th), std::sin(th));
    std::string tag = "ray " + std::to_string(k) + ": ";
    try {
      Path<C> path{PathSeg<C>::line(z0, target)};
      auto [trace, land] = locate_singularity(spec, aux, z0, y10, y20, path, opts);
      if (abs_d(land.z_inf - region_center) > region_radius * (1 + 1e-9)) {
        result.ray_log.push_back(tag + "blow-up outside the region");
        continue;
      }
      bool dup = false;
      for (const auto& e : result.events)
        if (abs_d(e.z_inf - land.z_inf) < 1e-6 * (1 + abs_d(land.z_inf))) dup = true;
      if (dup) {
        result.ray_log.push_back(tag + "duplicate singularity");
        continue;
      }
      SingularityEvent<C> ev;
      ev.z_inf = land.z_inf;
      ev.branch_class = land.branch_class;
      ev.sheets_expected = sc.ramification;
      ev.leading = land.leading;
      ev.exponent1 = land.fit.exponent1;
      ev.exponent2 = land.fit.exponent2;
      ev.fit_residual = land.fit.residual;
      ev.chart_defect = land.chart_defect;
      auto start = sample_near_abs_y1(trace, monodromy_abs_y1);
      auto mono = monodromy_loop(spec, land.z_inf, start, loops, opts);
      ev.sheets = mono.sheets;
      ev.closure_defects = mono.defects;
      result.events.push_back(std::move(ev));
      result.ray_log.push_back(tag + "singularity recorded");
    } catch (const Error& e) {
      result.ray_log.push_back(tag + e.code() + ": " + e.what());
    }
  }
  return result;
}

}  // namespace hamsing
