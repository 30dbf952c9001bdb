#include "hamsing/auxw.hpp"

#include <algorithm>
#include <vector>

#include <nlohmann/json.hpp>

namespace hamsing {

std::set<Mono> build_J(int M, int N) {
  if (M < 1 || N < 1) throw Error("NonpositiveDegrees", "require M, N >= 1");
  if (long(M) * N == 1) throw Error("DegenerateClass", "MN = 1 is outside the class");
  std::set<Mono> J;
  for (int k = 1; k <= N + 1; ++k)
    for (int l = 0;; ++l) {
      const long q = long(k) * (M + 1) - long(l) * (N + 1);
      if (q <= 1 - long(M) * N) break;  // q decreases in l
      if (q < M + N + 2) J.insert({k, l});
    }
  return J;
}

namespace {

// One full rewrite of W' into the buckets P (coefficient of W), Q (bounded),
// R (bounded, appearing as R'), and gamma (coefficients of the unbounded
// polynomial-class monomials and of y2^N/y1, keyed by (i,j) with (-1,N) for
// the latter).
struct Rewrite {
  LaurentPoly P, Q, R;
  std::map<IndexPair, CoeffPoly> gamma;
};

class Engine {
 public:
  Engine(const HamiltonianSpec& spec, const std::map<Mono, CoeffPoly>& betas)
      : s_(spec), betas_(betas), M_(spec.M), N_(spec.N),
        rho_(long(spec.M) * spec.N - 1) {}

  Rewrite run() {
    seed_w_derivative();
    long fuel = 500000;
    while (!pending_.empty()) {
      if (--fuel < 0)
        throw Error("NonTermination", "rewriting loop exceeded its step budget");
      auto it = pending_.begin();
      auto [m, c] = *it;
      pending_.erase(it);
      classify(m, std::move(c));
    }
    return std::move(out_);
  }

 private:
  // W' = sum alpha' y1^i y2^j + sum beta' y2^k/y1^l
  //      + sum beta_kl (k y2^{k-1}/y1^l * y2' - l y2^k/y1^{l+1} * y1')
  // with the Hamiltonian equations substituted for y1', y2'.
  void seed_w_derivative() {
    for (const auto& [ij, a] : s_.alphas) enqueue({ij.first, ij.second}, a.derivative());
    for (const auto& [kl, b] : betas_) {
      auto [k, l] = kl;
      if (b.is_zero()) continue;
      enqueue({-l, k}, b.derivative());
      // k y2^{k-1}/y1^l * (-(M+1) L1 y1^M - sum i alpha y1^{i-1} y2^j)
      enqueue({M_ - l, k - 1}, CRat(Rat(-long(k) * (M_ + 1))) * (to_poly(s_.leading1) * b));
      for (const auto& [ij, a] : s_.alphas)
        if (ij.first >= 1)
          enqueue({ij.first - 1 - l, ij.second + k - 1},
                  CRat(Rat(-long(ij.first) * k)) * (a * b));
      // -l y2^k/y1^{l+1} * ((N+1) L2 y2^N + sum j alpha y1^i y2^{j-1})
      enqueue({-l - 1, k + N_}, CRat(Rat(-long(l) * (N_ + 1))) * (to_poly(s_.leading2) * b));
      for (const auto& [ij, a] : s_.alphas)
        if (ij.second >= 1)
          enqueue({ij.first - l - 1, ij.second + k - 1},
                  CRat(Rat(-long(ij.second) * l)) * (a * b));
    }
  }

  static CoeffPoly to_poly(const CRat& v) { return CoeffPoly::constant(v); }

  bool bounded(Mono m) const {
    auto [a, b] = m;
    if (a == 0 && b == 0) return true;
    return a < 0 && long(-a) * (N_ + 1) - long(b) * (M_ + 1) >= 0;
  }
  long metric(Mono m) const { return long(m.second) * (M_ + 1) + long(m.first) * (N_ + 1); }

  void enqueue(Mono m, CoeffPoly c) {
    if (c.is_zero()) return;
    auto it = pending_.find(m);
    if (it == pending_.end()) {
      pending_.emplace(m, std::move(c));
      return;
    }
    it->second += c;
    if (it->second.is_zero()) pending_.erase(it);
  }

  void classify(Mono m, CoeffPoly c) {
    auto [a, b] = m;
    if (bounded(m)) {
      out_.Q.add(m, c);
      return;
    }
    if (a >= 0) {
      if (metric(m) < long(M_ + 1) * (N_ + 1)) {  // (a,b) in I
        add_gamma({a, b}, c);
        return;
      }
      if (b >= N_ + 1) {
        replace_y2_power(m, c);
        return;
      }
      throw Error("NonTermination", "unclassifiable polynomial monomial");
    }
    if (b >= N_ + 1) {
      replace_y2_power(m, c);
      return;
    }
    if (a == -1 && b == N_) {
      add_gamma({-1, N_}, c);
      return;
    }
    ratio_rewrite(m, c);
  }

  void add_gamma(IndexPair key, const CoeffPoly& c) {
    auto [it, fresh] = out_.gamma.emplace(key, c);
    if (!fresh) it->second += c;
  }

  // L2 y2^{N+1} = W - L1 y1^{M+1} - sum alpha y1^i y2^j - sum beta y2^k/y1^l,
  // applied to one power of y2^{N+1} inside an unbounded monomial.
  void replace_y2_power(Mono m, const CoeffPoly& c) {
    auto [a, b] = m;
    const CRat inv_l2 = CRat(1) / s_.leading2;
    Mono base{a, b - (N_ + 1)};
    // Coefficient of W must be bounded or the decomposition is wrong.
    if (!bounded(base))
      throw Error("NonTermination", "unbounded W-coefficient in power replacement");
    out_.P.add(base, inv_l2 * c);
    enqueue({a + M_ + 1, b - (N_ + 1)}, (-(inv_l2 * s_.leading1)) * c);
    for (const auto& [ij, alpha] : s_.alphas)
      enqueue({a + ij.first, b - (N_ + 1) + ij.second}, (-inv_l2) * (alpha * c));
    for (const auto& [kl, beta] : betas_)
      if (!beta.is_zero())
        enqueue({a - kl.second, b - (N_ + 1) + kl.first}, (-inv_l2) * (beta * c));
  }

  // Solved ratio identity for y2^{j0}/y1^{i0} (unbounded, j0 <= N, not the
  // (1, N) resonance ratio): division by L1 * D with
  // D = MN - 1 + i0(N+1) - j0(M+1) > 0.
  void ratio_rewrite(Mono m, const CoeffPoly& c) {
    const int i0 = -m.first, j0 = m.second;
    const long D = rho_ + long(i0) * (N_ + 1) - long(j0) * (M_ + 1);
    if (D <= 0) throw Error("NonTermination", "non-positive ratio denominator");
    const CRat f = CRat(1) / (s_.leading1 * CRat(Rat(D)));
    const long w = long(N_ + 1) * (M_ + i0);
    CoeffPoly cf = f * c;

    out_.P.add({-(M_ + i0 + 1), j0}, CRat(Rat(w)) * cf);
    // c f (y2^{j0+1}/y1^{M+i0})' = (c f y2^{j0+1}/y1^{M+i0})' - (c f)' (...)
    out_.R.add({-(M_ + i0), j0 + 1}, cf);
    enqueue({-(M_ + i0), j0 + 1}, -cf.derivative());
    const long parent = metric(m);
    for (const auto& [ij, alpha] : s_.alphas) {
      auto [i, j] = ij;
      const long coef = long(i) * (j0 + 1) + long(j) * (M_ + i0) - w;
      Mono next{-(M_ - i + i0 + 1), j + j0};
      // The rewrite metric must decrease strictly at every step; asserted.
      if (metric(next) >= parent)
        throw Error("NonTermination", "rewrite metric failed to decrease");
      enqueue(next, CRat(Rat(coef)) * (alpha * cf));
    }
    for (const auto& [kl, beta] : betas_)
      if (!beta.is_zero())
        enqueue({-(M_ + kl.second + i0 + 1), kl.first + j0},
                CRat(Rat(-w)) * (beta * cf));
  }

  const HamiltonianSpec& s_;
  const std::map<Mono, CoeffPoly>& betas_;
  const int M_, N_;
  const long rho_;
  std::map<Mono, CoeffPoly> pending_;
  Rewrite out_;
};

}  // namespace

AuxiliaryW solve_betas(const HamiltonianSpec& spec, bool allow_nonzero_gamma) {
  const int M = spec.M, N = spec.N;
  const long rho = long(M) * N - 1;
  if (rho < 1) throw Error("DegenerateClass", "MN = 1 is outside the class");
  if (!spec.alpha(0, N).is_zero())
    throw Error("NotNormalized",
                "solve_betas requires alpha_{0,N} = 0 (absorb it by a shift of "
                "y1); otherwise the level-by-level solve is not triangular");

  AuxiliaryW aux;
  aux.M = M;
  aux.N = N;
  aux.J = build_J(M, N);
  for (const auto& kl : aux.J) aux.betas[kl] = CoeffPoly{};

  // Pairs whose beta partner is determined, most unbounded level first.
  std::vector<IndexPair> solvable;
  for (const auto& ij : build_index_set(M, N)) {
    if (ij == IndexPair{0, 0}) continue;
    if (long(ij.first) * (N + 1) + long(ij.second) * (M + 1) == rho) continue;
    solvable.push_back(ij);
  }
  std::sort(solvable.begin(), solvable.end(), [&](IndexPair a, IndexPair b) {
    return long(a.first) * (N + 1) + long(a.second) * (M + 1) >
           long(b.first) * (N + 1) + long(b.second) * (M + 1);
  });

  for (const auto& ij : solvable) {
    auto rw = Engine(spec, aux.betas).run();
    auto it = rw.gamma.find(ij);
    if (it == rw.gamma.end() || it->second.is_zero()) continue;
    // gamma_ij = (MN - 1 - s) L1 beta_{j+1, M-i} + (higher-level terms).
    const long s = long(ij.first) * (N + 1) + long(ij.second) * (M + 1);
    const CRat coef = CRat(Rat(rho - s)) * spec.leading1;
    Mono partner{ij.second + 1, M - ij.first};
    aux.betas[partner] -= (CRat(1) / coef) * it->second;
  }

  auto final = Engine(spec, aux.betas).run();
  for (const auto& ij : solvable) {
    auto it = final.gamma.find(ij);
    if (it != final.gamma.end() && !it->second.is_zero())
      throw Error("NonTermination", "triangular beta solve left a removable residual");
    aux.gamma_report[ij] = CoeffPoly{};
    final.gamma.erase(ij);
  }
  final.gamma.erase({0, 0});  // no beta partner; the term is bounded (level 0)
  for (auto& [key, g] : final.gamma) {
    aux.gamma_report[key] = g;
    if (!g.is_zero() && !allow_nonzero_gamma)
      throw Error("GammaNonzero", "nonremovable residual at (" +
                                      std::to_string(key.first) + "," +
                                      std::to_string(key.second) +
                                      "): " + g.str());
  }
  if (!final.gamma.count({-1, N})) aux.gamma_report[{-1, N}] = CoeffPoly{};
  aux.P = std::move(final.P);
  aux.Q = std::move(final.Q);
  aux.R = std::move(final.R);

  // Machine check of the bounded-class certificate.
  auto check = [&](const LaurentPoly& p, const char* which) {
    for (const auto& [m, c] : p.terms) {
      (void)c;
      bool ok = (m.first == 0 && m.second == 0) ||
                (m.first < 0 &&
                 long(-m.first) * (N + 1) - long(m.second) * (M + 1) >= 0);
      if (!ok)
        throw Error("NonTermination",
                    std::string("unbounded monomial in certificate ") + which);
    }
  };
  check(aux.P, "P");
  check(aux.Q, "Q");
  check(aux.R, "R");
  return aux;
}

std::string aux_to_json(const AuxiliaryW& aux) {
  nlohmann::json j;
  j["M"] = aux.M;
  j["N"] = aux.N;
  auto mono_key = [](Mono m) {
    return std::to_string(m.first) + "," + std::to_string(m.second);
  };
  j["J"] = nlohmann::json::array();
  for (const auto& kl : aux.J) j["J"].push_back({kl.first, kl.second});
  j["beta"] = nlohmann::json::object();
  for (const auto& [kl, poly] : aux.betas)
    if (!poly.is_zero()) j["beta"][mono_key(kl)] = poly.str();
  j["gamma_report"] = nlohmann::json::object();
  for (const auto& [ij, poly] : aux.gamma_report)
    j["gamma_report"][mono_key(ij)] = {{"zero", poly.is_zero()},
                                       {"text", poly.str()}};
  auto poly_obj = [&](const LaurentPoly& p) {
    nlohmann::json o = nlohmann::json::object();
    for (const auto& [m, c] : p.terms) o[mono_key(m)] = c.str();
    return o;
  };
  j["P"] = poly_obj(aux.P);
  j["Q"] = poly_obj(aux.Q);
  j["R"] = poly_obj(aux.R);
  return j.dump(2);
}

}  // namespace hamsing
