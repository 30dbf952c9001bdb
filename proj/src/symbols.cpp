#include "hamsing/symbols.hpp"

#include <sstream>

namespace hamsing {

std::string SymKey::str() const {
  std::ostringstream os;
  if (kind == 1) {
    os << "lam_" << r;
  } else {
    os << "a[" << i << "," << j << "," << r << "]";
  }
  return os.str();
}

SymPoly SymPoly::scalar(RingPtr ring, QuotientRing::Elem v) {
  SymPoly p(std::move(ring));
  if (!QuotientRing::is_zero(v)) p.t_[SymMono{}] = std::move(v);
  return p;
}

SymPoly SymPoly::symbol(RingPtr ring, SymKey k) {
  SymPoly p(std::move(ring));
  p.t_[SymMono{{k, 1}}] = p.ring_->one();
  return p;
}

void SymPoly::insert(SymMono m, QuotientRing::Elem v) {
  auto it = t_.find(m);
  if (it == t_.end()) {
    if (!QuotientRing::is_zero(v)) t_.emplace(std::move(m), std::move(v));
    return;
  }
  it->second = ring_->add(it->second, v);
  if (QuotientRing::is_zero(it->second)) t_.erase(it);
}

SymPoly SymPoly::operator-() const {
  SymPoly r = *this;
  for (auto& [m, v] : r.t_) v = ring_->neg(v);
  return r;
}

SymPoly operator+(const SymPoly& a, const SymPoly& b) {
  SymPoly r = a;
  if (!r.ring_) r.ring_ = b.ring_;
  for (const auto& [m, v] : b.t_) r.insert(m, v);
  return r;
}

SymPoly operator-(const SymPoly& a, const SymPoly& b) { return a + (-b); }

SymPoly operator*(const SymPoly& a, const SymPoly& b) {
  SymPoly r(a.ring_ ? a.ring_ : b.ring_);
  for (const auto& [ma, va] : a.t_)
    for (const auto& [mb, vb] : b.t_) {
      SymMono m = ma;
      for (const auto& [k, e] : mb) m[k] += e;
      r.insert(std::move(m), r.ring_->mul(va, vb));
    }
  return r;
}

SymPoly SymPoly::scale(const QuotientRing::Elem& s) const {
  SymPoly r(ring_);
  if (QuotientRing::is_zero(s)) return r;
  for (const auto& [m, v] : t_) r.insert(m, ring_->mul(v, s));
  return r;
}

SymPoly SymPoly::scale_rat(const CRat& s) const {
  SymPoly r(ring_);
  if (s.is_zero()) return r;
  for (const auto& [m, v] : t_) r.t_[m] = ring_->scale(s, v);
  return r;
}

SymPoly SymPoly::dz() const {
  SymPoly out(ring_);
  for (const auto& [m, v] : t_) {
    for (const auto& [k, e] : m) {
      if (k.kind != 0) continue;  // free parameters are constants
      SymMono factor = m;
      if (--factor[k] == 0) factor.erase(k);
      ++factor[SymKey::alpha(k.i, k.j, k.r + 1)];
      out.insert(std::move(factor), ring_->scale(CRat(e), v));
    }
  }
  return out;
}

bool SymPoly::coefficients_rational() const {
  for (const auto& [m, v] : t_)
    if (!QuotientRing::is_rational(v)) return false;
  return true;
}

std::vector<SymPoly> SymPoly::split_c_components() const {
  std::vector<SymPoly> out(ring_->rho(), SymPoly(ring_));
  for (const auto& [m, v] : t_)
    for (int k = 0; k < ring_->rho(); ++k)
      if (!v[k].is_zero()) out[k].insert(m, ring_->scalar(v[k]));
  return out;
}

namespace {

// gcd of non-negative rationals: gcd of numerators over lcm of denominators.
Rat rat_gcd(const Rat& a, const Rat& b) {
  if (a == 0) return b;
  if (b == 0) return a;
  mpz_class n, d;
  mpz_gcd(n.get_mpz_t(), a.get_num().get_mpz_t(), b.get_num().get_mpz_t());
  mpz_lcm(d.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
  Rat r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace

SymPoly SymPoly::canonicalized() const {
  if (t_.empty()) return *this;
  if (!coefficients_rational())
    throw Error("NonRationalDeterminant",
                "canonicalization requires c-free coefficients");
  Rat content = 0;
  for (const auto& [m, v] : t_) {
    content = rat_gcd(content, abs(v[0].re));
    content = rat_gcd(content, abs(v[0].im));
  }
  // Sign fix from the leading (largest) monomial: first nonzero part positive.
  const CRat& lead = t_.rbegin()->second[0];
  Rat sign = (lead.re != 0 ? lead.re : lead.im) > 0 ? 1 : -1;
  CRat factor(sign / content);
  SymPoly r(ring_);
  for (const auto& [m, v] : t_) r.t_[m] = ring_->scalar(factor * v[0]);
  return r;
}

CoeffPoly SymPoly::eval_on_spec(const HamiltonianSpec& spec) const {
  CoeffPoly out;
  for (const auto& [m, v] : t_) {
    if (!QuotientRing::is_rational(v))
      throw Error("NonRationalDeterminant", "evaluation requires c-free coefficients");
    CoeffPoly term = CoeffPoly::constant(v[0]);
    for (const auto& [k, e] : m) {
      if (k.kind != 0)
        throw Error("ConditionsViolated", "cannot evaluate a free parameter symbol");
      CoeffPoly der = spec.alpha(k.i, k.j);
      for (int s = 0; s < k.r; ++s) der = der.derivative();
      for (int s = 0; s < e; ++s) term *= der;
    }
    out += term;
  }
  return out;
}

std::string SymPoly::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Largest monomial first reads most naturally for the derived conditions.
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    const auto& [m, v] = *it;
    std::string coeff;
    bool negated = false;
    if (QuotientRing::is_rational(v)) {
      CRat s = v[0];
      if (s.is_real() && s.re < 0 && !m.empty()) {
        negated = true;
        s = -s;
      }
      if (!(s == CRat(1)) || m.empty()) coeff = s.str();
    } else {
      std::string cs;
      for (int k = 0; k < ring_->rho(); ++k) {
        if (v[k].is_zero()) continue;
        if (!cs.empty()) cs += " + ";
        cs += v[k].str();
        if (k >= 1) cs += "*c";
        if (k >= 2) cs += "^" + std::to_string(k);
      }
      coeff = "(" + cs + ")";
    }
    os << (first ? (negated ? "-" : "") : (negated ? " - " : " + "));
    bool need_star = false;
    if (!coeff.empty()) {
      os << coeff;
      need_star = true;
    }
    for (const auto& [k, e] : m) {
      if (need_star) os << "*";
      os << k.str();
      if (e > 1) os << "^" << e;
      need_star = true;
    }
    first = false;
  }
  return os.str();
}

}  // namespace hamsing
