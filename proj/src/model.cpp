#include "hamsing/model.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hamsing {

using nlohmann::json;

std::string CRat::str() const {
  std::ostringstream os;
  if (im == 0) {
    os << re.get_str();
  } else {
    os << "(" << re.get_str() << (im > 0 ? "+" : "-") << Rat(abs(im)).get_str() << "i)";
  }
  return os.str();
}

CRat pow(const CRat& base, long e) {
  CRat acc(1);
  for (long k = 0; k < e; ++k) acc *= base;
  return acc;
}

std::string CoeffPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < c_.size(); ++k) {
    if (c_[k].is_zero()) continue;
    if (!first) os << " + ";
    os << c_[k].str();
    if (k >= 1) os << "*" << var;
    if (k >= 2) os << "^" << k;
    first = false;
  }
  return os.str();
}

std::set<IndexPair> build_index_set(int M, int N) {
  if (M < 1 || N < 1) throw Error("NonpositiveDegrees", "require M, N >= 1");
  std::set<IndexPair> out;
  const long bound = long(N + 1) * (M + 1);
  for (int i = 0; long(i) * (N + 1) < bound; ++i)
    for (int j = 0; long(i) * (N + 1) + long(j) * (M + 1) < bound; ++j)
      out.insert({i, j});
  return out;
}

HamiltonianSpec validate_spec(HamiltonianSpec spec) {
  if (spec.M < 1 || spec.N < 1)
    throw Error("NonpositiveDegrees", "require M, N >= 1");
  if (spec.N < spec.M)
    throw Error("DegreeOrder", "require N >= M; present the system with roles swapped");
  if (spec.leading1.is_zero() || spec.leading2.is_zero())
    throw Error("ZeroLeadingCoefficient", "leading coefficients must be nonzero constants");

  auto index_set = build_index_set(spec.M, spec.N);
  std::string offending;
  for (auto it = spec.alphas.begin(); it != spec.alphas.end();) {
    if (it->second.is_zero()) {
      it = spec.alphas.erase(it);
      continue;
    }
    if (!index_set.count(it->first)) {
      offending += "(" + std::to_string(it->first.first) + "," +
                   std::to_string(it->first.second) + ") ";
    }
    ++it;
  }
  if (!offending.empty())
    throw Error("IndexOutsideClass", "keys outside the index set I: " + offending);

  spec.normalized = spec.leading1 == CRat(1) && spec.leading2 == CRat(1) &&
                    spec.alpha(0, spec.N).is_zero() &&
                    (spec.M != spec.N || spec.alpha(spec.M, 0).is_zero());
  spec.validated = true;
  return spec;
}

StructuralConstants structural_constants(int M, int N) {
  if (M < 1 || N < 1) throw Error("NonpositiveDegrees", "require M, N >= 1");
  if (long(M) * N == 1) throw Error("DegenerateClass", "MN = 1 is outside the class");
  StructuralConstants sc;
  long rho = long(M) * N - 1;
  sc.p = Rat(-(N + 1), rho);
  sc.p.canonicalize();
  sc.q = Rat(-(M + 1), rho);
  sc.q.canonicalize();
  sc.d = std::gcd(std::gcd(long(M) + 1, long(N) + 1), rho);
  sc.ramification = rho / sc.d;
  return sc;
}

std::vector<std::complex<double>> fixed_singularities(const HamiltonianSpec& spec) {
  (void)spec;  // constant nonzero leading coefficients: no fixed singularities
  return {};
}

namespace {

Rat rat_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw Error("SpecParse", "rational must be [numerator, denominator]");
  Rat r(j[0].get<long>(), j[1].get<long>());
  r.canonicalize();
  return r;
}

CRat crat_from_json(const json& j) {
  CRat v;
  if (j.contains("re")) v.re = rat_from_json(j["re"]);
  if (j.contains("im")) v.im = rat_from_json(j["im"]);
  return v;
}

json rat_to_json(const Rat& r) {
  return json::array({json::parse(r.get_num().get_str()), json::parse(r.get_den().get_str())});
}

json crat_to_json(const CRat& v) {
  return json{{"re", rat_to_json(v.re)}, {"im", rat_to_json(v.im)}};
}

}  // namespace

HamiltonianSpec spec_from_json(const std::string& text) {
  json j = json::parse(text);
  HamiltonianSpec spec;
  spec.M = j.at("M").get<int>();
  spec.N = j.at("N").get<int>();
  spec.leading1 = crat_from_json(j.at("leading1"));
  spec.leading2 = crat_from_json(j.at("leading2"));
  if (j.contains("alpha")) {
    for (const auto& [key, val] : j["alpha"].items()) {
      auto comma = key.find(',');
      if (comma == std::string::npos)
        throw Error("SpecParse", "alpha key must be \"i,j\": " + key);
      int i = std::stoi(key.substr(0, comma));
      int jj = std::stoi(key.substr(comma + 1));
      std::vector<CRat> coeffs;
      for (const auto& c : val) coeffs.push_back(crat_from_json(c));
      spec.alphas[{i, jj}] = CoeffPoly(std::move(coeffs));
    }
  }
  return validate_spec(std::move(spec));
}

HamiltonianSpec spec_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("SpecParse", "cannot open spec file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return spec_from_json(ss.str());
}

std::string spec_to_json(const HamiltonianSpec& spec) {
  json j;
  j["M"] = spec.M;
  j["N"] = spec.N;
  j["leading1"] = crat_to_json(spec.leading1);
  j["leading2"] = crat_to_json(spec.leading2);
  json alpha = json::object();
  for (const auto& [ij, poly] : spec.alphas) {
    json coeffs = json::array();
    for (const auto& c : poly.coeffs()) coeffs.push_back(crat_to_json(c));
    alpha[std::to_string(ij.first) + "," + std::to_string(ij.second)] = coeffs;
  }
  j["alpha"] = alpha;
  return j.dump(2);
}

}  // namespace hamsing
