#include "tropcert/equations.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <iomanip>
#include "json.hpp"
#include <sstream>

namespace tropcert {

VariableOrder::VariableOrder(int n) : n_(n) {
  if (n < 2) throw Error(ErrorCode::UnsupportedBodyCount, "need at least two bodies");
}

size_t VariableOrder::index(int i, int j) const {
  if (i == j || i < 1 || j < 1 || i > n_ || j > n_)
    throw Error(ErrorCode::InvalidIndexPair, "invalid pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
  if (i > j) std::swap(i, j);
  // Pairs (a,b) with a < i come first: sum_{a<i} (n - a).
  size_t pos = 0;
  for (int a = 1; a < i; ++a) pos += static_cast<size_t>(n_ - a);
  return pos + static_cast<size_t>(j - i - 1);
}

std::string VariableOrder::name(size_t pos) const {
  for (int i = 1; i <= n_; ++i)
    for (int j = i + 1; j <= n_; ++j)
      if (index(i, j) == pos) {
        if (n_ < 10) return "r" + std::to_string(i) + std::to_string(j);
        return "r" + std::to_string(i) + "_" + std::to_string(j);
      }
  throw Error(ErrorCode::InvalidArgument, "variable index out of range");
}

MassLinearCoefficient MassLinearCoefficient::constant(int n, const Rational& c) {
  MassLinearCoefficient out(n);
  out.q_[0] = c;
  return out;
}

MassLinearCoefficient MassLinearCoefficient::mass(int n, int k, const Rational& c) {
  MassLinearCoefficient out(n);
  out.q_[k] = c;
  return out;
}

bool MassLinearCoefficient::is_zero() const {
  return std::all_of(q_.begin(), q_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

MassLinearCoefficient& MassLinearCoefficient::operator+=(const MassLinearCoefficient& o) {
  if (q_.empty()) q_.assign(o.q_.size(), Rational(0));
  for (size_t k = 0; k < q_.size(); ++k) q_[k] += o.q_[k];
  return *this;
}

std::vector<LaurentTerm> LaurentPolynomial::terms() const {
  std::vector<LaurentTerm> out;
  out.reserve(terms_.size());
  for (const auto& [e, c] : terms_) out.push_back({c, e});
  return out;
}

void LaurentPolynomial::add_term(const Exponents& e, const MassLinearCoefficient& c) {
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentPolynomial LaurentPolynomial::shifted(const Exponents& shift) const {
  LaurentPolynomial out(label_, n_, nvars_);
  for (const auto& [e, c] : terms_) {
    Exponents s = e;
    for (size_t k = 0; k < s.size(); ++k) s[k] += shift[k];
    out.terms_.emplace(std::move(s), c);
  }
  return out;
}

bool LaurentPolynomial::has_negative_exponents() const {
  for (const auto& [e, c] : terms_)
    for (int x : e)
      if (x < 0) return true;
  return false;
}

FamilySelection all_families() { return {EquationFamily::ac, EquationFamily::sac, EquationFamily::cm}; }

const char* family_name(EquationFamily f) noexcept {
  switch (f) {
    case EquationFamily::ac:
      return "ac";
    case EquationFamily::sac:
      return "sac";
    case EquationFamily::cm:
      return "cm";
  }
  return "?";
}

FamilySelection parse_families(const std::string& csv) {
  FamilySelection out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "ac")
      out.insert(EquationFamily::ac);
    else if (item == "sac")
      out.insert(EquationFamily::sac);
    else if (item == "cm")
      out.insert(EquationFamily::cm);
    else
      throw Error(ErrorCode::InvalidArgument, "unknown equation family '" + item + "'");
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty equation selection");
  return out;
}

namespace {

// Constant-coefficient Laurent polynomials for intermediate algebra.
using ConstPoly = std::map<Exponents, Rational>;

void add_into(ConstPoly& acc, const ConstPoly& p, const Rational& scale = 1) {
  for (const auto& [e, c] : p) {
    auto& slot = acc[e];
    slot += c * scale;
    if (sgn(slot) == 0) acc.erase(e);
  }
}

ConstPoly multiply(const ConstPoly& a, const ConstPoly& b) {
  ConstPoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponents e = ea;
      for (size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
      auto& slot = out[e];
      slot += ca * cb;
      if (sgn(slot) == 0) out.erase(e);
    }
  return out;
}

ConstPoly monomial(size_t nvars, const Rational& c, size_t var = 0, int power = 0) {
  Exponents e(nvars, 0);
  if (power != 0) e[var] = power;
  return ConstPoly{{e, c}};
}

// r_ab^power, or 0 when a == b.
ConstPoly distance_power(int a, int b, int power, const VariableOrder& order) {
  if (a == b) return {};
  return monomial(order.size(), 1, order.index(a, b), power);
}

std::string pair_label(const char* name, int i, int j, int n) {
  if (n < 10) return std::string(name) + "_{" + std::to_string(i) + std::to_string(j) + "}";
  return std::string(name) + "_{" + std::to_string(i) + "," + std::to_string(j) + "}";
}

}  // namespace

LaurentPolynomial build_g_laurent(int i, int j, const VariableOrder& order) {
  const int n = order.bodies();
  if (i == j || i < 1 || j < 1 || i > n || j > n)
    throw Error(ErrorCode::InvalidIndexPair, "g requires distinct bodies in 1..n");
  const size_t nv = order.size();
  LaurentPolynomial out(pair_label("g", i, j, n), n, nv);
  for (int k = 1; k <= n; ++k) {
    if (k == i) continue;  // S_ii = 0
    ConstPoly s = distance_power(i, k, -3, order);
    add_into(s, monomial(nv, -1));
    ConstPoly bracket = distance_power(j, k, 2, order);
    add_into(bracket, distance_power(i, k, 2, order), -1);
    add_into(bracket, distance_power(i, j, 2, order), -1);
    for (const auto& [e, c] : multiply(s, bracket)) out.add_term(e, MassLinearCoefficient::mass(n, k, c));
  }
  return out;
}

Exponents g_clearing_monomial(int i, const VariableOrder& order) {
  Exponents e(order.size(), 0);
  for (int k = 1; k <= order.bodies(); ++k)
    if (k != i) e[order.index(i, k)] = 3;
  return e;
}

LaurentPolynomial build_g(int i, int j, const VariableOrder& order) {
  LaurentPolynomial g = build_g_laurent(i, j, order);
  return g.shifted(g_clearing_monomial(i, order));
}

LaurentPolynomial build_f(int i, int j, const VariableOrder& order) {
  if (i >= j) throw Error(ErrorCode::InvalidIndexPair, "f requires i < j");
  LaurentPolynomial sum = build_g_laurent(i, j, order);
  sum += build_g_laurent(j, i, order);
  Exponents a = g_clearing_monomial(i, order), b = g_clearing_monomial(j, order);
  Exponents lcm(a.size());
  for (size_t k = 0; k < a.size(); ++k) lcm[k] = std::max(a[k], b[k]);
  LaurentPolynomial out = sum.shifted(lcm);
  out.set_label(pair_label("f", i, j, order.bodies()));
  return out;
}

namespace {

ConstPoly determinant(const std::vector<std::vector<ConstPoly>>& m, const std::vector<size_t>& cols,
                      size_t row, size_t nvars) {
  if (cols.empty()) return monomial(nvars, 1);
  ConstPoly out;
  for (size_t k = 0; k < cols.size(); ++k) {
    const ConstPoly& entry = m[row][cols[k]];
    if (entry.empty()) continue;
    std::vector<size_t> rest = cols;
    rest.erase(rest.begin() + static_cast<long>(k));
    add_into(out, multiply(entry, determinant(m, rest, row + 1, nvars)), (k % 2 == 0) ? 1 : -1);
  }
  return out;
}

}  // namespace

LaurentPolynomial build_cm(const std::vector<int>& quad, const VariableOrder& order) {
  const int n = order.bodies();
  std::vector<int> q = quad;
  std::sort(q.begin(), q.end());
  if (q.size() != 4 || std::adjacent_find(q.begin(), q.end()) != q.end() || q.front() < 1 || q.back() > n)
    throw Error(ErrorCode::InvalidQuadruple, "Cayley-Menger needs four distinct bodies in 1..n");
  const size_t nv = order.size();
  std::vector<std::vector<ConstPoly>> m(5, std::vector<ConstPoly>(5));
  for (size_t a = 1; a < 5; ++a) {
    m[0][a] = monomial(nv, 1);
    m[a][0] = monomial(nv, 1);
    for (size_t b = 1; b < 5; ++b) m[a][b] = distance_power(q[a - 1], q[b - 1], 2, order);
  }
  ConstPoly det = determinant(m, {0, 1, 2, 3, 4}, 0, nv);
  std::string label = "CM_{";
  for (size_t k = 0; k < 4; ++k) {
    if (n >= 10 && k > 0) label += ",";
    label += std::to_string(q[k]);
  }
  label += "}";
  LaurentPolynomial out(label, n, nv);
  for (const auto& [e, c] : det) out.add_term(e, MassLinearCoefficient::constant(n, c));
  return out;
}

std::vector<LaurentPolynomial> build_system(int n, const FamilySelection& selection) {
  if (n < 3) throw Error(ErrorCode::UnsupportedBodyCount, "need at least three bodies");
  VariableOrder order(n);
  std::vector<LaurentPolynomial> out;
  if (selection.count(EquationFamily::ac))
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (i != j) out.push_back(build_g(i, j, order));
  if (selection.count(EquationFamily::sac))
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) out.push_back(build_f(i, j, order));
  if (selection.count(EquationFamily::cm))
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b)
        for (int c = b + 1; c <= n; ++c)
          for (int d = c + 1; d <= n; ++d) out.push_back(build_cm({a, b, c, d}, order));
  return out;
}

Rational evaluate(const LaurentPolynomial& p, const RationalVector& masses, const RationalVector& r) {
  Rational total = 0;
  for (const auto& [e, c] : p.term_map()) {
    Rational coeff = c.constant_part();
    for (int k = 1; k <= c.bodies(); ++k) coeff += c.mass_part(k) * masses[k - 1];
    if (sgn(coeff) == 0) continue;
    Rational mono = 1;
    for (size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      if (sgn(r[v]) == 0) throw Error(ErrorCode::InvalidArgument, "zero distance in evaluation");
      Rational base = e[v] > 0 ? r[v] : 1 / r[v];
      for (int t = 0; t < std::abs(e[v]); ++t) mono *= base;
    }
    total += coeff * mono;
  }
  return total;
}

namespace {

std::string coefficient_text(const MassLinearCoefficient& c) {
  std::string out;
  auto piece = [&out](const Rational& q, const std::string& sym) {
    if (sgn(q) == 0) return;
    std::string num = q.get_str();
    if (!out.empty() && sgn(q) > 0) out += "+";
    if (sym.empty())
      out += num;
    else if (q == 1)
      out += sym;
    else if (q == -1)
      out += "-" + sym;
    else
      out += num + "*" + sym;
  };
  piece(c.constant_part(), "");
  for (int k = 1; k <= c.bodies(); ++k) piece(c.mass_part(k), "m" + std::to_string(k));
  return out;
}

}  // namespace

std::string to_text(const LaurentPolynomial& p, const VariableOrder& order) {
  std::ostringstream os;
  os << p.label() << " =";
  bool first = true;
  for (const auto& [e, c] : p.term_map()) {
    os << (first ? " " : " + ") << "(" << coefficient_text(c) << ")";
    first = false;
    for (size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      os << "*" << order.name(v);
      if (e[v] != 1) os << "^" << e[v];
    }
  }
  if (first) os << " 0";
  return os.str();
}

std::string equations_json(const std::vector<LaurentPolynomial>& system) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& p : system) {
    nlohmann::ordered_json poly;
    poly["label"] = p.label();
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& [e, c] : p.term_map()) {
      nlohmann::ordered_json t;
      t["exponents"] = e;
      t["q0"] = to_string(c.constant_part());
      for (int k = 1; k <= c.bodies(); ++k) t["q" + std::to_string(k)] = to_string(c.mass_part(k));
      terms.push_back(std::move(t));
    }
    poly["terms"] = std::move(terms);
    arr.push_back(std::move(poly));
  }
  return arr.dump();
}

std::string equations_text(const std::vector<LaurentPolynomial>& system, const VariableOrder& order) {
  std::string out;
  for (const auto& p : system) out += to_text(p, order) + "\n";
  return out;
}

std::string sha256_digest(std::string_view data) {
  unsigned char hash[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), hash, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(hash[k]);
  return "sha256:" + os.str();
}

std::string system_digest(const std::vector<LaurentPolynomial>& system) {
  return sha256_digest(equations_json(system));
}

}  // namespace tropcert
