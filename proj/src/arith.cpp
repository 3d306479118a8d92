#include "tropcert/arith.hpp"

#include <algorithm>

namespace tropcert {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ArithmeticOverflow: return "ArithmeticOverflow";
    case ErrorCode::InfeasiblePolyhedron: return "InfeasiblePolyhedron";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidIndexPair: return "InvalidIndexPair";
    case ErrorCode::InvalidQuadruple: return "InvalidQuadruple";
    case ErrorCode::UnsupportedBodyCount: return "UnsupportedBodyCount";
    case ErrorCode::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorCode::EmptyHypersurface: return "EmptyHypersurface";
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::DistinctValuationsRequired: return "DistinctValuationsRequired";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::DigestMismatch: return "DigestMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

const char* mode_name(ArithmeticMode mode) noexcept {
  return mode == ArithmeticMode::checked64 ? "checked64" : "big";
}

ArithmeticMode parse_mode(std::string_view text) {
  if (text == "checked64") return ArithmeticMode::checked64;
  if (text == "big") return ArithmeticMode::big;
  throw Error(ErrorCode::InvalidArgument, "unknown arithmetic mode '" + std::string(text) + "'");
}

BigInt lcm_of(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; }),
          s.end());
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty rational");
  auto valid = [](const std::string& part) {
    size_t start = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (start >= part.size()) return false;
    return std::all_of(part.begin() + start, part.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!den.empty() && den[0] == '+') den.erase(0, 1);
  if (!valid(num) || !valid(den))
    throw Error(ErrorCode::InvalidArgument, "malformed rational '" + s + "'");
  BigInt n{num}, d{den};
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator in '" + s + "'");
  Rational q{n, d};
  q.canonicalize();
  return q;
}

std::vector<Rational> parse_rational_list(std::string_view csv) {
  std::vector<Rational> out;
  size_t pos = 0;
  while (pos <= csv.size()) {
    size_t comma = csv.find(',', pos);
    if (comma == std::string_view::npos) comma = csv.size();
    out.push_back(parse_rational(csv.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

Rational dot(const IntVector& a, const RationalVector& x) {
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0) s += a[i] * x[i];
  }
  return s;
}

namespace {

// In-place fraction-free echelon form; returns pivot columns.
std::vector<size_t> echelon(std::vector<IntVector>& rows, size_t cols) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows.size(); ++c) {
    size_t p = r;
    while (p < rows.size() && sgn(rows[p][c]) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    if (sgn(rows[r][c]) < 0)
      for (auto& x : rows[r]) x = -x;
    for (size_t i = r + 1; i < rows.size(); ++i) {
      if (sgn(rows[i][c]) == 0) continue;
      BigInt a = rows[r][c], b = rows[i][c];
      for (size_t j = 0; j < cols; ++j) rows[i][j] = rows[i][j] * a - rows[r][j] * b;
      make_primitive(rows[i]);
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

}  // namespace

size_t rank_of(std::vector<IntVector> rows) {
  if (rows.empty()) return 0;
  return echelon(rows, rows[0].size()).size();
}

std::vector<IntVector> canonical_row_basis(std::vector<IntVector> rows) {
  if (rows.empty()) return rows;
  size_t cols = rows[0].size();
  auto pivots = echelon(rows, cols);
  // Back substitution to clear every pivot column above its pivot.
  for (size_t r = rows.size(); r-- > 0;) {
    size_t c = pivots[r];
    for (size_t i = 0; i < r; ++i) {
      if (sgn(rows[i][c]) == 0) continue;
      BigInt a = rows[r][c], b = rows[i][c];
      for (size_t j = 0; j < cols; ++j) rows[i][j] = rows[i][j] * a - rows[r][j] * b;
      make_primitive(rows[i]);
    }
  }
  for (size_t r = 0; r < rows.size(); ++r) {
    make_primitive(rows[r]);
    if (sgn(rows[r][pivots[r]]) < 0)
      for (auto& x : rows[r]) x = -x;
  }
  return rows;
}

std::vector<IntVector> nullspace_basis(const std::vector<IntVector>& input, size_t dim) {
  std::vector<IntVector> rows = input;
  for (auto& r : rows) r.resize(dim);
  std::vector<IntVector> basis_rows = canonical_row_basis(rows);
  std::vector<size_t> pivots;
  for (const auto& r : basis_rows) {
    size_t c = 0;
    while (sgn(r[c]) == 0) ++c;
    pivots.push_back(c);
  }
  std::vector<IntVector> out;
  for (size_t free = 0; free < dim; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    // x_free = L, x_pivot(r) = -row_r[free] * L / row_r[pivot], with L the
    // lcm of pivot entries.
    BigInt L = 1;
    for (size_t r = 0; r < basis_rows.size(); ++r) L = lcm_of(L, basis_rows[r][pivots[r]]);
    IntVector v(dim, 0);
    v[free] = L;
    for (size_t r = 0; r < basis_rows.size(); ++r)
      v[pivots[r]] = -basis_rows[r][free] * (L / basis_rows[r][pivots[r]]);
    make_primitive(v);
    out.push_back(std::move(v));
  }
  return canonical_row_basis(std::move(out));
}

size_t VectorHash::operator()(const IntVector& v) const noexcept {
  size_t h = 1469598103934665603ull;
  for (const auto& x : v) {
    size_t e = x.fits_slong_p() ? std::hash<long>()(x.get_si()) : std::hash<std::string>()(x.get_str());
    h = (h ^ e) * 1099511628211ull;
  }
  return h;
}

size_t VectorHash::operator()(const std::vector<int64_t>& v) const noexcept {
  size_t h = 1469598103934665603ull;
  for (auto x : v) h = (h ^ std::hash<int64_t>()(x)) * 1099511628211ull;
  return h;
}

}  // namespace tropcert
