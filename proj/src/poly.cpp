#include "valkit/poly.hpp"

#include <algorithm>

#include "valkit/errors.hpp"

namespace valkit {

Poly::Poly(FieldSpec spec, std::vector<FieldElem> coeffs) : spec_(spec), c_(std::move(coeffs)) {
  for (const auto& c : c_)
    if (!spec_.owns(c)) throw Error(ErrorCode::BackendMismatch, "coefficient " + c.to_string() + " from another field");
  trim();
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::x(const FieldSpec& spec) { return Poly(spec, {spec.zero(), spec.one()}); }

Poly Poly::constant(const FieldSpec& spec, FieldElem c) { return Poly(spec, {std::move(c)}); }

Poly Poly::monomial(const FieldSpec& spec, FieldElem c, std::size_t degree) {
  std::vector<FieldElem> v(degree + 1, spec.zero());
  v[degree] = std::move(c);
  return Poly(spec, std::move(v));
}

Poly Poly::linear(const FieldSpec& spec, const FieldElem& a) { return Poly(spec, {-a, spec.one()}); }

Poly Poly::parse(const FieldSpec& spec, const std::vector<std::string>& coeffs) {
  std::vector<FieldElem> v;
  v.reserve(coeffs.size());
  for (const auto& s : coeffs) v.push_back(spec.parse(s));
  return Poly(spec, std::move(v));
}

FieldElem Poly::coeff(std::size_t i) const { return i < c_.size() ? c_[i] : spec_.zero(); }

const FieldElem& Poly::lead() const {
  if (c_.empty()) throw Error(ErrorCode::PreconditionViolated, "leading coefficient of the zero polynomial");
  return c_.back();
}

namespace {
void check_spec(const Poly& a, const Poly& b) {
  if (!(a.spec() == b.spec())) throw Error(ErrorCode::BackendMismatch, "polynomials over different fields");
}
}  // namespace

Poly operator+(const Poly& a, const Poly& b) {
  check_spec(a, b);
  std::vector<FieldElem> out;
  const std::size_t n = std::max(a.c_.size(), b.c_.size());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(a.coeff(i) + b.coeff(i));
  return Poly(a.spec_, std::move(out));
}

Poly Poly::operator-() const {
  std::vector<FieldElem> out;
  out.reserve(c_.size());
  for (const auto& c : c_) out.push_back(-c);
  return Poly(spec_, std::move(out));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  check_spec(a, b);
  if (a.is_zero() || b.is_zero()) return Poly(a.spec_);
  std::vector<FieldElem> out(a.c_.size() + b.c_.size() - 1, a.spec_.zero());
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
  }
  return Poly(a.spec_, std::move(out));
}

Poly Poly::scaled(const FieldElem& c) const {
  std::vector<FieldElem> out;
  out.reserve(c_.size());
  for (const auto& x : c_) out.push_back(x * c);
  return Poly(spec_, std::move(out));
}

Poly Poly::pow(unsigned n) const {
  Poly result = constant(spec_, spec_.one());
  Poly base = *this;
  while (n) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

bool operator==(const Poly& a, const Poly& b) {
  check_spec(a, b);
  if (a.c_.size() != b.c_.size()) return false;
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    if (!(a.c_[i] == b.c_[i])) return false;
  return true;
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& quot, Poly& rem) {
  check_spec(a, b);
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by the zero polynomial");
  const FieldSpec& k = a.spec_;
  std::vector<FieldElem> r = a.c_;
  const std::size_t db = b.c_.size() - 1;
  const bool monic = b.is_monic();
  std::vector<FieldElem> q(r.size() > db ? r.size() - db : 0, k.zero());
  for (std::size_t top = r.size(); top-- > db;) {
    if (r[top].is_zero()) continue;
    const FieldElem coef = monic ? r[top] : r[top] / b.c_.back();
    q[top - db] = coef;
    for (std::size_t j = 0; j <= db; ++j) r[top - db + j] = r[top - db + j] - coef * b.c_[j];
  }
  quot = Poly(k, std::move(q));
  rem = Poly(k, std::move(r));
}

FieldElem Poly::evaluate(const FieldElem& at) const {
  if (!spec_.owns(at)) throw Error(ErrorCode::BackendMismatch, "evaluation point from another field");
  FieldElem acc = spec_.zero();
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * at + c_[i];
  return acc;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly(spec_);
  std::vector<FieldElem> out;
  out.reserve(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) out.push_back(spec_.from_int(static_cast<long>(k)) * c_[k]);
  return Poly(spec_, std::move(out));
}

std::string Poly::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t k = c_.size(); k-- > 0;) {
    if (c_[k].is_zero()) continue;
    if (!out.empty()) out += " + ";
    const std::string c = c_[k].to_string();
    const bool wrap = c.find_first_of("+-", 1) != std::string::npos;
    if (k == 0) {
      out += c;
      continue;
    }
    if (!c_[k].is_one()) out += (wrap ? "(" + c + ")" : c) + "*";
    out += k == 1 ? "x" : "x^" + std::to_string(k);
  }
  return out;
}

Poly QExpansion::reconstruct() const {
  Poly acc(base.spec());
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * base + coeffs[i];
  return acc;
}

QExpansion q_expand(const Poly& f, const Poly& q) {
  if (q.degree() < 1 || !q.is_monic()) throw Error(ErrorCode::NonMonicBase, "base " + q.to_string() + " is not monic of degree >= 1");
  QExpansion out{q, {}};
  Poly rest = f;
  while (!rest.is_zero()) {
    Poly quot(f.spec()), rem(f.spec());
    Poly::divmod(rest, q, quot, rem);
    out.coeffs.push_back(std::move(rem));
    rest = std::move(quot);
  }
  if (out.coeffs.empty()) out.coeffs.push_back(Poly(f.spec()));
  return out;
}

bool is_q_monic(const Poly& f, const Poly& q) {
  const QExpansion e = q_expand(f, q);
  return e.coeffs.back().degree() == 0 && e.coeffs.back().lead().is_one();
}

FieldElem norm(const Poly& f, const Poly& g) {
  if (!g.is_monic() || g.degree() < 1) throw Error(ErrorCode::NonMonicBase, "norm needs a monic modulus");
  const auto n = static_cast<std::size_t>(g.degree());
  const FieldSpec& k = g.spec();
  // Column j: f * x^j mod g.
  std::vector<std::vector<FieldElem>> m(n, std::vector<FieldElem>(n, k.zero()));
  Poly col = f;
  for (std::size_t j = 0; j < n; ++j) {
    Poly quot(k), rem(k);
    Poly::divmod(col, g, quot, rem);
    for (std::size_t i = 0; i < n; ++i) m[i][j] = rem.coeff(i);
    col = rem * Poly::x(k);
  }
  FieldElem det = k.one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c].is_zero()) ++piv;
    if (piv == n) return k.zero();
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det = det * m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c].is_zero()) continue;
      const FieldElem factor = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] = m[r][j] - factor * m[c][j];
    }
  }
  return det;
}

}  // namespace valkit
