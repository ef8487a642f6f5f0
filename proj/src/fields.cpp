#include "valkit/fields.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

#include "valkit/errors.hpp"

namespace valkit {

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::PAdic: return "padic";
    case Backend::RatFun: return "ratfun";
    case Backend::Hahn: return "hahn";
  }
  return "?";
}

Backend parse_backend(std::string_view name) {
  if (name == "padic") return Backend::PAdic;
  if (name == "ratfun") return Backend::RatFun;
  if (name == "hahn") return Backend::Hahn;
  throw Error(ErrorCode::ConfigError, "unknown field backend '" + std::string(name) + "'");
}

// ------------------------------------------------------------------ mod p

unsigned long mod_reduce(long a, unsigned long p) {
  const long m = static_cast<long>(p);
  long r = a % m;
  if (r < 0) r += m;
  return static_cast<unsigned long>(r);
}

namespace {
unsigned long mulmod(unsigned long a, unsigned long b, unsigned long p) {
  return static_cast<unsigned long>((static_cast<unsigned __int128>(a) * b) % p);
}
unsigned long addmod(unsigned long a, unsigned long b, unsigned long p) { return (a + b) % p; }
unsigned long submod(unsigned long a, unsigned long b, unsigned long p) { return (a + p - b) % p; }

unsigned long reduce_integer(const Integer& z, unsigned long p) {
  Integer r = z % Integer(p);
  if (r < 0) r += p;
  return r.get_ui();
}
}  // namespace

unsigned long mod_inverse(unsigned long a, unsigned long p) {
  a %= p;
  if (a == 0) throw Error(ErrorCode::DivisionByZero, "inverse of 0 mod " + std::to_string(p));
  long t = 0, new_t = 1;
  long r = static_cast<long>(p), new_r = static_cast<long>(a);
  while (new_r != 0) {
    const long q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  return mod_reduce(t, p);
}

// ----------------------------------------------------------------- FpPoly

FpPoly::FpPoly(std::vector<unsigned long> coeffs, unsigned long p) : c_(std::move(coeffs)), p_(p) {
  for (auto& c : c_) c %= p_;
  trim();
}

FpPoly FpPoly::constant(long c, unsigned long p) { return FpPoly({mod_reduce(c, p)}, p); }

FpPoly FpPoly::monomial(unsigned long c, std::size_t degree, unsigned long p) {
  std::vector<unsigned long> v(degree + 1, 0);
  v[degree] = c;
  return FpPoly(std::move(v), p);
}

void FpPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

long FpPoly::order() const {
  if (is_zero()) throw Error(ErrorCode::PreconditionViolated, "order of the zero polynomial");
  long k = 0;
  while (c_[static_cast<std::size_t>(k)] == 0) ++k;
  return k;
}

FpPoly operator+(const FpPoly& a, const FpPoly& b) {
  if (a.p_ != b.p_) throw Error(ErrorCode::BackendMismatch, "F_p polynomials over different primes");
  std::vector<unsigned long> out(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const unsigned long x = i < a.c_.size() ? a.c_[i] : 0;
    const unsigned long y = i < b.c_.size() ? b.c_[i] : 0;
    out[i] = addmod(x, y, a.p_);
  }
  return FpPoly(std::move(out), a.p_);
}

FpPoly FpPoly::operator-() const {
  std::vector<unsigned long> out(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] = submod(0, c_[i], p_);
  return FpPoly(std::move(out), p_);
}

FpPoly operator-(const FpPoly& a, const FpPoly& b) { return a + (-b); }

FpPoly operator*(const FpPoly& a, const FpPoly& b) {
  if (a.p_ != b.p_) throw Error(ErrorCode::BackendMismatch, "F_p polynomials over different primes");
  if (a.is_zero() || b.is_zero()) return FpPoly({}, a.p_);
  std::vector<unsigned long> out(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = addmod(out[i + j], mulmod(a.c_[i], b.c_[j], a.p_), a.p_);
  return FpPoly(std::move(out), a.p_);
}

FpPoly FpPoly::scaled(unsigned long c) const {
  std::vector<unsigned long> out(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] = mulmod(c_[i], c, p_);
  return FpPoly(std::move(out), p_);
}

void FpPoly::divmod(const FpPoly& a, const FpPoly& b, FpPoly& quot, FpPoly& rem) {
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by the zero polynomial");
  const unsigned long p = a.p_;
  const unsigned long inv = mod_inverse(b.lead(), p);
  std::vector<unsigned long> r = a.c_;
  const std::size_t db = b.c_.size() - 1;
  std::vector<unsigned long> q(r.size() > db ? r.size() - db : 0, 0);
  for (std::size_t k = r.size(); k-- > db;) {
    const unsigned long coef = mulmod(r[k], inv, p);
    if (coef == 0) continue;
    q[k - db] = coef;
    for (std::size_t j = 0; j <= db; ++j) r[k - db + j] = submod(r[k - db + j], mulmod(coef, b.c_[j], p), p);
  }
  quot = FpPoly(std::move(q), p);
  rem = FpPoly(std::move(r), p);
}

FpPoly FpPoly::gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero()) a = a.scaled(mod_inverse(a.lead(), a.p_));
  return a;
}

std::string FpPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t k = c_.size(); k-- > 0;) {
    if (c_[k] == 0) continue;
    if (!out.empty()) out += '+';
    if (k == 0) {
      out += std::to_string(c_[k]);
      continue;
    }
    if (c_[k] != 1) out += std::to_string(c_[k]) + "*";
    out += k == 1 ? "t" : "t^" + std::to_string(k);
  }
  return out;
}

// ---------------------------------------------------------- element types

PAdicRational::PAdicRational(Rational value, unsigned long p) : value_(std::move(value)), p_(p) {
  value_.canonicalize();
}

RationalFunction::RationalFunction(FpPoly num, FpPoly den) {
  if (den.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  if (num.prime() != den.prime()) throw Error(ErrorCode::BackendMismatch, "mixed primes in a rational function");
  const unsigned long p = den.prime();
  if (num.is_zero()) {
    num_ = FpPoly({}, p);
    den_ = FpPoly::constant(1, p);
    return;
  }
  const FpPoly g = FpPoly::gcd(num, den);
  FpPoly r;
  FpPoly::divmod(num, g, num_, r);
  FpPoly::divmod(den, g, den_, r);
  const unsigned long inv = mod_inverse(den_.lead(), p);
  num_ = num_.scaled(inv);
  den_ = den_.scaled(inv);
}

HahnElem::HahnElem(Terms terms, unsigned long p) : p_(p) {
  for (auto& [e, c] : terms) {
    const unsigned long r = c % p;
    if (r == 0) continue;
    Rational ec = e;
    ec.canonicalize();
    terms_.emplace(ec, r);
  }
}

HahnElem HahnElem::monomial(unsigned long c, const Rational& e, unsigned long p) {
  Rational ec = e;
  ec.canonicalize();
  return HahnElem(Terms{{ec, c}}, p);
}

HahnElem HahnElem::inverse_frobenius(unsigned k) const {
  const Rational scale = pow(Rational(p_), -static_cast<long>(k));
  Terms out;
  for (const auto& [e, c] : terms_) out.emplace(e * scale, c);
  return HahnElem(std::move(out), p_);
}

// -------------------------------------------------------------- FieldElem

unsigned long FieldElem::prime() const {
  return std::visit([](const auto& x) { return x.prime(); }, repr_);
}

bool FieldElem::is_zero() const {
  struct {
    bool operator()(const PAdicRational& x) const { return x.value() == 0; }
    bool operator()(const RationalFunction& x) const { return x.num().is_zero(); }
    bool operator()(const HahnElem& x) const { return x.terms().empty(); }
  } v;
  return std::visit(v, repr_);
}

bool FieldElem::is_one() const {
  struct {
    bool operator()(const PAdicRational& x) const { return x.value() == 1; }
    bool operator()(const RationalFunction& x) const {
      return x.den().degree() == 0 && x.num() == FpPoly::constant(1, x.prime());
    }
    bool operator()(const HahnElem& x) const {
      return x.terms().size() == 1 && x.terms().begin()->first == 0 && x.terms().begin()->second == 1;
    }
  } v;
  return std::visit(v, repr_);
}

namespace {

void check_same(const FieldElem& a, const FieldElem& b) {
  if (a.backend() != b.backend() || a.prime() != b.prime())
    throw Error(ErrorCode::BackendMismatch, std::string("operands from ") + std::string(to_string(a.backend())) +
                                                "/" + std::to_string(a.prime()) + " and " +
                                                std::string(to_string(b.backend())) + "/" + std::to_string(b.prime()));
}

HahnElem hahn_add(const HahnElem& a, const HahnElem& b, bool subtract) {
  const unsigned long p = a.prime();
  HahnElem::Terms out = a.terms();
  for (const auto& [e, c] : b.terms()) {
    const unsigned long cc = subtract ? submod(0, c, p) : c;
    auto [it, inserted] = out.emplace(e, cc);
    if (!inserted) {
      it->second = addmod(it->second, cc, p);
      if (it->second == 0) out.erase(it);
    }
  }
  return HahnElem(std::move(out), p);
}

HahnElem hahn_mul(const HahnElem& a, const HahnElem& b) {
  const unsigned long p = a.prime();
  HahnElem::Terms out;
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      const unsigned long c = mulmod(ca, cb, p);
      auto [it, inserted] = out.emplace(ea + eb, c);
      if (!inserted) {
        it->second = addmod(it->second, c, p);
        if (it->second == 0) out.erase(it);
      }
    }
  return HahnElem(std::move(out), p);
}

HahnElem hahn_div(const HahnElem& a, const HahnElem& b) {
  if (b.terms().empty()) throw Error(ErrorCode::DivisionByZero, "division by zero Hahn series");
  if (!b.is_monomial())
    throw Error(ErrorCode::InexactDivision, "finite-support Hahn division needs a monomial divisor");
  const auto& [eb, cb] = *b.terms().begin();
  const unsigned long inv = mod_inverse(cb, b.prime());
  HahnElem::Terms out;
  for (const auto& [e, c] : a.terms()) out.emplace(e - eb, mulmod(c, inv, a.prime()));
  return HahnElem(std::move(out), a.prime());
}

}  // namespace

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
  check_same(a, b);
  switch (a.backend()) {
    case Backend::PAdic: {
      const auto& x = std::get<PAdicRational>(a.repr_);
      return PAdicRational(x.value() + std::get<PAdicRational>(b.repr_).value(), x.prime());
    }
    case Backend::RatFun: {
      const auto& x = std::get<RationalFunction>(a.repr_);
      const auto& y = std::get<RationalFunction>(b.repr_);
      return RationalFunction(x.num() * y.den() + y.num() * x.den(), x.den() * y.den());
    }
    case Backend::Hahn: return hahn_add(std::get<HahnElem>(a.repr_), std::get<HahnElem>(b.repr_), false);
  }
  throw Error(ErrorCode::BackendMismatch, "unknown backend");
}

FieldElem FieldElem::operator-() const {
  switch (backend()) {
    case Backend::PAdic: {
      const auto& x = std::get<PAdicRational>(repr_);
      return PAdicRational(-x.value(), x.prime());
    }
    case Backend::RatFun: {
      const auto& x = std::get<RationalFunction>(repr_);
      return RationalFunction(-x.num(), x.den());
    }
    case Backend::Hahn: {
      const auto& x = std::get<HahnElem>(repr_);
      return hahn_add(HahnElem({}, x.prime()), x, true);
    }
  }
  throw Error(ErrorCode::BackendMismatch, "unknown backend");
}

FieldElem operator-(const FieldElem& a, const FieldElem& b) {
  check_same(a, b);
  return a + (-b);
}

FieldElem operator*(const FieldElem& a, const FieldElem& b) {
  check_same(a, b);
  switch (a.backend()) {
    case Backend::PAdic: {
      const auto& x = std::get<PAdicRational>(a.repr_);
      return PAdicRational(x.value() * std::get<PAdicRational>(b.repr_).value(), x.prime());
    }
    case Backend::RatFun: {
      const auto& x = std::get<RationalFunction>(a.repr_);
      const auto& y = std::get<RationalFunction>(b.repr_);
      return RationalFunction(x.num() * y.num(), x.den() * y.den());
    }
    case Backend::Hahn: return hahn_mul(std::get<HahnElem>(a.repr_), std::get<HahnElem>(b.repr_));
  }
  throw Error(ErrorCode::BackendMismatch, "unknown backend");
}

FieldElem operator/(const FieldElem& a, const FieldElem& b) {
  check_same(a, b);
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  switch (a.backend()) {
    case Backend::PAdic: {
      const auto& x = std::get<PAdicRational>(a.repr_);
      return PAdicRational(x.value() / std::get<PAdicRational>(b.repr_).value(), x.prime());
    }
    case Backend::RatFun: {
      const auto& x = std::get<RationalFunction>(a.repr_);
      const auto& y = std::get<RationalFunction>(b.repr_);
      return RationalFunction(x.num() * y.den(), x.den() * y.num());
    }
    case Backend::Hahn: return hahn_div(std::get<HahnElem>(a.repr_), std::get<HahnElem>(b.repr_));
  }
  throw Error(ErrorCode::BackendMismatch, "unknown backend");
}

FieldElem FieldElem::pow(long exponent) const {
  FieldSpec spec(backend(), prime());
  if (exponent < 0) return (spec.one() / *this).pow(-exponent);
  FieldElem result = spec.one();
  FieldElem base = *this;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

bool operator==(const FieldElem& a, const FieldElem& b) {
  check_same(a, b);
  return a.repr_ == b.repr_;
}

Extended FieldElem::valuation() const {
  if (is_zero()) return Extended::infinity();
  struct {
    Rational operator()(const PAdicRational& x) const { return Rational(padic_exponent(x.value(), x.prime())); }
    Rational operator()(const RationalFunction& x) const { return Rational(x.num().order() - x.den().order()); }
    Rational operator()(const HahnElem& x) const { return x.terms().begin()->first; }
  } v;
  return GroupElem(std::visit(v, repr_));
}

namespace {

std::string hahn_string(const HahnElem::Terms& terms) {
  if (terms.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : terms) {
    if (!out.empty()) out += '+';
    out += std::to_string(c);
    if (e != 0) out += "*t^(" + to_string(e) + ")";
  }
  return out;
}

}  // namespace

std::string FieldElem::to_string() const {
  struct {
    std::string operator()(const PAdicRational& x) const { return valkit::to_string(x.value()); }
    std::string operator()(const RationalFunction& x) const {
      if (x.den().degree() == 0) return x.num().to_string();
      return "(" + x.num().to_string() + ")/(" + x.den().to_string() + ")";
    }
    std::string operator()(const HahnElem& x) const { return hahn_string(x.terms()); }
  } v;
  return std::visit(v, repr_);
}

// -------------------------------------------------------------- FieldSpec

FieldSpec::FieldSpec(Backend b, unsigned long prime) : backend(b), p(prime) {
  if (!is_prime(p) || p > (1UL << 31)) throw Error(ErrorCode::ConfigError, "p must be a prime < 2^31");
}

FieldElem FieldSpec::from_rational(const Rational& value) const {
  Rational q = value;
  q.canonicalize();
  switch (backend) {
    case Backend::PAdic: return PAdicRational(q, p);
    case Backend::RatFun: {
      const unsigned long den = reduce_integer(q.get_den(), p);
      if (den == 0) throw Error(ErrorCode::DivisionByZero, "denominator divisible by p in characteristic p");
      return RationalFunction(FpPoly({mulmod(reduce_integer(q.get_num(), p), mod_inverse(den, p), p)}, p),
                              FpPoly::constant(1, p));
    }
    case Backend::Hahn: {
      const unsigned long den = reduce_integer(q.get_den(), p);
      if (den == 0) throw Error(ErrorCode::DivisionByZero, "denominator divisible by p in characteristic p");
      return HahnElem::monomial(mulmod(reduce_integer(q.get_num(), p), mod_inverse(den, p), p), Rational(0), p);
    }
  }
  throw Error(ErrorCode::BackendMismatch, "unknown backend");
}

FieldElem FieldSpec::from_int(long n) const { return from_rational(Rational(n)); }

FieldElem FieldSpec::from_value(const GroupElem& v) const {
  if (v.rank() != 1) throw Error(ErrorCode::ValueNotRepresentable, "field values have rank 1");
  const Rational& e = v[0];
  if (backend == Backend::Hahn) return HahnElem::monomial(1, e, p);
  if (e.get_den() != 1 || !e.get_num().fits_slong_p())
    throw Error(ErrorCode::ValueNotRepresentable, "value " + v.to_string() + " is not in the value group Z");
  const long k = e.get_num().get_si();
  if (backend == Backend::PAdic) return PAdicRational(pow(Rational(p), k), p);
  if (k >= 0) return RationalFunction(FpPoly::monomial(1, static_cast<std::size_t>(k), p), FpPoly::constant(1, p));
  return RationalFunction(FpPoly::constant(1, p), FpPoly::monomial(1, static_cast<std::size_t>(-k), p));
}

namespace {

struct ParsedTerm {
  Rational coeff;
  Rational exponent;
};

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
  return out;
}

// "c*t^(e)", "c*t^e", "t", "-t^(1/2)", "c"
std::vector<ParsedTerm> parse_terms(std::string_view text) {
  const std::string s = strip_spaces(text);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty field element");
  std::vector<std::string> pieces;
  std::string cur;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char ch = s[i];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if ((ch == '+' || ch == '-') && depth == 0 && i > 0 && s[i - 1] != '^') {
      pieces.push_back(cur);
      cur.clear();
      if (ch == '-') cur += '-';
      continue;
    }
    cur += ch;
  }
  pieces.push_back(cur);
  std::vector<ParsedTerm> out;
  for (std::string piece : pieces) {
    if (piece.empty() || piece == "-") throw Error(ErrorCode::ParseError, "malformed term in '" + s + "'");
    bool negative = false;
    if (piece[0] == '-') {
      negative = true;
      piece.erase(0, 1);
    }
    ParsedTerm term{Rational(1), Rational(0)};
    const auto tpos = piece.find('t');
    if (tpos == std::string::npos) {
      term.coeff = parse_rational(piece);
    } else {
      std::string coeff = piece.substr(0, tpos);
      if (!coeff.empty()) {
        if (coeff.back() != '*') throw Error(ErrorCode::ParseError, "expected '*' before t in '" + piece + "'");
        coeff.pop_back();
        term.coeff = parse_rational(coeff);
      }
      std::string rest = piece.substr(tpos + 1);
      if (rest.empty()) {
        term.exponent = 1;
      } else {
        if (rest[0] != '^') throw Error(ErrorCode::ParseError, "expected '^' after t in '" + piece + "'");
        rest.erase(0, 1);
        if (!rest.empty() && rest.front() == '(') {
          if (rest.back() != ')') throw Error(ErrorCode::ParseError, "unbalanced exponent in '" + piece + "'");
          rest = rest.substr(1, rest.size() - 2);
        }
        term.exponent = parse_rational(rest);
      }
    }
    if (negative) term.coeff = -term.coeff;
    out.push_back(term);
  }
  return out;
}

}  // namespace

FieldElem FieldSpec::parse(std::string_view text) const {
  if (backend == Backend::PAdic) return PAdicRational(parse_rational(strip_spaces(text)), p);
  FieldElem acc = zero();
  for (const auto& term : parse_terms(text)) {
    if (backend == Backend::RatFun && term.exponent.get_den() != 1)
      throw Error(ErrorCode::ParseError, "rational-function exponents must be integers");
    acc = acc + from_rational(term.coeff) * from_value(GroupElem(term.exponent));
  }
  return acc;
}

HahnElem artin_schreier_partial_sum(unsigned long p, const HahnElem& a, unsigned n) {
  if (a.prime() != p) throw Error(ErrorCode::BackendMismatch, "prime differs from the element's");
  if (a.terms().empty() || a.terms().begin()->first >= 0)
    throw Error(ErrorCode::NonNegativeValuation, "partial sums need v(a) < 0");
  HahnElem acc({}, p);
  for (unsigned i = 0; i <= n; ++i) acc = hahn_add(acc, a.inverse_frobenius(i), false);
  return acc;
}

}  // namespace valkit
