#pragma once

// Valued-field backends: Q with a p-adic valuation, F_p(t) with the t-adic
// valuation, and finite-support Hahn series over F_p with rational exponents.

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "valkit/groups.hpp"
#include "valkit/rational.hpp"

namespace valkit {

enum class Backend { PAdic, RatFun, Hahn };

std::string_view to_string(Backend b);
Backend parse_backend(std::string_view name);

/// Dense polynomial over F_p in t, lowest degree first, no trailing zeros.
class FpPoly {
 public:
  FpPoly() = default;
  FpPoly(std::vector<unsigned long> coeffs, unsigned long p);
  static FpPoly constant(long c, unsigned long p);
  static FpPoly monomial(unsigned long c, std::size_t degree, unsigned long p);

  unsigned long prime() const noexcept { return p_; }
  bool is_zero() const noexcept { return c_.empty(); }
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  const std::vector<unsigned long>& coeffs() const noexcept { return c_; }
  unsigned long lead() const { return c_.back(); }
  /// t-adic order; requires nonzero.
  long order() const;

  friend FpPoly operator+(const FpPoly& a, const FpPoly& b);
  friend FpPoly operator-(const FpPoly& a, const FpPoly& b);
  friend FpPoly operator*(const FpPoly& a, const FpPoly& b);
  FpPoly operator-() const;
  FpPoly scaled(unsigned long c) const;
  /// Quotient and remainder; b nonzero.
  static void divmod(const FpPoly& a, const FpPoly& b, FpPoly& quot, FpPoly& rem);
  static FpPoly gcd(FpPoly a, FpPoly b);
  friend bool operator==(const FpPoly&, const FpPoly&) = default;

  std::string to_string() const;

 private:
  void trim();
  std::vector<unsigned long> c_;
  unsigned long p_ = 2;
};

unsigned long mod_inverse(unsigned long a, unsigned long p);
unsigned long mod_reduce(long a, unsigned long p);

class PAdicRational {
 public:
  PAdicRational(Rational value, unsigned long p);
  const Rational& value() const noexcept { return value_; }
  unsigned long prime() const noexcept { return p_; }
  friend bool operator==(const PAdicRational& a, const PAdicRational& b) { return a.value_ == b.value_; }

 private:
  Rational value_;
  unsigned long p_;
};

/// num/den reduced, den monic.
class RationalFunction {
 public:
  RationalFunction(FpPoly num, FpPoly den);
  const FpPoly& num() const noexcept { return num_; }
  const FpPoly& den() const noexcept { return den_; }
  unsigned long prime() const noexcept { return num_.prime(); }
  friend bool operator==(const RationalFunction&, const RationalFunction&) = default;

 private:
  FpPoly num_, den_;
};

class HahnElem {
 public:
  using Terms = std::map<Rational, unsigned long>;  // exponent -> nonzero coefficient in F_p
  HahnElem(Terms terms, unsigned long p);
  static HahnElem monomial(unsigned long c, const Rational& e, unsigned long p);

  const Terms& terms() const noexcept { return terms_; }
  unsigned long prime() const noexcept { return p_; }
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  /// x^(1/p^k): exponents divided by p^k, coefficients fixed.
  HahnElem inverse_frobenius(unsigned k) const;
  friend bool operator==(const HahnElem& a, const HahnElem& b) { return a.p_ == b.p_ && a.terms_ == b.terms_; }

 private:
  Terms terms_;
  unsigned long p_;
};

/// An element of one of the backends. Binary operations require the same
/// backend and prime (BackendMismatch otherwise).
class FieldElem {
 public:
  using Repr = std::variant<PAdicRational, RationalFunction, HahnElem>;
  FieldElem(Repr repr) : repr_(std::move(repr)) {}  // NOLINT
  FieldElem(PAdicRational x) : repr_(std::move(x)) {}  // NOLINT
  FieldElem(RationalFunction x) : repr_(std::move(x)) {}  // NOLINT
  FieldElem(HahnElem x) : repr_(std::move(x)) {}  // NOLINT

  const Repr& repr() const noexcept { return repr_; }
  Backend backend() const noexcept { return static_cast<Backend>(repr_.index()); }
  unsigned long prime() const;
  bool is_zero() const;
  bool is_one() const;

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b);
  FieldElem operator-() const;
  FieldElem pow(long exponent) const;
  friend bool operator==(const FieldElem& a, const FieldElem& b);

  Extended valuation() const;
  std::string to_string() const;

 private:
  Repr repr_;
};

/// The field a scenario works over.
struct FieldSpec {
  Backend backend = Backend::PAdic;
  unsigned long p = 2;

  FieldSpec() = default;
  FieldSpec(Backend b, unsigned long prime);

  FieldElem zero() const { return from_int(0); }
  FieldElem one() const { return from_int(1); }
  FieldElem from_int(long n) const;
  FieldElem from_rational(const Rational& q) const;
  /// p^k, t^k or t^q with the given value; ValueNotRepresentable if the
  /// backend's value group does not contain it.
  FieldElem from_value(const GroupElem& v) const;
  /// padic: "3/4"; ratfun and hahn: "c1*t^(e1)+c2*t^(e2)+...".
  FieldElem parse(std::string_view text) const;
  bool is_char_p() const { return backend != Backend::PAdic; }
  bool owns(const FieldElem& x) const { return x.backend() == backend && x.prime() == p; }
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// sum_{i=0}^n a^(1/p^i). Requires v(a) < 0 (NonNegativeValuation otherwise).
HahnElem artin_schreier_partial_sum(unsigned long p, const HahnElem& a, unsigned n);

}  // namespace valkit
