#pragma once

#include <string>
#include <vector>

#include "valkit/fields.hpp"

namespace valkit {

/// Dense univariate polynomial over a FieldSpec, lowest degree first.
class Poly {
 public:
  explicit Poly(FieldSpec spec) : spec_(spec) {}
  Poly(FieldSpec spec, std::vector<FieldElem> coeffs);

  static Poly x(const FieldSpec& spec);
  static Poly constant(const FieldSpec& spec, FieldElem c);
  static Poly monomial(const FieldSpec& spec, FieldElem c, std::size_t degree);
  /// x - a
  static Poly linear(const FieldSpec& spec, const FieldElem& a);
  /// Coefficient strings, lowest degree first.
  static Poly parse(const FieldSpec& spec, const std::vector<std::string>& coeffs);

  const FieldSpec& spec() const noexcept { return spec_; }
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_constant() const noexcept { return c_.size() <= 1; }
  const std::vector<FieldElem>& coeffs() const noexcept { return c_; }
  FieldElem coeff(std::size_t i) const;
  const FieldElem& lead() const;
  bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  Poly scaled(const FieldElem& c) const;
  Poly pow(unsigned n) const;
  friend bool operator==(const Poly& a, const Poly& b);

  /// Euclidean division; the divisor's leading coefficient must be invertible
  /// (always the case for monic divisors).
  static void divmod(const Poly& a, const Poly& b, Poly& quot, Poly& rem);
  FieldElem evaluate(const FieldElem& at) const;
  Poly derivative() const;

  /// "c_d*x^d + ... + c_0"
  std::string to_string() const;

 private:
  void trim();
  FieldSpec spec_;
  std::vector<FieldElem> c_;
};

struct QExpansion {
  Poly base;
  std::vector<Poly> coeffs;  // f = sum coeffs[i] * base^i

  Poly reconstruct() const;
};

/// Repeated division by the monic q (NonMonicBase otherwise).
QExpansion q_expand(const Poly& f, const Poly& q);
bool is_q_monic(const Poly& f, const Poly& q);

/// Determinant of multiplication by f on K[x]/(g), g monic.
FieldElem norm(const Poly& f, const Poly& g);

}  // namespace valkit
