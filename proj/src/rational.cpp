#include "valkit/rational.hpp"

#include <cctype>

#include "valkit/errors.hpp"

namespace valkit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::InvalidSubgroup: return "InvalidSubgroup";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::InexactDivision: return "InexactDivision";
    case ErrorCode::BackendMismatch: return "BackendMismatch";
    case ErrorCode::NonNegativeValuation: return "NonNegativeValuation";
    case ErrorCode::NonMonicBase: return "NonMonicBase";
    case ErrorCode::StabilizationBudgetExceeded: return "StabilizationBudgetExceeded";
    case ErrorCode::NoWitness: return "NoWitness";
    case ErrorCode::NegativeValueInput: return "NegativeValueInput";
    case ErrorCode::ValueNotRepresentable: return "ValueNotRepresentable";
    case ErrorCode::LawMismatch: return "LawMismatch";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::EmptyRootData: return "EmptyRootData";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  s = trim(s);
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) throw Error(ErrorCode::ParseError, "malformed rational '" + std::string(whole) + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw Error(ErrorCode::ParseError, "malformed rational '" + std::string(whole) + "'");
  }
  std::string digits(s);
  if (digits.front() == '+') digits.erase(0, 1);
  return Integer(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  Integer num = parse_integer(text.substr(0, slash), text);
  Integer den = 1;
  if (slash != std::string_view::npos) {
    den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

long padic_exponent(const Integer& z, unsigned long p) {
  if (z == 0) throw Error(ErrorCode::PreconditionViolated, "p-adic exponent of zero");
  Integer rest;
  Integer prime(p);
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), z.get_mpz_t(), prime.get_mpz_t()));
}

long padic_exponent(const Rational& q, unsigned long p) {
  return padic_exponent(Integer(q.get_num()), p) - padic_exponent(Integer(q.get_den()), p);
}

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw Error(ErrorCode::DivisionByZero, "negative power of zero");
    return pow(Rational(1) / base, -exponent);
  }
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational out(num, den);
  out.canonicalize();
  return out;
}

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace valkit
