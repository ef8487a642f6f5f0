#include "doctest.h"
#include "valkit/errors.hpp"
#include "valkit/poly.hpp"

using namespace valkit;

namespace {
const FieldSpec Q2(Backend::PAdic, 2);
const FieldSpec H2(Backend::Hahn, 2);
}  // namespace

TEST_CASE("q-expansion examples") {
  const Poly f = Poly::parse(Q2, {"2", "1", "1"});
  const auto e = q_expand(f, Poly::x(Q2));
  REQUIRE(e.coeffs.size() == 3);
  CHECK(e.coeffs[0] == Poly::constant(Q2, Q2.from_int(2)));
  CHECK(e.coeffs[1] == Poly::constant(Q2, Q2.one()));
  CHECK(e.coeffs[2] == Poly::constant(Q2, Q2.one()));

  const Poly q = Poly::linear(Q2, Q2.from_int(3));
  const auto eq = q_expand(q, q);
  REQUIRE(eq.coeffs.size() == 2);
  CHECK(eq.coeffs[0].is_zero());
  CHECK(eq.coeffs[1] == Poly::constant(Q2, Q2.one()));

  CHECK_THROWS_AS(q_expand(f, Poly::parse(Q2, {"0", "2"})), Error);
}

TEST_CASE("q-expansion over Hahn series in characteristic 2") {
  // g = x^2 - x - t^-1 around a_1 = t^(-1/2): g(a_1) = t^(-1/2), linear coefficient 2a_1 - 1 = 1.
  const Poly g = Poly(H2, {-H2.parse("t^(-1)"), -H2.one(), H2.one()});
  const FieldElem a1 = H2.parse("t^(-1/2)");
  const auto e = q_expand(g, Poly::linear(H2, a1));
  REQUIRE(e.coeffs.size() == 3);
  CHECK(e.coeffs[0] == Poly::constant(H2, H2.parse("t^(-1/2)")));
  CHECK(e.coeffs[1] == Poly::constant(H2, H2.one()));
  CHECK(e.coeffs[2] == Poly::constant(H2, H2.one()));
  CHECK(e.reconstruct() == g);
  CHECK(g.evaluate(a1) == H2.parse("t^(-1/2)"));
}

TEST_CASE("formal derivatives respect the characteristic") {
  const Poly as = Poly(H2, {-H2.parse("t^(-1)"), -H2.one(), H2.one()});
  CHECK(as.derivative() == Poly::constant(H2, -H2.one()));
  const FieldSpec Q3(Backend::PAdic, 3);
  const Poly kummer = Poly::monomial(Q3, Q3.one(), 3) - Poly::constant(Q3, Q3.from_int(4));
  CHECK(kummer.derivative() == Poly::monomial(Q3, Q3.from_int(3), 2));
  CHECK(Poly::constant(Q3, Q3.from_int(7)).derivative().is_zero());
}

TEST_CASE("q-monic") {
  const Poly f = Poly::parse(Q2, {"2", "1", "1"});
  CHECK(is_q_monic(f, Poly::linear(Q2, Q2.one())));
  CHECK_FALSE(is_q_monic(Poly::parse(Q2, {"0", "0", "2"}), Poly::x(Q2)));
}

TEST_CASE("norm of multiplication") {
  const Poly g = Poly::parse(Q2, {"1", "1", "1"});
  CHECK(norm(Poly::x(Q2), g) == Q2.one());
  // N(2x + 1) = 4 - 2 + 1 = 3 for x^2 + x + 1
  CHECK(norm(Poly::parse(Q2, {"1", "2"}), g) == Q2.from_int(3));
  CHECK(norm(g, g).is_zero());
}

TEST_CASE("printing") {
  CHECK(Poly::parse(Q2, {"2", "-1", "1"}).to_string() == "x^2 + -1*x + 2");
  CHECK(Poly(Q2).to_string() == "0");
}
