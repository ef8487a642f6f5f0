#include <random>

#include "doctest.h"
#include "valkit/errors.hpp"
#include "valkit/fields.hpp"

using namespace valkit;

namespace {
Rational val(const FieldElem& x) { return x.valuation().finite()[0]; }
}  // namespace

TEST_CASE("p-adic valuations") {
  FieldSpec k2(Backend::PAdic, 2), k3(Backend::PAdic, 3);
  CHECK(val(k2.from_int(12)) == 2);
  CHECK(val(k3.parse("1/3") + k3.parse("1/3")) == -1);
  CHECK(k2.zero().valuation().is_infinite());
  CHECK(val(k3.from_value(GroupElem(Rational(-2)))) == -2);
  CHECK_THROWS_AS(k2.from_value(GroupElem(Rational(1, 2))), Error);
  CHECK_THROWS_AS(k2.one() / k2.zero(), Error);
}

TEST_CASE("backends do not mix") {
  FieldSpec a(Backend::PAdic, 2), b(Backend::Hahn, 2), c(Backend::PAdic, 3);
  CHECK_THROWS_AS(a.one() + b.one(), Error);
  CHECK_THROWS_AS(a.one() * c.one(), Error);
  try {
    (void)(a.one() - b.one());
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BackendMismatch);
  }
}

TEST_CASE("rational functions over F_p") {
  FieldSpec k(Backend::RatFun, 3);
  const FieldElem t = k.parse("t");
  const FieldElem x = t * t / (k.one() + t);
  CHECK(val(x) == 2);
  CHECK(x.to_string() == "(t^2)/(t+1)");
  CHECK((x * (k.one() + t) / t) == t);
  CHECK(k.from_int(3).is_zero());
  CHECK(val(k.parse("t^(-2)+1")) == -2);
  CHECK_THROWS_AS(k.parse("t^(1/2)"), Error);
  CHECK_THROWS_AS(k.from_rational(Rational(1, 3)), Error);
}

TEST_CASE("Hahn series") {
  FieldSpec k(Backend::Hahn, 2);
  const FieldElem x = k.parse("t^(-1)+t^(-1/2)");
  CHECK(x.pow(2) == k.parse("t^(-2)+t^(-1)"));
  CHECK(val(k.parse("t^(-1/2)+t^3")) == Rational(-1, 2));
  CHECK(k.parse("1*t^(-1)+1*t^(-1/2)").to_string() == "1*t^(-1)+1*t^(-1/2)");
  CHECK(k.parse(x.to_string()) == x);
  CHECK(x / k.parse("t") == k.parse("t^(-2)+t^(-3/2)"));
  CHECK_THROWS_AS(k.one() / x, Error);
  FieldSpec k3(Backend::Hahn, 3);
  CHECK(k3.parse("-t") == k3.parse("2*t"));
  CHECK(k3.parse("t - t").is_zero());
}

TEST_CASE("Artin-Schreier partial sums") {
  auto a2 = std::get<HahnElem>(FieldSpec(Backend::Hahn, 2).parse("t^(-1)").repr());
  CHECK(FieldElem(artin_schreier_partial_sum(2, a2, 0)) == FieldElem(a2));
  CHECK(FieldElem(artin_schreier_partial_sum(2, a2, 2)) ==
        FieldSpec(Backend::Hahn, 2).parse("t^(-1)+t^(-1/2)+t^(-1/4)"));
  auto a3 = std::get<HahnElem>(FieldSpec(Backend::Hahn, 3).parse("t^(-1)").repr());
  CHECK(FieldElem(artin_schreier_partial_sum(3, a3, 1)) == FieldSpec(Backend::Hahn, 3).parse("t^(-1)+t^(-1/3)"));
  auto pos = std::get<HahnElem>(FieldSpec(Backend::Hahn, 2).parse("t").repr());
  CHECK_THROWS_AS(artin_schreier_partial_sum(2, pos, 1), Error);
}

namespace {

FieldElem random_elem(const FieldSpec& k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> small(-6, 6);
  switch (k.backend) {
    case Backend::PAdic: {
      int den = 0;
      while (den == 0) den = small(rng);
      Rational q(small(rng), den);
      q.canonicalize();
      return k.from_rational(q * pow(Rational(k.p), small(rng)));
    }
    case Backend::RatFun: {
      FieldElem num = k.zero(), den = k.zero();
      for (int i = 0; i < 3; ++i) num = num + k.from_int(small(rng)) * k.from_value(GroupElem(Rational(i)));
      while (den.is_zero())
        for (int i = 0; i < 3; ++i) den = den + k.from_int(small(rng)) * k.from_value(GroupElem(Rational(i)));
      return num / den * k.from_value(GroupElem(Rational(small(rng))));
    }
    case Backend::Hahn: {
      FieldElem x = k.zero();
      for (int i = 0; i < 3; ++i)
        x = x + k.from_int(small(rng)) * k.from_value(GroupElem(Rational(small(rng), std::abs(small(rng)) + 1)));
      return x;
    }
  }
  return k.zero();
}

}  // namespace

TEST_CASE("valuation axioms hold on random elements of every backend") {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (Backend b : {Backend::PAdic, Backend::RatFun, Backend::Hahn}) {
    for (unsigned long p : {2UL, 3UL, 5UL}) {
      FieldSpec k(b, p);
      for (int i = 0; i < 80; ++i) {
        const FieldElem x = random_elem(k, rng), y = random_elem(k, rng);
        const Extended vx = x.valuation(), vy = y.valuation();
        CHECK((x * y).valuation() == vx + vy);
        const Extended vs = (x + y).valuation();
        CHECK(vs >= std::min(vx, vy));
        if (vx != vy) CHECK(vs == std::min(vx, vy));
        if (b == Backend::Hahn && !x.is_zero()) CHECK(val(x.pow(static_cast<long>(p))) == val(x) * p);
        ++checked;
      }
    }
  }
  CHECK(checked >= 200);
}
