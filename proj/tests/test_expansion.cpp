#include "doctest.h"
#include "valkit/errors.hpp"
#include "valkit/expansion.hpp"

using namespace valkit;

namespace {

const FieldSpec H2(Backend::Hahn, 2);
const FieldSpec Q2(Backend::PAdic, 2);

GroupElem r(const std::string& s) { return GroupElem::parse(s); }

struct AsSetup {
  std::shared_ptr<ArtinSchreierFamily> fam;
  NuOracle nu;
  KeySequence ks;
  KeyContext ctx;

  explicit AsSetup(unsigned long p)
      : fam(std::make_shared<ArtinSchreierFamily>(p, std::get<HahnElem>(FieldSpec(Backend::Hahn, p).parse("t^(-1)").repr()))),
        nu(NuOracle::stabilization(fam->minimal_polynomial(), [f = fam](long m) { return *f->term(m).approximant; }, 0)),
        ks(FieldSpec(Backend::Hahn, p), {PlateauStage{1, fam}}, fam->minimal_polynomial(), p),
        ctx(ks, nu) {}
};

GroupElem min_term_value(const FullExpansion& e, const KeyContext& ctx) {
  GroupElem best = e.term_value(ctx, 0);
  for (std::size_t t = 1; t < e.terms.size(); ++t) best = std::min(best, e.term_value(ctx, t));
  return best;
}

}  // namespace

TEST_CASE("full expansion of constants and keys") {
  AsSetup s(2);
  const KeyIndex i{0, 3};
  const auto c = full_expansion(Poly::constant(H2, H2.parse("t^(2)")), i, s.ctx);
  REQUIRE(c.terms.size() == 1);
  CHECK(c.terms[0].lambda.empty());
  CHECK(i0_set(c).empty());

  const auto q = full_expansion(s.ctx.key(i), i, s.ctx);
  REQUIRE(q.terms.size() == 1);
  CHECK(q.terms[0].lambda == Exponents{{i, 1}});
  CHECK(i0_set(q) == std::set<KeyIndex>{i});
}

TEST_CASE("full expansion of g at a plateau index") {
  AsSetup s(2);
  for (long n = 1; n <= 5; ++n) {
    const KeyIndex i{0, n};
    const auto e = full_expansion(s.ks.g(), i, s.ctx);
    CHECK(e.reconstruct(s.ctx) == s.ks.g());
    CHECK(e.terms.size() == 3);
    CHECK(i0_set(e) == std::set<KeyIndex>{i});
    const Extended vi = s.ctx.truncated(s.ks.g(), i);
    CHECK(vi == Extended(GroupElem(pow(Rational(2), 1 - n) * -1)));
    CHECK(Extended(min_term_value(e, s.ctx)) == vi);
    for (std::size_t t = 0; t < e.terms.size(); ++t)
      CHECK(e.normalized_coefficient(s.ctx, t).valuation() == Extended(e.term_value(s.ctx, t)));
  }
}

TEST_CASE("full expansion recurses through earlier keys") {
  AsSetup s(2);
  const KeyIndex i{0, 4};
  const Poly x = Poly::x(H2);
  const Poly f = (x * x * x) + x.scaled(H2.parse("t^(-3)")) + Poly::constant(H2, H2.one());
  const auto e = full_expansion(f, i, s.ctx);
  CHECK(e.reconstruct(s.ctx) == f);
  CHECK(Extended(min_term_value(e, s.ctx)) == s.ctx.truncated(f, i));
  for (const auto& t : e.terms) {
    long lower = 0;
    for (const auto& [k, exp] : t.lambda)
      if (k < i) lower += static_cast<long>(exp) * s.ctx.key(k).degree();
    CHECK(lower < s.ctx.key(i).degree());
  }
}

TEST_CASE("S_i(f)") {
  AsSetup s(2);
  const KeyIndex i{0, 2};
  CHECK(s_set(s.ctx.key({0, 5}), i, s.ctx) == std::set<unsigned>{0, 1});
  CHECK(s_set(s.ctx.key(i).pow(2), i, s.ctx) == std::set<unsigned>{2});
  CHECK(s_set(Poly::constant(H2, H2.parse("t^(5)")), i, s.ctx) == std::set<unsigned>{0});
}

TEST_CASE("derivative drop") {
  for (unsigned long p : {2UL, 3UL}) {
    AsSetup s(p);
    const KeyIndex i{0, 2};
    const auto qj = derivative_drop(s.ctx.key({0, 6}), i, s.ctx);
    CHECK(qj.hypothesis);
    CHECK(qj.drop == s.ctx.alpha(i));
    CHECK(qj.equals_alpha);
    CHECK(qj.consistent());
    CHECK(qj.alpha_i == Extended(GroupElem(pow(Rational(static_cast<long>(p)), -2))));

    const auto qp = derivative_drop(s.ctx.key(i).pow(static_cast<unsigned>(p)), i, s.ctx);
    CHECK(qp.s_f == std::set<unsigned>{static_cast<unsigned>(p)});
    CHECK(qp.drop > qp.alpha_i);
    CHECK(!qp.p_not_divides_s);
    CHECK(qp.consistent());

    const auto c = derivative_drop(Poly::constant(s.ks.spec(), s.ks.spec().one()), i, s.ctx);
    CHECK(c.drop.is_infinite());
    CHECK(c.consistent());
  }
}

TEST_CASE("rewriting in normalized generators") {
  const Poly g = Poly::parse(Q2, {"1", "1", "1"});
  const NuOracle nu = norm_model(g);
  KeySequence ks(Q2, {ExplicitStage{"1", Poly::x(Q2), r("0"), r("0")}}, g, 2);
  KeyContext ctx(ks, nu);

  const auto one = rewrite_in_generators(Poly::constant(Q2, Q2.one()), ctx);
  REQUIRE(one.size() == 1);
  CHECK(one[0].a == Q2.one());
  CHECK(one[0].lambda.empty());

  // x^2 + x + 3 = g + 2 in L, so its value is v(2) = 1
  const auto f = rewrite_in_generators(Poly::parse(Q2, {"3", "1", "1"}), ctx);
  REQUIRE(f.size() == 1);
  CHECK(f[0].a.valuation() == Extended(r("1")));

  const auto four = rewrite_in_generators(Poly::parse(Q2, {"0", "4"}), ctx);
  REQUIRE(four.size() == 1);
  CHECK(four[0].a == Q2.from_int(4));
  CHECK(four[0].lambda == Exponents{{KeyIndex{0, 0}, 1}});

  CHECK_THROWS_AS(rewrite_in_generators(Poly::parse(Q2, {"1/2"}), ctx), Error);

  AsSetup s(2);
  const auto tx = rewrite_in_generators(Poly::x(H2).scaled(H2.parse("t")), s.ctx);
  REQUIRE(tx.size() == 1);
  CHECK(tx[0].a == H2.parse("t^(1/2)"));
  CHECK(tx[0].lambda == Exponents{{KeyIndex{0, 1}, 1}});
}
