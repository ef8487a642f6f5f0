#include "doctest.h"
#include "valkit/errors.hpp"
#include "valkit/groups.hpp"

using namespace valkit;

namespace {
GroupElem g(const char* s) { return GroupElem::parse(s); }
GroupElem q(long n, long d = 1) { return GroupElem(Rational(n, d)); }
}  // namespace

TEST_CASE("lexicographic order and parsing") {
  CHECK(g("1,-5") > g("0,100"));
  CHECK(g("0,1/2") < g("0,1"));
  CHECK(g("3/6").to_string() == "1/2");
  CHECK(g("2,-3").to_fraction_string() == "2/1,-3/1");
  CHECK(g("0,-1").sign() == -1);
  CHECK(*g("0,7").lead() == 1);
  CHECK_THROWS_AS(g("1") < g("1,0"), Error);
  CHECK_THROWS_AS(g("1/0"), Error);
}

TEST_CASE("extended values") {
  Extended inf = Extended::infinity();
  CHECK(inf > Extended(q(1000)));
  CHECK((inf + Extended(q(1))).is_infinite());
  CHECK(Extended(q(1)) + Extended(q(2)) == Extended(q(3)));
  CHECK_THROWS_AS(inf.finite(), Error);
}

TEST_CASE("isolated subgroups") {
  IsolatedSubgroup d1{2, 1};
  CHECK(d1.contains(g("0,5")));
  CHECK_FALSE(d1.contains(g("1,0")));
  CHECK(compare_mod(g("1,5"), g("1,-7"), d1) == 0);
  CHECK(compare_mod(g("1,5"), g("2,-7"), d1) < 0);
}

TEST_CASE("segment of a finite list has its minimum") {
  auto s = segment_from(ValueSequence::finite({q(3), q(1), q(2)}));
  REQUIRE(s.has_minimum());
  CHECK(s.minimum() == q(1));
  CHECK_THROWS_AS(segment_from(ValueSequence::finite({})), Error);
}

TEST_CASE("segment generated by 1/2^n") {
  auto seq = ValueSequence::closed_form(q(1), q(0), Rational(2));
  auto s = segment_from(seq);
  CHECK(s.kind() == Segment::Kind::GeneratedBy);
  CHECK(*s.contains(q(1, 1024)));
  CHECK_FALSE(*s.contains(q(0)));
  CHECK(segment_compare(Segment::min_closed(q(0)), s) == SegmentOrder::AContainsB);
  CHECK(segment_compare(s, Segment::min_closed(q(0))) == SegmentOrder::BContainsA);
  CHECK(segment_compare(s, segment_from(ValueSequence::closed_form(q(5), q(0), Rational(3)))) ==
        SegmentOrder::Equal);
}

TEST_CASE("constant and increasing closed forms attain their minimum") {
  CHECK(segment_from(ValueSequence::closed_form(q(0), q(5), Rational(2))).minimum() == q(5));
  CHECK(segment_from(ValueSequence::closed_form(q(-1), q(1, 2), Rational(3))).minimum() == q(-1, 2));
}

TEST_CASE("diverging laws give the whole group in rank 1") {
  auto s = segment_from(ValueSequence::closed_form(q(-1), q(0), Rational(1, 2)));
  CHECK(s.kind() == Segment::Kind::WholeGroup);
  CHECK(segment_from(ValueSequence::arithmetic(q(-2), q(7))).kind() == Segment::Kind::WholeGroup);
  CHECK(segment_from(ValueSequence::arithmetic(q(2), q(7), 1)).minimum() == q(9));
}

TEST_CASE("prefix below the law cut gives a minimum") {
  auto seq = ValueSequence::closed_form(q(1), q(0), Rational(2), 0, {q(-1)});
  auto s = segment_from(seq);
  REQUIRE(s.has_minimum());
  CHECK(s.minimum() == q(-1));
}

TEST_CASE("segment ordering is total on exact segments") {
  CHECK(segment_compare(Segment::whole(), Segment::empty()) == SegmentOrder::AContainsB);
  CHECK(segment_compare(Segment::empty(), Segment::empty()) == SegmentOrder::Equal);
  CHECK(segment_compare(Segment::min_closed(q(1)), Segment::min_closed(q(2))) == SegmentOrder::AContainsB);
  auto u = segment_union(Segment::min_closed(q(1)), Segment::min_closed(q(2)));
  CHECK(u.minimum() == q(1));
}

TEST_CASE("probed segments decide only when a term escapes") {
  auto probed = Segment::generated_by(ValueSequence::probed([](long n) { return q(-n); }, 1, "-n"), std::nullopt);
  CHECK(segment_compare(Segment::min_closed(q(0)), probed) == SegmentOrder::BContainsA);
  auto inside = Segment::generated_by(ValueSequence::probed([](long n) { return q(1, n + 1); }, 1, "1/(n+1)"),
                                      std::nullopt);
  CHECK(segment_compare(Segment::min_closed(q(0)), inside) == SegmentOrder::Inconclusive);
}

TEST_CASE("largest delta") {
  CHECK(largest_delta(Segment::whole(), 1).suffix_len == 1);
  CHECK(largest_delta(Segment::min_closed(q(0)), 1).suffix_len == 0);
  // rank 2: {g : g + Delta_1 >= (1, 0) + Delta_1}
  auto seq = ValueSequence::arithmetic(g("0,-1"), g("1,0"));
  auto s = segment_from(seq);
  CHECK(largest_delta(s, 2).suffix_len == 1);
  CHECK(*s.contains(g("1,-1000")));
  CHECK_FALSE(*s.contains(g("0,1000")));
  CHECK_THROWS_AS(largest_delta(Segment::empty(), 1), Error);
  // open cut above a coset of Delta_0 in rank 2: (1,0) + (1,0)/2^n
  auto open = segment_from(ValueSequence::closed_form(g("1,0"), g("1,0"), Rational(2)));
  CHECK(largest_delta(open, 2).suffix_len == 1);
  CHECK_FALSE(*open.contains(g("1,5")));
  CHECK(*open.contains(g("1001/1000,-5")));
}

TEST_CASE("weak limits") {
  IsolatedSubgroup triv{1, 0};
  auto conv = ValueSequence::closed_form(q(1), q(0), Rational(2));
  auto w = wlim(q(0), conv, triv);
  CHECK(w.holds);
  CHECK(w.branch == 1);
  CHECK_FALSE(wlim(q(1), conv, triv));
  auto st = ValueSequence::stabilized({q(3), q(2)}, q(0));
  auto w2 = wlim(q(0), st, triv);
  CHECK(w2.holds);
  CHECK(w2.branch == 2);
  CHECK_FALSE(wlim(q(0), ValueSequence::stabilized({q(-1)}, q(0)), triv));
  CHECK(wlim(q(5), ValueSequence::finite({q(7), q(5)}), triv).branch == 2);
  CHECK_FALSE(wlim(q(0), ValueSequence::closed_form(q(1), q(0), Rational(2), 0, {q(-3)}), triv));
  // rank 2, Delta_1: cosets (1/2^n, *) shrink to 0 + Delta_1
  auto r2 = ValueSequence::closed_form(g("1,4"), g("0,9"), Rational(2));
  CHECK(wlim(g("0,-100"), r2, IsolatedSubgroup{2, 1}).branch == 1);
  CHECK_THROWS_AS(wlim(q(0), ValueSequence::probed([](long) { return q(0); }, 1, "0"), triv), Error);
}

TEST_CASE("coset representatives") {
  auto r = coset_representatives(2, 1);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == q(0));
  CHECK(r[1] == q(1, 2));
  auto r6 = coset_representatives(6, 2);
  REQUIRE(r6.size() == 3);
  CHECK(r6[2] == q(1, 3));
  CHECK_THROWS_AS(coset_representatives(6, 4), Error);
}

TEST_CASE("eventually in a segment") {
  auto conv = ValueSequence::closed_form(q(1), q(0), Rational(2));
  CHECK(*eventually_in(conv, Segment::min_closed(q(1, 1000))) == false);
  CHECK(*eventually_in(conv, Segment::min_closed(q(0))) == true);
  CHECK(*eventually_in(conv.negated(), Segment::min_closed(q(-1, 1000))) == true);
  CHECK(*eventually_in(ValueSequence::arithmetic(q(-1), q(50)), Segment::min_closed(q(0))) == false);
}

TEST_CASE("approximating terms") {
  auto conv = ValueSequence::closed_form(q(1), q(0), Rational(2));
  auto t = approximating_term(conv, q(1, 100));
  REQUIRE(t);
  CHECK(*t < q(1, 100));
  CHECK(*t > q(0));
}
