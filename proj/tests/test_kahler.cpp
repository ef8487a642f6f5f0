#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "valkit/errors.hpp"
#include "valkit/kahler.hpp"

using namespace valkit;

namespace {

const FieldSpec Q2(Backend::PAdic, 2);

GroupElem r(const std::string& s) { return GroupElem::parse(s); }

nlohmann::json golden(const std::string& name) {
  std::ifstream in(std::string(VALKIT_SOURCE_DIR) + "/tests/golden/" + name);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

struct AsSetup {
  std::shared_ptr<ArtinSchreierFamily> fam;
  NuOracle nu;
  KeySequence ks;
  KeyContext ctx;

  explicit AsSetup(unsigned long p, std::shared_ptr<const PlateauFamily> stage = nullptr)
      : fam(std::make_shared<ArtinSchreierFamily>(p, std::get<HahnElem>(FieldSpec(Backend::Hahn, p).parse("t^(-1)").repr()))),
        nu(NuOracle::stabilization(fam->minimal_polynomial(), [f = fam](long m) { return *f->term(m).approximant; }, 0)),
        ks(FieldSpec(Backend::Hahn, p), {PlateauStage{1, stage ? stage : fam}}, fam->minimal_polynomial(), p),
        ctx(ks, nu) {}
};

// Same terms as the wrapped family, but a wrong declared law.
class MisdeclaredFamily : public PlateauFamily {
 public:
  explicit MisdeclaredFamily(std::shared_ptr<ArtinSchreierFamily> inner) : inner_(std::move(inner)) {}
  std::string kind() const override { return "misdeclared"; }
  std::string describe() const override { return "misdeclared"; }
  long max_index() const override { return inner_->max_index(); }
  std::optional<ValueSequence> declared_nu_law() const override {
    return ValueSequence::closed_form(r("-1"), r("0"), Rational(3));
  }

 protected:
  FamilyTerm compute(long n) const override { return inner_->term(n); }

 private:
  std::shared_ptr<ArtinSchreierFamily> inner_;
};

KeySequence kummer(unsigned long p, const GroupElem& c) {
  auto fam = std::make_shared<ScheduleFamily>(ValueSequence::closed_form(r("-1"), c, Rational(static_cast<long>(p))));
  return KeySequence(FieldSpec(Backend::PAdic, p), {PlateauStage{1, fam}}, Poly::x(FieldSpec(Backend::PAdic, p)), p);
}

}  // namespace

TEST_CASE("law fitting") {
  std::vector<GroupElem> halves, lin, stab, junk;
  for (long n = 0; n < 12; ++n) {
    halves.push_back(GroupElem(pow(Rational(2), -n) * 3 + Rational(1, 3)));
    lin.push_back(GroupElem(Rational(5 * n - 2)));
    stab.push_back(GroupElem(Rational(n < 2 ? n - 7 : 4)));
    junk.push_back(GroupElem(Rational(n * n * n)));
  }
  const auto h = fit_law(halves, 0);
  REQUIRE(h);
  const auto& cf = std::get<ValueSequence::ClosedForm>(h->kind());
  CHECK(cf.c == r("3"));
  CHECK(cf.d == r("1/3"));
  CHECK(cf.base == 2);
  CHECK(h->at(40) == GroupElem(pow(Rational(2), -40) * 3 + Rational(1, 3)));

  const auto l = fit_law(lin, 3);
  REQUIRE(l);
  CHECK(std::holds_alternative<ValueSequence::Arithmetic>(l->kind()));
  CHECK(l->at(100) == r("483"));

  const auto s = fit_law(stab, 0);
  REQUIRE(s);
  const auto& st = std::get<ValueSequence::Stabilized>(s->kind());
  CHECK(st.prefix.size() == 2);
  CHECK(st.tail == r("4"));

  CHECK(!fit_law(junk, 0));
  CHECK(!fit_law(std::vector<GroupElem>(halves.begin(), halves.begin() + 7), 0));
}

TEST_CASE("Artin-Schreier stream against the golden oracle") {
  const auto data = golden("artin_schreier_oracle.json");
  for (unsigned long p : {2UL, 3UL}) {
    AsSetup s(p);
    const auto stream = invariant_stream(s.ctx);
    const auto rows = data[p == 2 ? "p2" : "p3"];
    const auto table = stream.table();
    REQUIRE(table.size() == 9);
    for (std::size_t n = 0; n < table.size(); ++n) {
      const auto& row = rows[n];
      CHECK(table[n].index.n == row["n"].get<long>());
      CHECK(table[n].nuQ == r(row["nu_Q"]));
      CHECK(table[n].alpha == r(row["alpha"]));
      CHECK(table[n].beta == r(row["beta"]));
      CHECK(table[n].beta_tilde == r(row["beta_tilde"]));
      CHECK(table[n].nu_g == r(row["nu_g"]));
      CHECK(table[n].nu_gprime == r(row["nu_gprime"]));
    }
    const auto ab = alpha_beta_segments(stream);
    CHECK(segment_compare(ab.alpha, ab.beta) == SegmentOrder::Equal);
    CHECK(ab.alpha.describe() == "{g > 0}");
    CHECK(ideal_inclusion_check(stream));
    CHECK(omega_verdict(stream).outcome == Outcome::OmegaZero);

    const auto c = classify(stream, &s.ctx);
    CHECK(c.case_name == "ii");
    CHECK(c.verdict.outcome == Outcome::OmegaZero);
    REQUIRE(c.delta);
    CHECK(c.delta->is_trivial());
    CHECK(c.wlim_branch == 2);
    REQUIRE(c.plateau);
    CHECK(c.plateau->degree == 1);
    CHECK(c.plateau->unique);

    const auto b = b1_criterion(stream);
    CHECK(b.one_in_b1);
    CHECK(b.members == std::set<unsigned>{1});
  }
}

TEST_CASE("a wrong declared law is reported") {
  auto inner = std::make_shared<ArtinSchreierFamily>(2, std::get<HahnElem>(FieldSpec(Backend::Hahn, 2).parse("t^(-1)").repr()));
  AsSetup s(2, std::make_shared<MisdeclaredFamily>(inner));
  try {
    (void)invariant_stream(s.ctx);
    FAIL("expected LawMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LawMismatch);
  }
}

TEST_CASE("unramified example: case (i)") {
  const Poly g = Poly::parse(Q2, {"1", "1", "1"});
  const NuOracle nu = norm_model(g);
  KeySequence ks(Q2, {ExplicitStage{"1", Poly::x(Q2), std::nullopt, std::nullopt}}, g, 2);
  KeyContext ctx(ks, nu);
  const auto stream = invariant_stream(ctx);
  const auto table = stream.table();
  REQUIRE(table.size() == 1);
  const auto& rec = table[0];
  CHECK(rec.alpha == r("0"));
  CHECK(rec.beta == r("0"));
  CHECK(rec.beta_tilde == r("0"));
  const auto ab = alpha_beta_segments(stream);
  CHECK(ab.alpha.has_minimum());
  CHECK(omega_verdict(stream).outcome == Outcome::OmegaZero);
  const auto c = classify(stream, &ctx);
  CHECK(c.case_name == "i");
  CHECK(c.verdict.outcome == Outcome::OmegaZero);
  CHECK(c.has_max);
  CHECK(c.beta_tilde_bound);
  CHECK(c.min_attained);
  CHECK(*c.min_alpha == r("0"));
  CHECK(c.ell == KeyIndex{0, 0});
  CHECK_THROWS_AS(b1_criterion(stream), Error);
  CHECK_THROWS_AS(first_minimizing_plateau(stream), Error);
}

TEST_CASE("immediate Hensel example: case (ii) with the whole group") {
  const Poly g = Poly::parse(Q2, {"2", "1", "1"});
  auto fam = std::make_shared<HenselFamily>(g, 0);
  const NuOracle nu = quadratic_root_model(g, 0);
  KeySequence ks(Q2, {PlateauStage{1, fam}}, g, 2);
  KeyContext ctx(ks, nu);
  const auto stream = invariant_stream(ctx);
  const auto data = golden("hensel_oracle.json");
  const auto table = stream.table();
  for (std::size_t n = 0; n < table.size(); ++n) {
    CHECK(table[n].nuQ == r(data["rows"][n]["nu_Q"]));
    CHECK(table[n].beta == r(data["rows"][n]["beta"]));
    CHECK(table[n].beta_tilde == r(data["rows"][n]["beta_tilde"]));
  }
  const auto ab = alpha_beta_segments(stream);
  CHECK(ab.alpha.kind() == Segment::Kind::WholeGroup);
  CHECK(ab.beta.kind() == Segment::Kind::WholeGroup);
  CHECK(ideal_inclusion_check(stream));
  CHECK(omega_verdict(stream).outcome == Outcome::OmegaZero);
  const auto c = classify(stream, &ctx);
  CHECK(c.case_name == "ii");
  CHECK(c.verdict.outcome == Outcome::OmegaZero);
  CHECK(c.delta->is_whole());
  CHECK(c.wlim_branch == 2);
  CHECK(b1_criterion(stream).one_in_b1);
}

TEST_CASE("Kummer schedules around the threshold") {
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    const GroupElem threshold(Rational(1, static_cast<long>(p) - 1));
    for (const GroupElem& c : {threshold, threshold - r("1/7"), r("-1/2")}) {
      const bool at = c == threshold;
      const auto ks = kummer(p, c);
      const auto stream = invariant_stream(ks);
      CHECK(ideal_inclusion_check(stream));
      const auto v = omega_verdict(stream);
      CHECK(v.outcome == (at ? Outcome::OmegaZero : Outcome::OmegaNonzero));
      const auto cl = classify(stream, nullptr);
      CHECK(cl.case_name == "ii");
      CHECK(cl.verdict.outcome == v.outcome);
      CHECK(b1_criterion(stream).one_in_b1 == at);
    }
  }
}

TEST_CASE("epsilon") {
  CHECK(epsilon_check({{"a", r("1/2")}, {"b", r("3")}}) == r("3"));
  CHECK_THROWS_AS(epsilon_check({}), Error);
}
