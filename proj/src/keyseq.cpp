#include "valkit/keyseq.hpp"

#include "valkit/errors.hpp"

namespace valkit {

FamilyTerm PlateauFamily::term(long n) const {
  if (n < first_index() || n > max_index())
    throw Error(ErrorCode::PreconditionViolated, kind() + " family has no term " + std::to_string(n) +
                                                     " (materialization range " + std::to_string(first_index()) +
                                                     ".." + std::to_string(max_index()) + ")");
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = memo_.find(n); it != memo_.end()) return it->second;
  FamilyTerm t = compute(n);
  memo_.emplace(n, t);
  return t;
}

// ------------------------------------------------------------ Artin-Schreier

ArtinSchreierFamily::ArtinSchreierFamily(unsigned long p, HahnElem a) : p_(p), a_(std::move(a)) {
  if (a_.prime() != p_) throw Error(ErrorCode::BackendMismatch, "a lives over another prime");
  if (a_.terms().empty() || a_.terms().begin()->first >= 0)
    throw Error(ErrorCode::NonNegativeValuation, "Artin-Schreier family needs v(a) < 0");
}

std::string ArtinSchreierFamily::describe() const {
  return "x - a_n, a_n = sum_{i<n} a^(1/" + std::to_string(p_) + "^i) - a, a = " + FieldElem(a_).to_string();
}

std::optional<ValueSequence> ArtinSchreierFamily::declared_nu_law() const {
  return ValueSequence::closed_form(GroupElem(a_.terms().begin()->first), GroupElem::zero(1), Rational(p_));
}

Poly ArtinSchreierFamily::minimal_polynomial() const {
  const FieldSpec k(Backend::Hahn, p_);
  return Poly::monomial(k, k.one(), p_) - Poly::x(k) - Poly::constant(k, a_);
}

FamilyTerm ArtinSchreierFamily::compute(long n) const {
  const FieldSpec k(Backend::Hahn, p_);
  FieldElem an = n == 0 ? -FieldElem(a_) : FieldElem(artin_schreier_partial_sum(p_, a_, static_cast<unsigned>(n - 1))) - FieldElem(a_);
  return FamilyTerm{Poly::linear(k, an), an, std::nullopt};
}

// -------------------------------------------------------------------- Hensel

namespace {

Integer integer_of(const FieldElem& x) {
  const Rational& q = std::get<PAdicRational>(x.repr()).value();
  if (q.get_den() != 1) throw Error(ErrorCode::PreconditionViolated, "expected an integer");
  return q.get_num();
}

}  // namespace

HenselFamily::HenselFamily(Poly g, long residue) : g_(std::move(g)), residue_(residue) {
  const FieldSpec& k = g_.spec();
  if (k.backend != Backend::PAdic || !g_.is_monic() || g_.degree() < 2)
    throw Error(ErrorCode::PreconditionViolated, "Hensel family needs a monic g of degree >= 2 over p-adic rationals");
  for (const auto& c : g_.coeffs())
    if (std::get<PAdicRational>(c.repr()).value().get_den() != 1)
      throw Error(ErrorCode::PreconditionViolated, "Hensel family needs integer coefficients");
  const FieldElem a0 = k.from_int(residue_);
  const Extended v = g_.evaluate(a0).valuation();
  if (v.is_infinite() || v.finite().sign() <= 0)
    throw Error(ErrorCode::PreconditionViolated, "residue must be a non-exact root of g mod p");
  if (g_.derivative().evaluate(a0).valuation() != Extended(GroupElem::zero(1)))
    throw Error(ErrorCode::PreconditionViolated, "residue root is not simple");
  e0_ = v.finite()[0].get_num().get_si();
}

std::string HenselFamily::describe() const {
  return "x - a_n, Newton iterates of " + g_.to_string() + " from a_0 = " + std::to_string(residue_);
}

std::optional<ValueSequence> HenselFamily::declared_nu_law() const {
  return ValueSequence::closed_form(GroupElem(Rational(e0_)), GroupElem::zero(1), Rational(1, 2));
}

FamilyTerm HenselFamily::compute(long n) const {
  const FieldSpec& k = g_.spec();
  Integer a;
  if (n == 0) {
    a = residue_;
  } else {
    const Integer prev = integer_of(*term(n - 1).approximant);
    const FieldElem ap = k.from_rational(Rational(prev));
    const Integer ga = integer_of(g_.evaluate(ap));
    const Integer gpa = integer_of(g_.derivative().evaluate(ap));
    const long e = padic_exponent(ga, k.p);
    Integer modulus;
    mpz_ui_pow_ui(modulus.get_mpz_t(), k.p, static_cast<unsigned long>(2 * e + 1));
    Integer inv;
    mpz_invert(inv.get_mpz_t(), gpa.get_mpz_t(), modulus.get_mpz_t());
    a = (prev - ga * inv) % modulus;
    if (a < 0) a += modulus;
  }
  const FieldElem an = k.from_rational(Rational(a));
  return FamilyTerm{Poly::linear(k, an), an, std::nullopt};
}

// ------------------------------------------------------------------ schedule

ScheduleFamily::ScheduleFamily(ValueSequence schedule) : schedule_(std::move(schedule)) {
  if (schedule_.rank() != 1) throw Error(ErrorCode::RankMismatch, "schedules are rank 1");
  const long last = std::min(max_index(), schedule_.first_index() + 63);
  for (long n = schedule_.first_index(); n < last; ++n)
    if (!(schedule_.at(n) < schedule_.at(n + 1)))
      throw Error(ErrorCode::ConfigError, "schedule values must be strictly increasing");
}

long ScheduleFamily::max_index() const {
  if (auto size = schedule_.size()) return schedule_.first_index() + static_cast<long>(*size) - 1;
  return schedule_.first_index() + 1000;
}

std::optional<ValueSequence> ScheduleFamily::declared_nu_law() const {
  if (schedule_.is_finite()) return std::nullopt;
  return schedule_;
}

FamilyTerm ScheduleFamily::compute(long n) const { return FamilyTerm{std::nullopt, std::nullopt, schedule_.at(n)}; }

// --------------------------------------------------------------- KeySequence

KeySequence::KeySequence(FieldSpec spec, std::vector<KeyStage> stages, Poly g, unsigned long p)
    : spec_(spec), stages_(std::move(stages)), g_(std::move(g)), p_(p) {
  if (!g_.is_monic()) throw Error(ErrorCode::NonMonicBase, "g must be monic");
  if (stages_.empty()) throw Error(ErrorCode::ConfigError, "a key sequence needs at least one stage before g");
  long prev = 0;
  for (std::size_t s = 0; s < stages_.size(); ++s) {
    if (const auto* e = std::get_if<ExplicitStage>(&stages_[s]); e && !e->Q.is_monic())
      throw Error(ErrorCode::NonMonicBase, "key polynomial " + e->Q.to_string() + " is not monic");
    if (const auto* pl = std::get_if<PlateauStage>(&stages_[s]); pl && !pl->family)
      throw Error(ErrorCode::ConfigError, "plateau stage without a family");
    const long d = stage_degree(s);
    if (d < prev) throw Error(ErrorCode::ConfigError, "stage degrees must be non-decreasing");
    prev = d;
  }
  if (!value_only() && g_.degree() < prev) throw Error(ErrorCode::ConfigError, "g has smaller degree than a key");
}

long KeySequence::stage_degree(std::size_t stage) const {
  if (const auto* e = std::get_if<ExplicitStage>(&stages_.at(stage))) return e->Q.degree();
  return std::get<PlateauStage>(stages_.at(stage)).degree;
}

bool KeySequence::is_plateau(std::size_t stage) const { return std::holds_alternative<PlateauStage>(stages_.at(stage)); }

const PlateauFamily& KeySequence::family(std::size_t stage) const {
  if (!is_plateau(stage)) throw Error(ErrorCode::PreconditionViolated, "stage is not a plateau");
  return *std::get<PlateauStage>(stages_[stage]).family;
}

bool KeySequence::value_only() const {
  for (std::size_t s = 0; s < stages_.size(); ++s)
    if (is_plateau(s) && family(s).value_only()) return true;
  return false;
}

Poly KeySequence::key_poly(const KeyIndex& i) const {
  if (const auto* e = std::get_if<ExplicitStage>(&stages_.at(i.stage))) return e->Q;
  FamilyTerm t = family(i.stage).term(i.n);
  if (!t.Q) throw Error(ErrorCode::PreconditionViolated, "value-only family has no polynomials");
  return *t.Q;
}

std::string KeySequence::label(const KeyIndex& i) const {
  if (const auto* e = std::get_if<ExplicitStage>(&stages_.at(i.stage))) return e->label;
  std::size_t plateau_count = 0;
  for (std::size_t s = 0; s < stages_.size(); ++s) plateau_count += is_plateau(s);
  if (plateau_count == 1) return std::to_string(i.n);
  return std::to_string(i.stage) + "." + std::to_string(i.n);
}

std::vector<KeyIndex> KeySequence::indices(std::size_t plateau_terms) const {
  std::vector<KeyIndex> out;
  for (std::size_t s = 0; s < stages_.size(); ++s) {
    if (!is_plateau(s)) {
      out.push_back({s, 0});
      continue;
    }
    const auto& fam = family(s);
    const long last = std::min(fam.max_index(), fam.first_index() + static_cast<long>(plateau_terms) - 1);
    for (long n = fam.first_index(); n <= last; ++n) out.push_back({s, n});
  }
  return out;
}

// ------------------------------------------------------------------ helpers

GroupElem key_value(const KeySequence& ks, const NuOracle* nu, const KeyIndex& i) {
  if (const auto* e = std::get_if<ExplicitStage>(&ks.stages()[i.stage]); e && e->nuQ) return *e->nuQ;
  if (ks.is_plateau(i.stage)) {
    FamilyTerm t = ks.family(i.stage).term(i.n);
    if (t.nuQ) return *t.nuQ;
  }
  if (!nu) throw Error(ErrorCode::PreconditionViolated, "value of Q needs an oracle");
  const Extended v = nu->nu(ks.key_poly(i));
  if (v.is_infinite()) throw Error(ErrorCode::InvariantViolation, "key polynomial with infinite value");
  return v.finite();
}

Extended key_derivative_value(const KeySequence& ks, const NuOracle* nu, const KeyIndex& i) {
  if (const auto* e = std::get_if<ExplicitStage>(&ks.stages()[i.stage]); e && e->nuQprime) return *e->nuQprime;
  if (ks.is_plateau(i.stage) && ks.family(i.stage).value_only()) return GroupElem::zero(1);  // (x - a_n)' = 1
  const Poly d = ks.key_poly(i).derivative();
  if (d.is_constant()) return d.is_zero() ? Extended::infinity() : d.lead().valuation();
  if (!nu) throw Error(ErrorCode::PreconditionViolated, "value of Q' needs an oracle");
  return nu->nu(d);
}

std::vector<NormalizedKey> normalize(const KeySequence& ks, const NuOracle& nu, std::size_t plateau_terms) {
  std::vector<NormalizedKey> out;
  for (const auto& i : ks.indices(plateau_terms)) {
    const Poly Q = ks.key_poly(i);
    const GroupElem value = key_value(ks, &nu, i);
    const FieldElem a = ks.spec().from_value(value);
    Poly Qt = Q.scaled(ks.spec().one() / a);
    out.push_back(NormalizedKey{i, Q, a, std::move(Qt)});
  }
  return out;
}

std::vector<CompletenessEntry> completeness_probe(const KeySequence& ks, const NuOracle& nu,
                                                  const std::vector<Poly>& fs, std::size_t budget) {
  std::vector<CompletenessEntry> out;
  const auto keys = ks.indices(budget);
  for (const auto& f : fs) {
    CompletenessEntry entry{f, nu.nu(f), std::nullopt, false, false};
    if (f.is_constant()) {
      // nu(c) = v(c): nothing to witness
      entry.found = true;
      out.push_back(std::move(entry));
      continue;
    }
    for (const auto& i : keys) {
      const Poly q = ks.key_poly(i);
      if (q.degree() > f.degree()) continue;
      if (nu_q(nu, f, q, key_value(ks, &nu, i)) == entry.nu_f) {
        entry.witness = i;
        entry.found = true;
        break;
      }
    }
    // g: nu_g(f) = nu(f mod g) = nu(f)
    if (!entry.found && ks.g().degree() <= f.degree()) {
      entry.witness_is_g = true;
      entry.found = true;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::map<long, bool> plateaus(const KeySequence& ks) {
  std::map<long, bool> out;
  for (std::size_t s = 0; s < ks.stages().size(); ++s) {
    const long d = ks.stage_degree(s);
    out[d] = !ks.is_plateau(s);
  }
  out[ks.g().degree()] = true;
  return out;
}

}  // namespace valkit
