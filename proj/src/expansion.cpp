#include "valkit/expansion.hpp"

#include "valkit/errors.hpp"

namespace valkit {

namespace {

Extended minus(const Extended& a, const GroupElem& b) {
  if (a.is_infinite()) return a;
  return a.finite() - b;
}

}  // namespace

// ---------------------------------------------------------------- KeyContext

KeyContext::KeyContext(const KeySequence& ks, const NuOracle& nu, std::size_t budget)
    : ks_(ks), nu_(nu), budget_(budget) {}

const KeyContext::Entry& KeyContext::entry(const KeyIndex& i) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = memo_.find(i); it != memo_.end()) return it->second;
  }
  Poly Q = ks_.key_poly(i);
  GroupElem v = key_value(ks_, &nu_, i);
  Extended a = minus(key_derivative_value(ks_, &nu_, i), v);
  std::lock_guard<std::mutex> lock(mu_);
  return memo_.emplace(i, Entry{std::move(Q), std::move(v), std::move(a)}).first->second;
}

const Poly& KeyContext::key(const KeyIndex& i) const { return entry(i).Q; }
const GroupElem& KeyContext::value(const KeyIndex& i) const { return entry(i).value; }
Extended KeyContext::alpha(const KeyIndex& i) const { return entry(i).alpha; }

Extended KeyContext::truncated(const Poly& f, const KeyIndex& i) const { return nu_q(nu_, f, key(i), value(i)); }

std::vector<KeyIndex> KeyContext::before(const KeyIndex& i) const {
  std::vector<KeyIndex> out;
  for (std::size_t s = 0; s <= i.stage && s < ks_.stages().size(); ++s) {
    if (!ks_.is_plateau(s)) {
      if (s < i.stage) out.push_back({s, 0});
      continue;
    }
    const auto& fam = ks_.family(s);
    long last = std::min(fam.max_index(), fam.first_index() + static_cast<long>(budget_) - 1);
    if (s == i.stage) last = i.n - 1;
    for (long n = fam.first_index(); n <= last; ++n) out.push_back({s, n});
  }
  return out;
}

// ------------------------------------------------------------ full expansion

Poly FullExpansion::reconstruct(const KeyContext& ctx) const {
  const FieldSpec& k = ctx.ks().spec();
  Poly sum(k);
  for (const auto& t : terms) {
    Poly m = Poly::constant(k, t.b);
    for (const auto& [idx, e] : t.lambda) m = m * ctx.key(idx).pow(e);
    sum = sum + m;
  }
  return sum;
}

GroupElem FullExpansion::term_value(const KeyContext& ctx, std::size_t t) const {
  GroupElem v = terms.at(t).b.valuation().finite();
  for (const auto& [idx, e] : terms[t].lambda) v += ctx.value(idx).scaled(Rational(e));
  return v;
}

FieldElem FullExpansion::normalized_coefficient(const KeyContext& ctx, std::size_t t) const {
  FieldElem b = terms.at(t).b;
  for (const auto& [idx, e] : terms[t].lambda) b = b * ctx.ks().spec().from_value(ctx.value(idx)).pow(e);
  return b;
}

namespace {

void expand_into(const Poly& f, const KeyIndex& i, const KeyContext& ctx, const Exponents& outer,
                 std::vector<MonomialTerm>& out) {
  const QExpansion qe = q_expand(f, ctx.key(i));
  const std::vector<KeyIndex> earlier = ctx.before(i);
  for (std::size_t j = 0; j < qe.coeffs.size(); ++j) {
    const Poly& c = qe.coeffs[j];
    if (c.is_zero()) continue;
    Exponents lambda = outer;
    if (j > 0) lambda[i] += static_cast<unsigned>(j);
    if (c.is_constant()) {
      out.push_back(MonomialTerm{c.lead(), std::move(lambda)});
      continue;
    }
    const Extended target = ctx.nu().nu(c);
    std::optional<KeyIndex> witness;
    for (const auto& k : earlier) {
      if (ctx.key(k).degree() > c.degree()) break;
      if (ctx.truncated(c, k) == target) {
        witness = k;
        break;
      }
    }
    if (!witness)
      throw Error(ErrorCode::NoWitness, "no key before " + ctx.ks().label(i) + " attains nu(" + c.to_string() + ")");
    expand_into(c, *witness, ctx, lambda, out);
  }
}

}  // namespace

FullExpansion full_expansion(const Poly& f, const KeyIndex& i, const KeyContext& ctx) {
  FullExpansion e{i, {}};
  if (f.is_zero()) return e;
  expand_into(f, i, ctx, {}, e.terms);
  return e;
}

std::set<KeyIndex> i0_set(const FullExpansion& e) {
  std::set<KeyIndex> out;
  for (const auto& t : e.terms)
    for (const auto& [idx, exp] : t.lambda)
      if (exp != 0) out.insert(idx);
  return out;
}

std::set<KeyIndex> i0_set(const Poly& f, const KeyIndex& i, const KeyContext& ctx) {
  return i0_set(full_expansion(f, i, ctx));
}

// ---------------------------------------------------------------- rewriting

namespace {

void rewrite_into(const Poly& f, const KeyContext& ctx, const std::vector<KeyIndex>& keys, const Exponents& outer,
                  std::vector<RewriteTerm>& out) {
  if (f.is_zero()) return;
  if (f.is_constant()) {
    out.push_back(RewriteTerm{f.lead(), outer});
    return;
  }
  const Extended target = ctx.nu().nu(f);
  std::optional<KeyIndex> witness;
  for (const auto& k : keys) {
    if (ctx.key(k).degree() > f.degree()) break;
    if (ctx.truncated(f, k) == target) {
      witness = k;
      break;
    }
  }
  if (!witness) throw Error(ErrorCode::NoWitness, "no key attains nu(" + f.to_string() + ")");
  const FieldElem a = ctx.ks().spec().from_value(ctx.value(*witness));
  const QExpansion qe = q_expand(f, ctx.key(*witness));
  for (std::size_t j = 0; j < qe.coeffs.size(); ++j) {
    if (qe.coeffs[j].is_zero()) continue;
    Exponents lambda = outer;
    if (j > 0) lambda[*witness] += static_cast<unsigned>(j);
    rewrite_into(qe.coeffs[j].scaled(a.pow(static_cast<long>(j))), ctx, keys, lambda, out);
  }
}

}  // namespace

Poly evaluate_rewrite(const std::vector<RewriteTerm>& terms, const KeyContext& ctx) {
  const FieldSpec& k = ctx.ks().spec();
  Poly sum(k);
  for (const auto& t : terms) {
    Poly m = Poly::constant(k, t.a);
    for (const auto& [idx, e] : t.lambda) {
      const Poly qt = ctx.key(idx).scaled(k.one() / k.from_value(ctx.value(idx)));
      m = m * qt.pow(e);
    }
    sum = sum + m;
  }
  return sum;
}

std::vector<RewriteTerm> rewrite_in_generators(const Poly& f, const KeyContext& ctx) {
  Poly quot(f.spec()), f0(f.spec());
  Poly::divmod(f, ctx.ks().g(), quot, f0);
  const Extended v = ctx.nu().nu(f0);
  if (v.is_finite() && v.finite().sign() < 0)
    throw Error(ErrorCode::NegativeValueInput, "nu(f) = " + v.to_string() + " is negative");
  std::vector<RewriteTerm> out;
  rewrite_into(f0, ctx, ctx.ks().indices(ctx.budget()), {}, out);

  Poly q2(f.spec()), diff(f.spec());
  Poly::divmod(evaluate_rewrite(out, ctx) - f, ctx.ks().g(), q2, diff);
  if (!diff.is_zero()) throw Error(ErrorCode::InvariantViolation, "rewrite does not reproduce " + f.to_string());
  std::optional<Extended> low;
  for (const auto& t : out) {
    const Extended va = t.a.valuation();
    if (va.finite().sign() < 0) throw Error(ErrorCode::InvariantViolation, "rewrite coefficient outside O_K");
    if (!low || va < *low) low = va;
  }
  if (low && *low != v) throw Error(ErrorCode::InvariantViolation, "rewrite misses the value of " + f.to_string());
  return out;
}

// ------------------------------------------------------------ S_i and drops

std::set<unsigned> s_set(const Poly& f, const KeyIndex& i, const KeyContext& ctx) {
  std::set<unsigned> out;
  if (f.is_zero()) return out;
  const QExpansion qe = q_expand(f, ctx.key(i));
  const GroupElem& vq = ctx.value(i);
  std::optional<Extended> best;
  for (std::size_t j = 0; j < qe.coeffs.size(); ++j) {
    if (qe.coeffs[j].is_zero()) continue;
    const Extended tv = ctx.nu().nu(qe.coeffs[j]) + Extended(vq.scaled(Rational(static_cast<long>(j))));
    if (!best || tv < *best) {
      best = tv;
      out.clear();
    }
    if (tv == *best) out.insert(static_cast<unsigned>(j));
  }
  return out;
}

bool DerivativeDrop::consistent() const {
  if (!hypothesis) return true;
  if (p_not_divides_s != equals_alpha) return false;
  return !equals_alpha || s_fprime == shifted;
}

DerivativeDrop derivative_drop(const Poly& f, const KeyIndex& i, const KeyContext& ctx) {
  if (f.is_zero()) throw Error(ErrorCode::PreconditionViolated, "derivative drop of the zero polynomial");
  DerivativeDrop d;
  d.alpha_i = ctx.alpha(i);
  d.hypothesis = true;
  for (const auto& k : ctx.before(i))
    if (!(ctx.alpha(k) > d.alpha_i)) {
      d.hypothesis = false;
      break;
    }
  const Poly fp = f.derivative();
  const Extended vf = ctx.truncated(f, i);
  d.drop = fp.is_zero() ? Extended::infinity() : minus(ctx.truncated(fp, i), vf.finite());
  d.equals_alpha = d.drop == d.alpha_i;
  d.s_f = s_set(f, i, ctx);
  d.s_fprime = s_set(fp, i, ctx);
  const unsigned long p = ctx.ks().residue_char();
  for (unsigned l : d.s_f)
    if (l >= 1 && l % p != 0) {
      d.p_not_divides_s = true;
      d.shifted.insert(l - 1);
    }
  return d;
}

}  // namespace valkit
