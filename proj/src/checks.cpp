#include "valkit/checks.hpp"

#include <functional>
#include <memory>
#include <random>

#include "valkit/errors.hpp"
#include "valkit/expansion.hpp"
#include "valkit/kahler.hpp"
#include "valkit/scenario.hpp"

namespace valkit {

namespace {

using Rng = std::mt19937_64;

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
bool coin(Rng& rng, int percent = 50) { return uniform(rng, 1, 100) <= percent; }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(xs.size()) - 1))];
}

Rational frac(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

FieldElem random_scalar(Rng& rng, const FieldSpec& k) {
  const long p = static_cast<long>(k.p);
  switch (k.backend) {
    case Backend::PAdic: {
      const std::vector<long> dens = {1, 1, 3, p, p * p, 5};
      return k.from_rational(frac(uniform(rng, -24, 24), pick(rng, dens)));
    }
    case Backend::RatFun: {
      std::vector<unsigned long> num(static_cast<std::size_t>(uniform(rng, 1, 3)));
      for (auto& c : num) c = static_cast<unsigned long>(uniform(rng, 0, p - 1));
      num.back() = static_cast<unsigned long>(uniform(rng, 1, p - 1));
      FpPoly den = coin(rng, 70) ? FpPoly::monomial(1, static_cast<std::size_t>(uniform(rng, 0, 1)), k.p)
                                 : FpPoly({1, 1}, k.p);
      return FieldElem(RationalFunction(FpPoly(num, k.p), den));
    }
    case Backend::Hahn: {
      HahnElem::Terms terms;
      const long count = uniform(rng, 1, 3);
      for (long j = 0; j < count; ++j) {
        const long denom = pick(rng, std::vector<long>{1, p, p * p});
        terms[frac(uniform(rng, -4, 4), denom)] = static_cast<unsigned long>(uniform(rng, 1, p - 1));
      }
      return FieldElem(HahnElem(terms, k.p));
    }
  }
  return k.one();
}

Poly random_poly(Rng& rng, const FieldSpec& k, long degree) {
  std::vector<FieldElem> c;
  for (long j = 0; j <= degree; ++j) c.push_back(coin(rng, 80) || j == degree ? random_scalar(rng, k) : k.zero());
  return Poly(k, c);
}

Poly random_monic(Rng& rng, const FieldSpec& k, long degree) {
  std::vector<FieldElem> c;
  for (long j = 0; j < degree; ++j) c.push_back(coin(rng, 70) ? random_scalar(rng, k) : k.zero());
  c.push_back(k.one());
  return Poly(k, c);
}

// A scenario with the keys the suites probe.
struct World {
  std::string name;
  std::unique_ptr<Scenario> sc;
  std::vector<KeyIndex> keys;
  bool normalizable = true;  // every nu(Q_i) is a value of K

  const KeyContext& ctx() const { return *sc->ctx; }
  const FieldSpec& k() const { return sc->spec; }
  long max_degree() const { return sc->ks->g().degree() - 1; }
};

World make_world(std::string name, ScenarioConfig c, std::size_t plateau_terms, bool normalizable = true) {
  World w{std::move(name), build_scenario(c), {}, normalizable};
  w.keys = w.sc->ks->indices(plateau_terms);
  return w;
}

std::vector<World> worlds() {
  std::vector<World> out;
  for (unsigned long p : {2UL, 3UL}) {
    ScenarioConfig c = default_config("artin-schreier");
    c.p = p;
    out.push_back(make_world("artin-schreier p=" + std::to_string(p), c, 5));
  }
  out.push_back(make_world("hensel x^2+x+2", default_config("hensel-immediate"), 8));
  out.push_back(make_world("unramified x^2+x+1", default_config("unramified"), 1));
  out.push_back(make_world("degree 4 over Q_2", default_config("custom"), 1));
  for (unsigned long p : {3UL, 5UL}) {
    ScenarioConfig c = default_config("custom");
    c.backend = Backend::RatFun;
    c.p = p;
    c.g = {std::to_string(p - 1) + "*t^(1)", "0", "1"};
    c.stages = {{"x", {"0", "1"}}};
    out.push_back(make_world("x^2 - t over F_" + std::to_string(p) + "(t)", c, 1, false));
  }
  return out;
}

// f as a sum of c_j Q^j, so the Q-expansion is known in advance
Poly random_in_key(Rng& rng, const World& w, const KeyIndex& i, unsigned top) {
  const FieldSpec& k = w.k();
  const Poly& q = w.ctx().key(i);
  Poly f(k);
  for (unsigned j = 0; j <= top; ++j) {
    if (!coin(rng, 60) && j != top) continue;
    const Poly c = q.degree() > 1 ? random_poly(rng, k, uniform(rng, 0, q.degree() - 1))
                                  : Poly::constant(k, random_scalar(rng, k));
    f = f + c * q.pow(j);
  }
  return f;
}

Poly random_nonconstant(Rng& rng, const World& w) {
  for (;;) {
    Poly f = random_poly(rng, w.k(), uniform(rng, 1, std::max<long>(1, w.max_degree())));
    if (!f.is_constant()) return f;
  }
}

class Suite {
 public:
  explicit Suite(std::string name) { r_.name = std::move(name); }

  // body returns false for a skipped instance, throws or calls fail() otherwise
  void run(std::size_t want, std::size_t max_attempts, const std::function<bool()>& body) {
    for (std::size_t attempt = 0; r_.instances < want && attempt < max_attempts; ++attempt) {
      failed_ = false;
      bool counted = true;
      try {
        counted = body();
      } catch (const Error& e) {
        fail(std::string(to_string(e.code())) + ": " + e.what());
      }
      if (counted || failed_) ++r_.instances;
    }
    if (r_.instances < want) {
      ++r_.failures;
      r_.messages.push_back("only " + std::to_string(r_.instances) + " usable instances");
    }
  }

  void check(bool cond, const std::string& what) {
    if (!cond) fail(what);
  }

  SuiteResult result() const { return r_; }

 private:
  void fail(const std::string& what) {
    if (failed_) return;
    failed_ = true;
    ++r_.failures;
    if (r_.messages.size() < 5) r_.messages.push_back(what);
  }

  SuiteResult r_;
  bool failed_ = false;
};

std::string at(const World& w, const KeyIndex& i) { return w.name + " at " + w.sc->ks->label(i); }

// -------------------------------------------------------------------- suites

SuiteResult q_expansion_suite(Rng& rng, std::size_t n) {
  Suite s("q-expansion reconstruction");
  const std::vector<FieldSpec> fields = {FieldSpec(Backend::PAdic, 2), FieldSpec(Backend::PAdic, 3),
                                         FieldSpec(Backend::RatFun, 2), FieldSpec(Backend::RatFun, 5),
                                         FieldSpec(Backend::Hahn, 2), FieldSpec(Backend::Hahn, 3)};
  s.run(n, 2 * n, [&] {
    const FieldSpec& k = pick(rng, fields);
    const Poly f = random_poly(rng, k, uniform(rng, 0, 6));
    const Poly q = random_monic(rng, k, uniform(rng, 1, 3));
    const QExpansion qe = q_expand(f, q);
    s.check(qe.reconstruct() == f, "reconstruction of " + f.to_string() + " in " + q.to_string());
    for (const auto& c : qe.coeffs) s.check(c.degree() < q.degree(), "coefficient degree");
    return true;
  });
  return s.result();
}

SuiteResult truncation_laws_suite(Rng& rng, const std::vector<World>& ws, std::size_t n) {
  Suite s("nu_q ultrametric and product laws");
  s.run(n, 2 * n, [&] {
    const World& w = pick(rng, ws);
    const KeyIndex i = pick(rng, w.keys);
    const Poly f = random_poly(rng, w.k(), uniform(rng, 0, w.max_degree()));
    const Poly h = random_poly(rng, w.k(), uniform(rng, 0, w.max_degree()));
    const auto& ctx = w.ctx();
    const Extended vf = ctx.truncated(f, i), vh = ctx.truncated(h, i);
    s.check(ctx.truncated(f + h, i) >= std::min(vf, vh), "ultrametric " + at(w, i));
    s.check(ctx.truncated(f * h, i) == vf + vh, "product " + at(w, i));
    return true;
  });
  return s.result();
}

SuiteResult monotonicity_suite(Rng& rng, const std::vector<World>& ws, std::size_t n) {
  Suite s("nu_i monotone in i and bounded by nu");
  s.run(n, 2 * n, [&] {
    const World& w = pick(rng, ws);
    const Poly f = random_nonconstant(rng, w);
    const Extended full = w.sc->nu->nu(f);
    std::optional<Extended> prev;
    for (const auto& i : w.keys) {
      const Extended v = w.ctx().truncated(f, i);
      if (prev) s.check(*prev <= v, "decrease " + at(w, i) + " for " + f.to_string());
      s.check(v <= full, "above nu " + at(w, i));
      prev = v;
    }
    return true;
  });
  return s.result();
}

SuiteResult full_expansion_suite(Rng& rng, const std::vector<World>& ws, std::size_t n) {
  Suite s("full expansion reconstruction and min-value law");
  s.run(n, 2 * n, [&] {
    const World& w = pick(rng, ws);
    const KeyIndex i = pick(rng, w.keys);
    const auto& ctx = w.ctx();
    const Poly f = coin(rng) ? random_nonconstant(rng, w) : random_in_key(rng, w, i, static_cast<unsigned>(uniform(rng, 1, 3)));
    if (f.is_zero()) return false;
    const FullExpansion e = full_expansion(f, i, ctx);
    s.check(e.reconstruct(ctx) == f, "reconstruction " + at(w, i) + " for " + f.to_string());
    std::optional<GroupElem> low, low_normalized;
    for (std::size_t t = 0; t < e.terms.size(); ++t) {
      const GroupElem v = e.term_value(ctx, t);
      if (!low || v < *low) low = v;
      if (w.normalizable) {
        const GroupElem vn = e.normalized_coefficient(ctx, t).valuation().finite();
        s.check(vn == v, "normalized coefficient value " + at(w, i));
      }
      unsigned below = 0;
      for (const auto& [idx, exp] : e.terms[t].lambda)
        if (idx < i) below += exp * static_cast<unsigned>(ctx.key(idx).degree());
      s.check(below < static_cast<unsigned>(ctx.key(i).degree()), "degree remark " + at(w, i));
    }
    s.check(low && Extended(*low) == ctx.truncated(f, i), "min-value law " + at(w, i) + " for " + f.to_string());
    return true;
  });
  return s.result();
}

SuiteResult derivative_bound_suite(Rng& rng, const std::vector<World>& ws, std::size_t n) {
  Suite s("derivative drop bounded by min alpha over I_0");
  s.run(n, 4 * n, [&] {
    const World& w = pick(rng, ws);
    const KeyIndex i = pick(rng, w.keys);
    const auto& ctx = w.ctx();
    const Poly f = coin(rng) ? random_nonconstant(rng, w) : random_in_key(rng, w, i, static_cast<unsigned>(uniform(rng, 1, 4)));
    if (f.is_constant()) return false;
    const auto idx = i0_set(f, i, ctx);
    std::optional<Extended> gamma;
    KeyIndex arg{};
    for (const auto& l : idx)
      if (!gamma || ctx.alpha(l) < *gamma) {
        gamma = ctx.alpha(l);
        arg = l;
      }
    if (!gamma) return false;
    const Extended vf = ctx.truncated(f, i);
    const Poly fp = f.derivative();
    if (!fp.is_zero()) {
      const GroupElem drop = ctx.truncated(fp, i).finite() - vf.finite();
      s.check(Extended(drop) >= *gamma, "bound " + at(w, i) + " for " + f.to_string());
    }
    s.check(!(i < arg), "minimizing index after " + at(w, i));
    return true;
  });
  return s.result();
}

SuiteResult derivative_iff_suite(Rng& rng, const std::vector<World>& ws, std::size_t n) {
  Suite s("derivative drop iff and shift law under the hypothesis");
  s.run(n, 20 * n, [&] {
    const World& w = pick(rng, ws);
    const KeyIndex i = pick(rng, w.keys);
    const unsigned p = static_cast<unsigned>(w.sc->ks->residue_char());
    const Poly f = coin(rng, 70) ? random_in_key(rng, w, i, static_cast<unsigned>(uniform(rng, 1, p + 1)))
                                 : random_nonconstant(rng, w);
    if (f.is_zero()) return false;
    const DerivativeDrop d = derivative_drop(f, i, w.ctx());
    if (!d.hypothesis) return false;
    s.check(d.consistent(), "drop " + d.drop.to_string() + " alpha " + d.alpha_i.to_string() + " " + at(w, i) +
                                " for " + f.to_string());
    return true;
  });
  return s.result();
}

SuiteResult rewrite_suite(Rng& rng, const std::vector<World>& ws, std::size_t n) {
  Suite s("rewriting in normalized generators");
  std::vector<const World*> usable;
  for (const auto& w : ws)
    if (w.normalizable) usable.push_back(&w);
  s.run(n, 4 * n, [&] {
    const World& w = *pick(rng, usable);
    const auto& ctx = w.ctx();
    Poly f = random_poly(rng, w.k(), uniform(rng, 0, w.max_degree()));
    if (f.is_zero()) return false;
    const Extended v0 = ctx.nu().nu(f);
    if (v0.finite().sign() < 0) {
      // shift into O_L when the scale is a value of K
      const GroupElem shift = -v0.finite() + GroupElem(Rational(uniform(rng, 0, 2)));
      try {
        f = f.scaled(w.k().from_value(shift));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ValueNotRepresentable) throw;
        return false;
      }
    }
    const auto terms = rewrite_in_generators(f, ctx);
    Poly q(w.k()), diff(w.k());
    Poly::divmod(evaluate_rewrite(terms, ctx) - f, w.sc->ks->g(), q, diff);
    s.check(diff.is_zero(), "identity " + w.name + " for " + f.to_string());
    std::optional<Extended> low;
    for (const auto& t : terms) {
      const Extended va = t.a.valuation();
      s.check(va.finite().sign() >= 0, "coefficient outside O_K " + w.name);
      if (!low || va < *low) low = va;
    }
    s.check(low && *low == ctx.nu().nu(f), "min v(a_i) differs from nu(f) " + w.name + " for " + f.to_string());
    return true;
  });
  return s.result();
}

ValueSequence random_sequence(Rng& rng, std::size_t rank) {
  auto elem = [&](long lo, long hi) {
    std::vector<Rational> coords;
    for (std::size_t j = 0; j < rank; ++j) coords.push_back(frac(uniform(rng, lo, hi), uniform(rng, 1, 6)));
    return GroupElem(coords);
  };
  const long first = uniform(rng, 0, 2);
  switch (uniform(rng, 0, 3)) {
    case 0: {
      std::vector<GroupElem> xs;
      for (long j = uniform(rng, 1, 6); j > 0; --j) xs.push_back(elem(-9, 9));
      return ValueSequence::finite(xs, first);
    }
    case 1: return ValueSequence::closed_form(elem(-6, 6), elem(-6, 6), Rational(uniform(rng, 2, 5)), first);
    case 2: return ValueSequence::arithmetic(elem(-3, 3), elem(-6, 6), first);
    default: {
      std::vector<GroupElem> xs;
      for (long j = uniform(rng, 0, 3); j > 0; --j) xs.push_back(elem(-9, 9));
      return ValueSequence::stabilized(xs, elem(-6, 6), first);
    }
  }
}

SuiteResult final_segment_suite(Rng& rng, std::size_t n) {
  Suite s("final-segment law");
  s.run(n, 20 * n, [&] {
    const std::size_t rank = coin(rng, 75) ? 1 : 2;
    const Segment seg = segment_from(random_sequence(rng, rank));
    std::vector<Rational> g, up;
    for (std::size_t j = 0; j < rank; ++j) {
      g.push_back(frac(uniform(rng, -40, 40), uniform(rng, 1, 8)));
      up.push_back(frac(uniform(rng, j == 0 ? 0 : -10, 10), uniform(rng, 1, 8)));
    }
    const GroupElem gamma(g), delta(up);
    if (delta.sign() < 0) return false;
    const auto in = seg.contains(gamma);
    if (!in) return false;
    if (!*in) return false;
    const auto above = seg.contains(gamma + delta);
    s.check(above && *above, seg.describe() + " contains " + gamma.to_string() + " but not " +
                                 (gamma + delta).to_string());
    return true;
  });
  return s.result();
}

SuiteResult approximation_suite(Rng& rng, std::size_t n) {
  Suite s("approximating term below every element plus eps");
  s.run(n, 4 * n, [&] {
    const std::size_t rank = coin(rng, 70) ? 1 : 2;
    std::vector<Rational> c, d;
    for (std::size_t j = 0; j < rank; ++j) {
      c.push_back(frac(uniform(rng, j == 0 ? 1 : -5, 5), uniform(rng, 1, 4)));
      d.push_back(frac(uniform(rng, -6, 6), uniform(rng, 1, 4)));
    }
    const GroupElem cc(c);
    if (cc.sign() <= 0) return false;
    const ValueSequence gens = ValueSequence::closed_form(cc, GroupElem(d), Rational(uniform(rng, 2, 5)));
    const Segment lambda = segment_from(gens);
    if (lambda.has_minimum()) return false;
    const IsolatedSubgroup delta = largest_delta(lambda, rank);
    if (delta.is_whole()) return false;
    // eps > Delta: positive outside Delta
    std::vector<Rational> e(rank);
    const std::size_t lead = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(rank - delta.suffix_len) - 1));
    e[lead] = frac(1, pick(rng, std::vector<long>{1, 2, 7, 100}));
    for (std::size_t j = lead + 1; j < rank; ++j) e[j] = frac(uniform(rng, -5, 5), 3);
    const GroupElem eps(e);
    const auto l0 = approximating_term(gens, eps);
    s.check(l0.has_value(), "no term for " + gens.describe() + " eps " + eps.to_string());
    if (!l0) return true;
    bool is_term = false;
    for (long k = 0; k < 200 && !is_term; ++k) is_term = gens.at(k) == *l0;
    s.check(is_term, l0->to_string() + " is not a generator");
    const auto below = lambda.contains(*l0 - eps);
    s.check(below && !*below, "some element is within eps below " + l0->to_string() + " in " + lambda.describe());
    return true;
  });
  return s.result();
}

SuiteResult inclusion_suite(Rng& rng, const std::vector<World>& ws, std::size_t n) {
  Suite s("beta contained in alpha");
  std::vector<InvariantStream> fixed;
  for (const auto& w : ws) fixed.push_back(w.sc->stream());
  std::size_t next = 0;
  s.run(n, 2 * n, [&] {
    if (next < fixed.size()) {
      s.check(ideal_inclusion_check(fixed[next]), "inclusion fails for " + ws[next].name);
      ++next;
      return true;
    }
    ScenarioConfig c = default_config("kummer-schedule");
    c.p = static_cast<unsigned long>(pick(rng, std::vector<long>{2, 3, 5, 7}));
    c.vp = frac(uniform(rng, 1, 6), uniform(rng, 1, 3));
    c.terms = static_cast<std::size_t>(uniform(rng, 4, 10));
    ScheduleSpec sch;
    const Rational threshold = c.vp / static_cast<long>(c.p - 1);
    if (coin(rng, 80)) {
      sch.kind = "closed_form";
      sch.c = GroupElem(frac(-uniform(rng, 1, 9), uniform(rng, 1, 4)));
      sch.d = GroupElem(threshold - frac(uniform(rng, 0, 6), uniform(rng, 1, 5)));
      sch.base = static_cast<long>(c.p);
    } else {
      sch.kind = "list";
      // values at or below the threshold, as for any Kummer extension
      Rational v = threshold - frac(uniform(rng, 0, 12), 2);
      for (long j = uniform(rng, 2, 6); j > 0; --j) {
        sch.values.insert(sch.values.begin(), GroupElem(v));
        v -= frac(uniform(rng, 1, 5), 7);
      }
    }
    c.schedule = sch;
    const auto sc = build_scenario(c);
    const InvariantStream stream = sc->stream();
    s.check(ideal_inclusion_check(stream), "inclusion fails for schedule " + sc->ks->family(0).describe());
    return true;
  });
  return s.result();
}

}  // namespace

std::vector<SuiteResult> run_property_suites(std::uint64_t seed, std::size_t instances) {
  Rng rng(seed);
  const std::vector<World> ws = worlds();
  std::vector<SuiteResult> out;
  out.push_back(q_expansion_suite(rng, instances));
  out.push_back(truncation_laws_suite(rng, ws, instances));
  out.push_back(monotonicity_suite(rng, ws, instances));
  out.push_back(full_expansion_suite(rng, ws, instances));
  out.push_back(derivative_bound_suite(rng, ws, instances));
  out.push_back(derivative_iff_suite(rng, ws, instances));
  out.push_back(rewrite_suite(rng, ws, instances));
  out.push_back(final_segment_suite(rng, instances));
  out.push_back(approximation_suite(rng, instances));
  out.push_back(inclusion_suite(rng, ws, instances));
  return out;
}

}  // namespace valkit
