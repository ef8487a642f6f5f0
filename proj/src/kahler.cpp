#include "valkit/kahler.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "valkit/errors.hpp"

namespace valkit {

namespace {

GroupElem finite(const Extended& x, const std::string& what) {
  if (x.is_infinite()) throw Error(ErrorCode::InvariantViolation, what + " is infinite");
  return x.finite();
}

std::size_t prefix_length(const ValueSequence& seq) {
  return std::visit(
      [](const auto& f) -> std::size_t {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ValueSequence::ClosedForm> || std::is_same_v<T, ValueSequence::Arithmetic> ||
                      std::is_same_v<T, ValueSequence::Stabilized>)
          return f.prefix.size();
        else
          return 0;
      },
      seq.kind());
}

// Terms past the materialized range are unknown.
ValueSequence materialized_only(std::vector<GroupElem> terms, long first, const std::string& field) {
  const std::size_t rank = terms.front().rank();
  auto shared = std::make_shared<const std::vector<GroupElem>>(std::move(terms));
  auto term = [shared, first, field](long n) -> GroupElem {
    const long k = n - first;
    if (k < 0 || k >= static_cast<long>(shared->size()))
      throw Error(ErrorCode::Inconclusive, field + ": no law recognized and term " + std::to_string(n) +
                                               " was not materialized");
    return (*shared)[static_cast<std::size_t>(k)];
  };
  return ValueSequence::probed(term, rank, field + " (materialized terms only)", first);
}

// Runs body(k) for k < count on up to `threads` workers; the first failure
// by position is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        body(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(count));
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::size_t materialized_count(const PlateauFamily& fam, const StreamOptions& opts) {
  const std::size_t want = std::max(opts.terms + 1, kMinMaterialized);
  const auto avail = static_cast<std::size_t>(fam.max_index() - fam.first_index() + 1);
  return std::min(want, avail);
}

// Attaches laws to the materialized records of one stage.
void attach_laws(StageInvariants& st, const std::optional<ValueSequence>& declared_nuQ) {
  const long first = st.records.front().index.n;
  if (!st.plateau) {
    const auto& r = st.records.front();
    st.nuQ = ValueSequence::finite({r.nuQ}, first);
    st.alpha = ValueSequence::finite({r.alpha}, first);
    st.beta = ValueSequence::finite({r.beta}, first);
    st.beta_tilde = ValueSequence::finite({r.beta_tilde}, first);
    st.nu_g = ValueSequence::finite({r.nu_g}, first);
    st.nu_gprime = ValueSequence::finite({r.nu_gprime}, first);
    st.regime_start = first;
    return;
  }

  auto column = [&st](GroupElem InvariantRecord::*field) {
    std::vector<GroupElem> out;
    for (const auto& r : st.records) out.push_back(r.*field);
    return out;
  };
  long regime = first;
  auto fit = [&](const std::string& name, GroupElem InvariantRecord::*field, ValueSequence& target) {
    const auto terms = column(field);
    LawStatus status{name, std::nullopt, first, terms.size(), false};
    if (auto law = fit_law(terms, first)) {
      status.regime_start = first + static_cast<long>(prefix_length(*law));
      regime = std::max(regime, status.regime_start);
      target = *law;
      status.law = std::move(law);
    } else {
      status.verified_terms = 0;
      target = materialized_only(terms, first, name);
    }
    st.laws.push_back(std::move(status));
  };

  if (declared_nuQ) {
    for (const auto& r : st.records)
      if (declared_nuQ->at(r.index.n) != r.nuQ)
        throw Error(ErrorCode::LawMismatch, "declared law " + declared_nuQ->describe() + " gives " +
                                                declared_nuQ->at(r.index.n).to_string() + " at n=" +
                                                std::to_string(r.index.n) + " but nu(Q_n) = " + r.nuQ.to_string());
    st.nuQ = *declared_nuQ;
    st.laws.push_back(LawStatus{"nu_Q", declared_nuQ, first + static_cast<long>(prefix_length(*declared_nuQ)),
                                st.records.size(), true});
  } else {
    fit("nu_Q", &InvariantRecord::nuQ, st.nuQ);
  }
  fit("alpha", &InvariantRecord::alpha, st.alpha);
  fit("beta", &InvariantRecord::beta, st.beta);
  fit("beta_tilde", &InvariantRecord::beta_tilde, st.beta_tilde);
  fit("nu_g", &InvariantRecord::nu_g, st.nu_g);
  fit("nu_gprime", &InvariantRecord::nu_gprime, st.nu_gprime);
  st.regime_start = regime;
}

BTerm b_term_from(unsigned b, const std::vector<std::optional<GroupElem>>& values, long first) {
  BTerm out{b, false, std::nullopt};
  std::vector<GroupElem> finite_values;
  for (const auto& v : values)
    if (v) finite_values.push_back(*v);
  if (finite_values.empty()) {
    out.infinite = true;
    return out;
  }
  if (finite_values.size() != values.size()) {
    out.values = ValueSequence::probed(
        [](long) -> GroupElem { throw Error(ErrorCode::Inconclusive, "coefficient vanishes on some terms only"); },
        finite_values.front().rank(), "partially vanishing coefficient", first);
    return out;
  }
  if (auto law = fit_law(finite_values, first)) out.values = std::move(law);
  else out.values = materialized_only(finite_values, first, "b=" + std::to_string(b));
  return out;
}

std::size_t stream_rank(const InvariantStream& s) {
  for (const auto& st : s.stages)
    if (!st.records.empty()) return st.records.front().alpha.rank();
  return 1;
}

}  // namespace

// -------------------------------------------------------------------- laws

std::optional<ValueSequence> fit_law(const std::vector<GroupElem>& terms, long first) {
  const std::size_t m = terms.size();
  for (std::size_t k = 0; k + 8 <= m; ++k) {
    const GroupElem d1 = terms[k + 1] - terms[k];
    const GroupElem d2 = terms[k + 2] - terms[k + 1];
    const GroupElem d3 = terms[k + 3] - terms[k + 2];
    const std::vector<GroupElem> prefix(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(k));
    const long n0 = first + static_cast<long>(k);
    std::optional<ValueSequence> law;
    if (d1.is_zero() && d2.is_zero() && d3.is_zero()) {
      law = ValueSequence::stabilized(prefix, terms[k], first);
    } else if (!d1.is_zero()) {
      const std::size_t j = *d1.lead();
      const Rational r = d2[j] / d1[j];
      if (r <= 0 || d2 != d1.scaled(r) || d3 != d2.scaled(r)) continue;
      if (r == 1) {
        law = ValueSequence::arithmetic(d1, terms[k] - d1.scaled(Rational(n0)), first, prefix);
      } else {
        const Rational base = 1 / r;
        const GroupElem c = d1.scaled(1 / (pow(r, n0) * (r - 1)));
        const GroupElem d = terms[k] - d1.scaled(1 / (r - 1));
        law = ValueSequence::closed_form(c, d, base, first, prefix);
      }
    } else {
      continue;
    }
    bool ok = true;
    for (std::size_t t = k; t < m && ok; ++t) ok = law->at(first + static_cast<long>(t)) == terms[t];
    if (ok) return law;
  }
  return std::nullopt;
}

// ------------------------------------------------------------------ streams

std::vector<InvariantRecord> InvariantStream::table() const {
  std::vector<InvariantRecord> out;
  for (const auto& st : stages) {
    const std::size_t rows = st.plateau ? std::min(st.records.size(), table_terms + 1) : st.records.size();
    out.insert(out.end(), st.records.begin(), st.records.begin() + static_cast<std::ptrdiff_t>(rows));
  }
  return out;
}

InvariantStream invariant_stream(const KeyContext& ctx, const StreamOptions& opts) {
  const KeySequence& ks = ctx.ks();
  if (ks.value_only()) return invariant_stream(ks, opts);
  const Poly& g = ks.g();
  const Poly gp = g.derivative();

  InvariantStream out;
  out.nu_gprime = finite(ctx.nu().nu(gp), "nu(g')");
  out.table_terms = opts.terms;
  out.residue_char = ks.residue_char();
  out.g_degree = g.degree();

  std::vector<KeyIndex> all;
  for (std::size_t s = 0; s < ks.stages().size(); ++s) {
    StageInvariants st;
    st.stage = s;
    st.degree = ks.stage_degree(s);
    st.plateau = ks.is_plateau(s);
    if (!st.plateau) {
      all.push_back({s, 0});
    } else {
      const auto& fam = ks.family(s);
      const std::size_t m = materialized_count(fam, opts);
      for (std::size_t k = 0; k < m; ++k) all.push_back({s, fam.first_index() + static_cast<long>(k)});
    }
    out.stages.push_back(std::move(st));
  }

  std::vector<InvariantRecord> records(all.size());
  parallel_for(all.size(), opts.threads, [&](std::size_t k) {
    const KeyIndex& i = all[k];
    InvariantRecord r;
    r.index = i;
    r.label = ks.label(i);
    r.nuQ = ctx.value(i);
    r.nuQprime = finite(key_derivative_value(ks, &ctx.nu(), i), "nu(Q'_" + r.label + ")");
    r.alpha = r.nuQprime - r.nuQ;
    r.nu_g = finite(ctx.truncated(g, i), "nu_" + r.label + "(g)");
    r.nu_gprime = finite(ctx.truncated(gp, i), "nu_" + r.label + "(g')");
    r.beta = out.nu_gprime - r.nu_g;
    r.beta_tilde = r.nu_gprime - r.nu_g;
    records[k] = std::move(r);
  });
  for (auto& r : records) out.stages[r.index.stage].records.push_back(std::move(r));

  for (auto& st : out.stages) {
    std::optional<ValueSequence> declared;
    if (st.plateau) declared = ks.family(st.stage).declared_nu_law();
    attach_laws(st, declared);
  }

  // Q^b coefficient terms of g along a final degree-1 plateau
  auto& last = out.stages.back();
  if (last.plateau && last.degree == 1) {
    std::vector<std::vector<std::optional<GroupElem>>> values(static_cast<std::size_t>(std::max(0L, g.degree() - 1)));
    for (const auto& r : last.records) {
      const QExpansion qe = q_expand(g, ctx.key(r.index));
      for (std::size_t b = 1; b < static_cast<std::size_t>(g.degree()); ++b) {
        const Poly& c = qe.coeffs.at(b);
        if (c.is_zero()) values[b - 1].push_back(std::nullopt);
        else values[b - 1].push_back(c.lead().valuation().finite() + r.nuQ.scaled(Rational(static_cast<long>(b))));
      }
    }
    for (std::size_t b = 1; b <= values.size(); ++b)
      last.b_terms.push_back(b_term_from(static_cast<unsigned>(b), values[b - 1], last.records.front().index.n));
  }
  out.rank = stream_rank(out);
  return out;
}

InvariantStream invariant_stream(const KeySequence& ks, const StreamOptions& opts) {
  if (ks.stages().size() != 1 || !ks.is_plateau(0) || !ks.family(0).value_only())
    throw Error(ErrorCode::ConfigError, "value-only key sequences consist of a single schedule plateau");
  const auto& fam = ks.family(0);
  const unsigned long p = ks.residue_char();
  const Rational pr(static_cast<long>(p));
  const GroupElem& vp = opts.vp;
  const GroupElem zero = GroupElem::zero(vp.rank());

  InvariantStream out;
  out.nu_gprime = vp;
  out.table_terms = opts.terms;
  out.residue_char = p;
  out.g_degree = static_cast<long>(p);

  StageInvariants st;
  st.stage = 0;
  st.degree = 1;
  st.plateau = true;
  const std::size_t m = materialized_count(fam, opts);
  std::vector<std::vector<std::optional<GroupElem>>> bvalues(p - 1);
  for (std::size_t k = 0; k < m; ++k) {
    const KeyIndex i{0, fam.first_index() + static_cast<long>(k)};
    const GroupElem s = key_value(ks, nullptr, i);
    InvariantRecord r;
    r.index = i;
    r.label = ks.label(i);
    r.nuQ = s;
    r.nuQprime = zero;
    r.alpha = -s;
    r.nu_g = s.scaled(pr);
    r.nu_gprime = vp + std::min(zero, s).scaled(pr - 1);
    r.beta = vp - r.nu_g;
    r.beta_tilde = r.nu_gprime - r.nu_g;
    // C(p, b) has p-adic value 1 for 0 < b < p
    for (unsigned long b = 1; b < p; ++b) bvalues[b - 1].push_back(vp + s.scaled(Rational(static_cast<long>(b))));
    st.records.push_back(std::move(r));
  }
  attach_laws(st, fam.declared_nu_law());
  for (unsigned long b = 1; b < p; ++b)
    st.b_terms.push_back(b_term_from(static_cast<unsigned>(b), bvalues[b - 1], fam.first_index()));
  out.stages.push_back(std::move(st));
  out.rank = stream_rank(out);
  return out;
}

// ----------------------------------------------------------------- segments

Segment stage_alpha_segment(const StageInvariants& s) { return segment_from(s.alpha); }

AlphaBeta alpha_beta_segments(const InvariantStream& s) {
  if (s.stages.empty()) throw Error(ErrorCode::EmptySequence, "empty invariant stream");
  Segment a = segment_from(s.stages.front().alpha);
  Segment b = segment_from(s.stages.front().beta);
  for (std::size_t k = 1; k < s.stages.size(); ++k) {
    a = segment_union(a, segment_from(s.stages[k].alpha));
    b = segment_union(b, segment_from(s.stages[k].beta));
  }
  return {a, b};
}

bool ideal_inclusion_check(const InvariantStream& s) {
  std::optional<GroupElem> low;
  for (const auto& st : s.stages)
    for (const auto& r : st.records) {
      if (!low || r.alpha < *low) low = r.alpha;
      if (r.beta < r.beta_tilde || r.beta_tilde < *low) return false;
    }
  try {
    const auto ab = alpha_beta_segments(s);
    const auto order = segment_compare(ab.alpha, ab.beta);
    return order == SegmentOrder::Equal || order == SegmentOrder::AContainsB || order == SegmentOrder::Inconclusive;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Inconclusive) return true;
    throw;
  }
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::OmegaZero: return "OmegaZero";
    case Outcome::OmegaNonzero: return "OmegaNonzero";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Verdict omega_verdict(const InvariantStream& s) {
  try {
    const auto ab = alpha_beta_segments(s);
    switch (segment_compare(ab.alpha, ab.beta)) {
      case SegmentOrder::Equal:
        return {Outcome::OmegaZero, "alpha = beta = " + ab.alpha.describe()};
      case SegmentOrder::AContainsB:
        return {Outcome::OmegaNonzero, "beta = " + ab.beta.describe() + " is strictly inside alpha = " + ab.alpha.describe()};
      case SegmentOrder::BContainsA:
        return {Outcome::OmegaNonzero, "alpha = " + ab.alpha.describe() + " is strictly inside beta = " + ab.beta.describe()};
      default:
        return {Outcome::Inconclusive, "alpha = " + ab.alpha.describe() + ", beta = " + ab.beta.describe()};
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Inconclusive) throw;
    return {Outcome::Inconclusive, e.what()};
  }
}

// ----------------------------------------------------------- classification

namespace {

bool strictly_decreasing_law(const ValueSequence& seq) {
  if (const auto* cf = std::get_if<ValueSequence::ClosedForm>(&seq.kind()))
    return cf->base > 1 ? cf->c.sign() > 0 : cf->c.sign() < 0;
  if (const auto* ar = std::get_if<ValueSequence::Arithmetic>(&seq.kind())) return ar->c.sign() < 0;
  return false;
}

SegmentOrder compare_or_throw(const Segment& a, const Segment& b) {
  const auto order = segment_compare(a, b);
  if (order == SegmentOrder::Inconclusive)
    throw Error(ErrorCode::Inconclusive, "cannot compare " + a.describe() + " with " + b.describe());
  return order;
}

}  // namespace

MinimizingPlateau first_minimizing_plateau(const InvariantStream& s) {
  const auto ab = alpha_beta_segments(s);
  if (ab.alpha.has_minimum()) throw Error(ErrorCode::PreconditionViolated, "alpha has a minimal element");
  std::optional<MinimizingPlateau> found;
  for (const auto& st : s.stages) {
    if (!st.plateau) continue;
    if (compare_or_throw(stage_alpha_segment(st), ab.alpha) != SegmentOrder::Equal) continue;
    if (found) {
      found->unique = false;
      continue;
    }
    found = MinimizingPlateau{st.stage, st.degree, true, {}};
  }
  if (!found) throw Error(ErrorCode::PreconditionViolated, "no plateau generates alpha");

  const auto& st = s.stages[found->stage];
  if (!strictly_decreasing_law(st.alpha))
    throw Error(ErrorCode::InvariantViolation, "alpha is not eventually decreasing along the first minimizing plateau");
  std::optional<GroupElem> earlier_min;
  for (const auto& other : s.stages) {
    if (other.stage >= st.stage) break;
    for (const auto& r : other.records)
      if (!earlier_min || r.alpha < *earlier_min) earlier_min = r.alpha;
  }
  // smallest i in the law regime below every earlier alpha; the law keeps decreasing from there
  for (std::size_t k = 0; k < st.records.size(); ++k) {
    const auto& r = st.records[k];
    if (r.index.n >= st.regime_start && (!earlier_min || r.alpha < *earlier_min)) {
      bool decreasing = true;
      for (std::size_t t = k + 1; t < st.records.size() && decreasing; ++t)
        decreasing = st.records[t].alpha < st.records[t - 1].alpha;
      if (decreasing) {
        found->certificate = r.index;
        return *found;
      }
    }
    if (!earlier_min || r.alpha < *earlier_min) earlier_min = r.alpha;
  }
  throw Error(ErrorCode::Inconclusive, "no certificate index among the materialized terms");
}

Classification classify(const InvariantStream& s, const KeyContext* ctx) {
  Classification c;
  try {
    const auto ab = alpha_beta_segments(s);
    if (ab.alpha.has_minimum()) {
      c.case_name = "i";
      c.min_alpha = ab.alpha.minimum();
      const auto& last = s.stages.back();
      c.has_max = !last.plateau;
      if (!c.has_max) {
        c.verdict = {Outcome::OmegaNonzero, "alpha has a minimum but I* has no maximal element"};
        return c;
      }
      const InvariantRecord& ri = last.records.back();
      c.i = ri.index;
      const auto order = compare_or_throw(Segment::min_closed(ri.beta_tilde), ab.beta);
      c.beta_tilde_bound = order == SegmentOrder::Equal || order == SegmentOrder::AContainsB;
      if (!ctx) {
        c.verdict = {Outcome::Inconclusive, "I_0(g, i) needs key polynomials"};
        return c;
      }
      for (const auto& ell : i0_set(ctx->ks().g(), ri.index, *ctx)) {
        const GroupElem a = finite(ctx->alpha(ell), "alpha");
        if (a == ri.beta_tilde && a == *c.min_alpha) {
          c.ell = ell;
          c.min_attained = true;
          break;
        }
      }
      if (c.beta_tilde_bound && c.min_attained)
        c.verdict = {Outcome::OmegaZero, "min alpha = alpha_" + ctx->ks().label(*c.ell) + " = beta~_" +
                                             ctx->ks().label(*c.i) + " = " + c.min_alpha->to_string()};
      else
        c.verdict = {Outcome::OmegaNonzero, c.beta_tilde_bound ? "no l in I_0(g, i) attains min alpha = beta~_i"
                                                               : "beta~_i exceeds some beta_l"};
      return c;
    }

    c.case_name = "ii";
    c.delta = largest_delta(ab.alpha, s.rank);
    c.plateau = first_minimizing_plateau(s);
    const auto& st = s.stages[c.plateau->stage];
    c.i0 = st.regime_start;
    c.generated_by_beta_tilde = true;
    for (long i0 = c.i0; i0 < c.i0 + 3; ++i0)
      if (compare_or_throw(segment_from(st.beta_tilde.tail_from(i0)), ab.alpha) != SegmentOrder::Equal)
        c.generated_by_beta_tilde = false;
    const WeakLimit w = wlim(s.nu_gprime, st.nu_gprime.tail_from(c.i0), *c.delta);
    c.wlim_branch = w.holds ? w.branch : 0;
    if (!c.plateau->unique) c.note = "several minimizing plateaus; the first one was used";
    if (c.generated_by_beta_tilde && w.holds) {
      c.verdict = {Outcome::OmegaZero, "alpha is generated by beta~ along the plateau and nu(g') is its weak limit"};
    } else {
      const std::string why = !c.generated_by_beta_tilde ? "beta~ along the plateau does not generate alpha"
                                                          : "nu(g') is not the weak limit of nu_i(g')";
      c.verdict = {c.plateau->unique ? Outcome::OmegaNonzero : Outcome::Inconclusive, why};
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Inconclusive) throw;
    c.verdict = {Outcome::Inconclusive, e.what()};
  }
  return c;
}

// ------------------------------------------------------------------- B-sets

BSet b1_criterion(const InvariantStream& s) {
  for (const auto& st : s.stages)
    if (st.degree != 1)
      throw Error(ErrorCode::HypothesisViolated, "key polynomials of degree " + std::to_string(st.degree) +
                                                     " lie between the degree-1 keys and g");
  const auto& last = s.stages.back();
  if (!last.plateau) throw Error(ErrorCode::HypothesisViolated, "the degree-1 values have a maximum");
  BSet out;
  // delta^L is the smallest initial segment containing every nu_n(g): t lies in it iff -t lies in the
  // final segment generated by -nu_n(g)
  const Segment lower = segment_from(last.nu_g.negated());
  for (const auto& bt : last.b_terms) {
    if (bt.infinite) continue;
    const auto in = eventually_in(bt.values->negated(), lower);
    if (!in) throw Error(ErrorCode::Inconclusive, "B-set membership of b=" + std::to_string(bt.b) + " is undecided");
    if (*in) out.members.insert(bt.b);
  }
  out.one_in_b1 = out.members.count(1) > 0;
  return out;
}

GroupElem epsilon_check(const std::vector<std::pair<std::string, GroupElem>>& root_data) {
  if (root_data.empty()) throw Error(ErrorCode::EmptyRootData, "no root data supplied");
  GroupElem best = root_data.front().second;
  for (const auto& [desc, v] : root_data) best = std::max(best, v);
  return best;
}

}  // namespace valkit
