#pragma once

// Full i-th expansions, rewriting in normalized generators, S_i(f) and the
// derivative drop.

#include <map>
#include <set>
#include <vector>

#include "valkit/keyseq.hpp"

namespace valkit {

/// Shared inputs for expansion work: the key sequence, the valuation and the
/// plateau probe budget. Key values are memoized.
class KeyContext {
 public:
  KeyContext(const KeySequence& ks, const NuOracle& nu, std::size_t budget = NuOracle::kDefaultBudget);

  const KeySequence& ks() const noexcept { return ks_; }
  const NuOracle& nu() const noexcept { return nu_; }
  std::size_t budget() const noexcept { return budget_; }

  const Poly& key(const KeyIndex& i) const;
  const GroupElem& value(const KeyIndex& i) const;
  /// alpha_i = nu(Q_i') - nu(Q_i)
  Extended alpha(const KeyIndex& i) const;
  /// nu_i(f)
  Extended truncated(const Poly& f, const KeyIndex& i) const;
  /// Indices of I* strictly before i, in order; earlier plateaus are cut at the budget.
  std::vector<KeyIndex> before(const KeyIndex& i) const;

 private:
  struct Entry {
    Poly Q;
    GroupElem value;
    Extended alpha;
  };
  const Entry& entry(const KeyIndex& i) const;

  const KeySequence& ks_;
  const NuOracle& nu_;
  std::size_t budget_;
  mutable std::mutex mu_;
  mutable std::map<KeyIndex, Entry> memo_;
};

using Exponents = std::map<KeyIndex, unsigned>;

struct MonomialTerm {
  FieldElem b;
  Exponents lambda;
};

struct FullExpansion {
  KeyIndex anchor;
  std::vector<MonomialTerm> terms;

  Poly reconstruct(const KeyContext& ctx) const;
  /// v(b) + sum lambda_k nu(Q_k)
  GroupElem term_value(const KeyContext& ctx, std::size_t t) const;
  /// b~ = b * prod a_k^lambda_k with v(a_k) = nu(Q_k)
  FieldElem normalized_coefficient(const KeyContext& ctx, std::size_t t) const;
};

FullExpansion full_expansion(const Poly& f, const KeyIndex& i, const KeyContext& ctx);
std::set<KeyIndex> i0_set(const FullExpansion& e);
std::set<KeyIndex> i0_set(const Poly& f, const KeyIndex& i, const KeyContext& ctx);

struct RewriteTerm {
  FieldElem a;
  Exponents lambda;
};

/// f = sum a_j Q~^lambda_j in L = K[x]/(g) with v(a_j) >= 0 and
/// min v(a_j) = nu(f). The identity is checked modulo g before returning.
std::vector<RewriteTerm> rewrite_in_generators(const Poly& f, const KeyContext& ctx);
Poly evaluate_rewrite(const std::vector<RewriteTerm>& terms, const KeyContext& ctx);

/// Argmin set of the Q_i-expansion term values.
std::set<unsigned> s_set(const Poly& f, const KeyIndex& i, const KeyContext& ctx);

struct DerivativeDrop {
  Extended drop = Extended::infinity();  // nu_i(f') - nu_i(f)
  Extended alpha_i = Extended::infinity();
  bool hypothesis = false;  // alpha_{i'} > alpha_i for all i' < i
  bool p_not_divides_s = false;
  bool equals_alpha = false;
  std::set<unsigned> s_f;
  std::set<unsigned> s_fprime;
  std::set<unsigned> shifted;  // {l - 1 : l in S_i(f), l >= 1, p does not divide l}
  /// Under the hypothesis: the iff holds, and S_i(f') = shifted when drop = alpha_i.
  bool consistent() const;
};

DerivativeDrop derivative_drop(const Poly& f, const KeyIndex& i, const KeyContext& ctx);

}  // namespace valkit
