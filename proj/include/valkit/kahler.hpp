#pragma once

// Invariant streams alpha_i, beta_i, beta~_i, the segments alpha and beta,
// and the three vanishing criteria for the Kaehler differentials.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "valkit/expansion.hpp"
#include "valkit/groups.hpp"

namespace valkit {

struct InvariantRecord {
  KeyIndex index;
  std::string label;
  GroupElem nuQ;
  GroupElem nuQprime;
  GroupElem alpha;       // nu(Q') - nu(Q)
  GroupElem beta;        // nu(g') - nu_i(g)
  GroupElem beta_tilde;  // nu_i(g') - nu_i(g)
  GroupElem nu_g;
  GroupElem nu_gprime;
};

/// A recognized law for one field of a plateau, or the reason there is none.
struct LawStatus {
  std::string field;
  std::optional<ValueSequence> law;
  long regime_start = 0;  // first index covered by the law body
  std::size_t verified_terms = 0;
  bool declared = false;  // supplied by the family rather than fitted
};

/// Value of the Q^b coefficient term of g along a degree-1 plateau;
/// `infinite` when the coefficient vanishes on every materialized term.
struct BTerm {
  unsigned b = 0;
  bool infinite = false;
  std::optional<ValueSequence> values;
};

struct StageInvariants {
  std::size_t stage = 0;
  long degree = 1;
  bool plateau = false;
  std::vector<InvariantRecord> records;  // materialized
  ValueSequence nuQ = placeholder(), alpha = placeholder(), beta = placeholder(), beta_tilde = placeholder(),
                nu_g = placeholder(), nu_gprime = placeholder();
  std::vector<LawStatus> laws;
  std::vector<BTerm> b_terms;
  /// First index at which every fitted law is in its regime.
  long regime_start = 0;

  static ValueSequence placeholder() { return ValueSequence::finite({GroupElem()}); }
};

struct StreamOptions {
  std::size_t terms = 8;  // table rows are n = first .. first + terms
  std::size_t budget = NuOracle::kDefaultBudget;
  unsigned threads = 1;
  /// v(p) for value-only (schedule) stages.
  GroupElem vp = GroupElem(Rational(1));
};

struct InvariantStream {
  std::vector<StageInvariants> stages;
  GroupElem nu_gprime;  // nu(g')
  std::size_t rank = 1;
  std::size_t table_terms = 8;
  unsigned long residue_char = 2;
  long g_degree = 2;

  std::vector<InvariantRecord> table() const;
};

/// Smallest number of materialized terms for each plateau.
inline constexpr std::size_t kMinMaterialized = 16;

/// Fits c*q^(-n) + d, c*n + d or an eventually constant law to terms with
/// indices first, first+1, ...: 4 terms fix the law, every later term
/// verifies it, earlier terms become the prefix. nullopt if nothing fits.
std::optional<ValueSequence> fit_law(const std::vector<GroupElem>& terms, long first);

/// Records over I* for polynomial key sequences; ctx supplies nu.
InvariantStream invariant_stream(const KeyContext& ctx, const StreamOptions& opts = {});
/// Records for value-only schedules: nu_n(g) = p s_n, nu(g') = v(p).
InvariantStream invariant_stream(const KeySequence& ks, const StreamOptions& opts = {});

struct AlphaBeta {
  Segment alpha;
  Segment beta;
};

Segment stage_alpha_segment(const StageInvariants& s);
AlphaBeta alpha_beta_segments(const InvariantStream& s);

/// beta contained in alpha, with the pointwise witness beta_i >= beta~_i >= alpha_i' (i' <= i).
bool ideal_inclusion_check(const InvariantStream& s);

enum class Outcome { OmegaZero, OmegaNonzero, Inconclusive };
std::string_view to_string(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  std::string witness;
};

Verdict omega_verdict(const InvariantStream& s);

struct MinimizingPlateau {
  std::size_t stage = 0;
  long degree = 1;
  bool unique = true;
  KeyIndex certificate;  // alpha strictly decreasing from here on
};

/// PreconditionViolated when there is no plateau or alpha has a minimum.
MinimizingPlateau first_minimizing_plateau(const InvariantStream& s);

struct Classification {
  Verdict verdict;
  std::string case_name;  // "i", "ii" or empty
  // case (i)
  std::optional<KeyIndex> i;
  std::optional<KeyIndex> ell;
  std::optional<GroupElem> min_alpha;
  bool has_max = false, beta_tilde_bound = false, min_attained = false;
  // case (ii)
  std::optional<IsolatedSubgroup> delta;
  std::optional<MinimizingPlateau> plateau;
  long i0 = 0;
  bool generated_by_beta_tilde = false;
  int wlim_branch = 0;
  std::string note;
};

/// ctx is needed for I_0(g, i) in case (i); value-only streams pass nullptr.
Classification classify(const InvariantStream& s, const KeyContext* ctx);

struct BSet {
  std::set<unsigned> members;
  bool one_in_b1 = false;
};

/// HypothesisViolated unless keys are a single degree-1 plateau without a
/// last element (no intermediate degrees).
BSet b1_criterion(const InvariantStream& s);

/// max of the supplied root values; EmptyRootData if none.
GroupElem epsilon_check(const std::vector<std::pair<std::string, GroupElem>>& root_data);

}  // namespace valkit
