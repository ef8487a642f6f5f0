#pragma once

// Value groups Q^r with the lexicographic order, final segments of them,
// isolated subgroups and weak limits.

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "valkit/rational.hpp"

namespace valkit {

/// Element of Q^r, ordered lexicographically. Rank 1 is the common case.
class GroupElem {
 public:
  GroupElem() : coords_(1) {}
  explicit GroupElem(Rational value) : coords_{std::move(value)} { coords_[0].canonicalize(); }
  explicit GroupElem(std::vector<Rational> coords);

  static GroupElem zero(std::size_t rank) { return GroupElem(std::vector<Rational>(rank)); }
  /// "1/2" for rank 1, "1,-3/4" for rank 2.
  static GroupElem parse(std::string_view text);

  std::size_t rank() const noexcept { return coords_.size(); }
  std::span<const Rational> coords() const noexcept { return coords_; }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }

  bool is_zero() const;
  /// -1, 0 or 1.
  int sign() const;
  /// Position of the first nonzero coordinate, if any.
  std::optional<std::size_t> lead() const;

  GroupElem operator-() const;
  GroupElem& operator+=(const GroupElem& other);
  GroupElem& operator-=(const GroupElem& other);
  friend GroupElem operator+(GroupElem a, const GroupElem& b) { return a += b; }
  friend GroupElem operator-(GroupElem a, const GroupElem& b) { return a -= b; }
  GroupElem scaled(const Rational& factor) const;

  friend bool operator==(const GroupElem& a, const GroupElem& b);
  friend std::strong_ordering operator<=>(const GroupElem& a, const GroupElem& b);

  /// Coordinates joined by ',' in canonical short form.
  std::string to_string() const;
  /// Coordinates joined by ',' in "num/den" form.
  std::string to_fraction_string() const;

 private:
  std::vector<Rational> coords_;
};

/// A finite group element or +infinity.
class Extended {
 public:
  Extended(GroupElem value) : value_(std::move(value)) {}  // NOLINT: implicit by design of the value type
  static Extended infinity() { return Extended(); }

  bool is_infinite() const noexcept { return !value_.has_value(); }
  bool is_finite() const noexcept { return value_.has_value(); }
  const GroupElem& finite() const;

  friend Extended operator+(const Extended& a, const Extended& b);
  friend bool operator==(const Extended& a, const Extended& b);
  friend std::strong_ordering operator<=>(const Extended& a, const Extended& b);

  std::string to_string() const;
  std::string to_fraction_string() const;

 private:
  Extended() = default;
  std::optional<GroupElem> value_;
};

/// Convex subgroup of Q^r: the elements whose first rank - suffix_len
/// coordinates vanish. suffix_len 0 is {0}, suffix_len == rank is everything.
struct IsolatedSubgroup {
  std::size_t rank = 1;
  std::size_t suffix_len = 0;

  bool contains(const GroupElem& x) const;
  bool is_trivial() const { return suffix_len == 0; }
  bool is_whole() const { return suffix_len == rank; }
  friend bool operator==(const IsolatedSubgroup&, const IsolatedSubgroup&) = default;
};

/// Compares x + H and y + H in the quotient by H. Returns -1, 0, 1.
int compare_mod(const GroupElem& x, const GroupElem& y, const IsolatedSubgroup& h);

/// A carrier for value families indexed by n >= first_index.
class ValueSequence {
 public:
  struct FiniteList {
    std::vector<GroupElem> values;
  };
  /// Terms prefix[0..] followed by c * base^(-n) + d, with n the absolute index.
  struct ClosedForm {
    std::vector<GroupElem> prefix;
    GroupElem c;
    GroupElem d;
    Rational base;
  };
  /// Terms prefix[0..] followed by c * n + d.
  struct Arithmetic {
    std::vector<GroupElem> prefix;
    GroupElem c;
    GroupElem d;
  };
  struct Stabilized {
    std::vector<GroupElem> prefix;
    GroupElem tail;
  };
  /// No recognized law: terms are only available by probing.
  struct Probed {
    std::function<GroupElem(long)> term;
    std::size_t rank = 1;
    std::string description;
  };
  using Kind = std::variant<FiniteList, ClosedForm, Arithmetic, Stabilized, Probed>;

  ValueSequence(Kind kind, long first_index = 0);

  static ValueSequence finite(std::vector<GroupElem> values, long first_index = 0);
  /// n -> c * base^(-n) + d; base a positive rational other than 1.
  static ValueSequence closed_form(GroupElem c, GroupElem d, const Rational& base, long first_index = 0,
                                   std::vector<GroupElem> prefix = {});
  static ValueSequence arithmetic(GroupElem c, GroupElem d, long first_index = 0,
                                  std::vector<GroupElem> prefix = {});
  static ValueSequence stabilized(std::vector<GroupElem> prefix, GroupElem tail, long first_index = 0);
  static ValueSequence probed(std::function<GroupElem(long)> term, std::size_t rank, std::string description,
                              long first_index = 0);

  const Kind& kind() const noexcept { return kind_; }
  long first_index() const noexcept { return first_index_; }
  std::size_t rank() const;
  bool is_finite() const { return std::holds_alternative<FiniteList>(kind_); }
  bool has_law() const { return !std::holds_alternative<Probed>(kind_); }
  /// Number of terms for finite lists.
  std::optional<std::size_t> size() const;

  /// Term with absolute index n (n >= first_index).
  GroupElem at(long n) const;
  ValueSequence negated() const;
  /// Terms with index >= n only.
  ValueSequence tail_from(long n) const;

  std::string describe() const;

 private:
  Kind kind_;
  long first_index_;
};

/// Exact cut of a final segment: {g : g + H >= anchor + H} when closed,
/// {g : g + H > anchor + H} when open, H = Delta_{subgroup}.
struct Boundary {
  GroupElem anchor;
  std::size_t subgroup = 0;
  bool closed = true;

  bool contains(const GroupElem& x) const;
  friend bool operator==(const Boundary& a, const Boundary& b);
};

/// Final segment of Q^r.
class Segment {
 public:
  enum class Kind { Empty, WholeGroup, MinClosed, GeneratedBy };

  static Segment empty(std::size_t rank = 1);
  static Segment whole(std::size_t rank = 1);
  static Segment min_closed(GroupElem min);
  /// boundary is the exact cut when the generators follow a recognized law.
  static Segment generated_by(ValueSequence generators, std::optional<Boundary> boundary);

  Kind kind() const noexcept { return kind_; }
  std::size_t rank() const noexcept { return rank_; }
  bool has_minimum() const noexcept { return kind_ == Kind::MinClosed; }
  const GroupElem& minimum() const;
  const ValueSequence& generators() const;
  const std::optional<Boundary>& boundary() const noexcept { return boundary_; }
  bool is_decidable() const noexcept { return boundary_.has_value(); }

  /// Exact membership; nullopt when undecidable within the probe budget.
  std::optional<bool> contains(const GroupElem& x, std::size_t probe_budget = 64) const;

  std::string describe() const;

 private:
  Segment(Kind kind, std::size_t rank, std::optional<GroupElem> min, std::optional<ValueSequence> gens,
          std::optional<Boundary> boundary);

  Kind kind_;
  std::size_t rank_;
  std::optional<GroupElem> min_;
  std::optional<ValueSequence> gens_;
  std::optional<Boundary> boundary_;
};

enum class SegmentOrder { Equal, AContainsB, BContainsA, Incomparable, Inconclusive };
std::string_view to_string(SegmentOrder order);

inline constexpr std::size_t kDefaultProbeBudget = 64;

/// Smallest final segment containing every term of values.
Segment segment_from(const ValueSequence& values);
SegmentOrder segment_compare(const Segment& a, const Segment& b, std::size_t probe_budget = kDefaultProbeBudget);
/// Smallest final segment containing both.
Segment segment_union(const Segment& a, const Segment& b);

/// Largest isolated subgroup D with alpha - D = alpha.
IsolatedSubgroup largest_delta(const Segment& alpha, std::size_t rank);
/// Translation law alpha - Delta_k = alpha, decided on the exact cut.
bool translation_invariant(const Segment& alpha, std::size_t k);

struct WeakLimit {
  bool holds = false;
  int branch = 0;  // 1 or 2 when holds
  explicit operator bool() const { return holds; }
};

/// gamma = wlim_Delta S.
WeakLimit wlim(const GroupElem& gamma, const ValueSequence& s, const IsolatedSubgroup& delta);

/// Representatives 0 = g_1 < ... < g_e < Delta_{>0} of (1/m)Z modulo (1/d)Z.
std::vector<GroupElem> coset_representatives(long m, long d);

/// Whether every term from some index on lies in the segment (exact);
/// nullopt when neither the sequence nor the segment is decidable.
std::optional<bool> eventually_in(const ValueSequence& seq, const Segment& segment);

/// A term lambda_0 of the generators with lambda_0 - lambda < eps for every
/// lambda in the segment they generate (lambda_0 ranges over a coinitial set).
std::optional<GroupElem> approximating_term(const ValueSequence& generators, const GroupElem& eps,
                                            std::size_t probe_budget = kDefaultProbeBudget);

}  // namespace valkit
