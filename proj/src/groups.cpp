#include "valkit/groups.hpp"

#include <algorithm>
#include <sstream>

#include "valkit/errors.hpp"

namespace valkit {

// ---------------------------------------------------------------- GroupElem

GroupElem::GroupElem(std::vector<Rational> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw Error(ErrorCode::RankMismatch, "group elements need rank >= 1");
  for (auto& q : coords_) q.canonicalize();
}

GroupElem GroupElem::parse(std::string_view text) {
  std::vector<Rational> coords;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    coords.push_back(parse_rational(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return GroupElem(std::move(coords));
}

bool GroupElem::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& q) { return q == 0; });
}

int GroupElem::sign() const {
  for (const auto& q : coords_)
    if (q != 0) return sgn(q);
  return 0;
}

std::optional<std::size_t> GroupElem::lead() const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] != 0) return i;
  return std::nullopt;
}

GroupElem GroupElem::operator-() const {
  GroupElem out = *this;
  for (auto& q : out.coords_) q = -q;
  return out;
}

GroupElem& GroupElem::operator+=(const GroupElem& other) {
  if (rank() != other.rank()) throw Error(ErrorCode::RankMismatch, "adding elements of different rank");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

GroupElem& GroupElem::operator-=(const GroupElem& other) {
  if (rank() != other.rank()) throw Error(ErrorCode::RankMismatch, "subtracting elements of different rank");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

GroupElem GroupElem::scaled(const Rational& factor) const {
  GroupElem out = *this;
  for (auto& q : out.coords_) q *= factor;
  return out;
}

bool operator==(const GroupElem& a, const GroupElem& b) {
  if (a.rank() != b.rank()) throw Error(ErrorCode::RankMismatch, "comparing elements of different rank");
  return a.coords_ == b.coords_;
}

std::strong_ordering operator<=>(const GroupElem& a, const GroupElem& b) {
  if (a.rank() != b.rank()) throw Error(ErrorCode::RankMismatch, "comparing elements of different rank");
  for (std::size_t i = 0; i < a.rank(); ++i) {
    const int c = cmp(a.coords_[i], b.coords_[i]);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

std::string GroupElem::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ',';
    out += valkit::to_string(coords_[i]);
  }
  return out;
}

std::string GroupElem::to_fraction_string() const {
  std::string out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ',';
    out += valkit::to_fraction_string(coords_[i]);
  }
  return out;
}

// ----------------------------------------------------------------- Extended

const GroupElem& Extended::finite() const {
  if (!value_) throw Error(ErrorCode::PreconditionViolated, "value is +infinity");
  return *value_;
}

Extended operator+(const Extended& a, const Extended& b) {
  if (a.is_infinite() || b.is_infinite()) return Extended::infinity();
  return Extended(*a.value_ + *b.value_);
}

bool operator==(const Extended& a, const Extended& b) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
  return *a.value_ == *b.value_;
}

std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
  if (a.is_infinite()) return b.is_infinite() ? std::strong_ordering::equal : std::strong_ordering::greater;
  if (b.is_infinite()) return std::strong_ordering::less;
  return *a.value_ <=> *b.value_;
}

std::string Extended::to_string() const { return value_ ? value_->to_string() : "inf"; }
std::string Extended::to_fraction_string() const { return value_ ? value_->to_fraction_string() : "inf"; }

// --------------------------------------------------------- IsolatedSubgroup

bool IsolatedSubgroup::contains(const GroupElem& x) const {
  for (std::size_t i = 0; i + suffix_len < rank; ++i)
    if (x[i] != 0) return false;
  return true;
}

namespace {

// Representative of x + H with the coordinates inside H zeroed.
GroupElem truncate_mod(const GroupElem& x, std::size_t suffix_len) {
  std::vector<Rational> coords(x.coords().begin(), x.coords().end());
  for (std::size_t i = coords.size() - std::min(suffix_len, coords.size()); i < coords.size(); ++i) coords[i] = 0;
  return GroupElem(std::move(coords));
}

int sign_of(std::strong_ordering o) { return o < 0 ? -1 : (o > 0 ? 1 : 0); }

}  // namespace

int compare_mod(const GroupElem& x, const GroupElem& y, const IsolatedSubgroup& h) {
  return sign_of(truncate_mod(x, h.suffix_len) <=> truncate_mod(y, h.suffix_len));
}

// ------------------------------------------------------------ ValueSequence

ValueSequence::ValueSequence(Kind kind, long first_index) : kind_(std::move(kind)), first_index_(first_index) {
  if (auto* cf = std::get_if<ClosedForm>(&kind_)) {
    if (cf->base <= 0 || cf->base == 1)
      throw Error(ErrorCode::PreconditionViolated, "closed-form base must be positive and != 1");
    if (cf->c.rank() != cf->d.rank()) throw Error(ErrorCode::RankMismatch, "closed-form c and d differ in rank");
  }
  if (auto* ar = std::get_if<Arithmetic>(&kind_)) {
    if (ar->c.rank() != ar->d.rank()) throw Error(ErrorCode::RankMismatch, "progression c and d differ in rank");
  }
}

ValueSequence ValueSequence::finite(std::vector<GroupElem> values, long first_index) {
  return ValueSequence(FiniteList{std::move(values)}, first_index);
}

ValueSequence ValueSequence::closed_form(GroupElem c, GroupElem d, const Rational& base, long first_index,
                                         std::vector<GroupElem> prefix) {
  return ValueSequence(ClosedForm{std::move(prefix), std::move(c), std::move(d), base}, first_index);
}

ValueSequence ValueSequence::arithmetic(GroupElem c, GroupElem d, long first_index, std::vector<GroupElem> prefix) {
  return ValueSequence(Arithmetic{std::move(prefix), std::move(c), std::move(d)}, first_index);
}

ValueSequence ValueSequence::stabilized(std::vector<GroupElem> prefix, GroupElem tail, long first_index) {
  return ValueSequence(Stabilized{std::move(prefix), std::move(tail)}, first_index);
}

ValueSequence ValueSequence::probed(std::function<GroupElem(long)> term, std::size_t rank, std::string description,
                                    long first_index) {
  return ValueSequence(Probed{std::move(term), rank, std::move(description)}, first_index);
}

std::size_t ValueSequence::rank() const {
  struct {
    std::size_t operator()(const FiniteList& f) const { return f.values.empty() ? 1 : f.values.front().rank(); }
    std::size_t operator()(const ClosedForm& f) const { return f.d.rank(); }
    std::size_t operator()(const Arithmetic& f) const { return f.d.rank(); }
    std::size_t operator()(const Stabilized& f) const { return f.tail.rank(); }
    std::size_t operator()(const Probed& f) const { return f.rank; }
  } visitor;
  return std::visit(visitor, kind_);
}

std::optional<std::size_t> ValueSequence::size() const {
  if (const auto* f = std::get_if<FiniteList>(&kind_)) return f->values.size();
  return std::nullopt;
}

GroupElem ValueSequence::at(long n) const {
  if (n < first_index_) throw Error(ErrorCode::PreconditionViolated, "index before the first term");
  const auto offset = static_cast<std::size_t>(n - first_index_);
  struct {
    long n;
    std::size_t offset;
    GroupElem operator()(const FiniteList& f) const {
      if (offset >= f.values.size()) throw Error(ErrorCode::PreconditionViolated, "index past the end of the list");
      return f.values[offset];
    }
    GroupElem operator()(const ClosedForm& f) const {
      if (offset < f.prefix.size()) return f.prefix[offset];
      return f.c.scaled(pow(f.base, -n)) + f.d;
    }
    GroupElem operator()(const Arithmetic& f) const {
      if (offset < f.prefix.size()) return f.prefix[offset];
      return f.c.scaled(Rational(n)) + f.d;
    }
    GroupElem operator()(const Stabilized& f) const { return offset < f.prefix.size() ? f.prefix[offset] : f.tail; }
    GroupElem operator()(const Probed& f) const { return f.term(n); }
  } visitor{n, offset};
  return std::visit(visitor, kind_);
}

namespace {

std::vector<GroupElem> negate_all(const std::vector<GroupElem>& xs) {
  std::vector<GroupElem> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(-x);
  return out;
}

std::vector<GroupElem> drop_front(const std::vector<GroupElem>& xs, std::size_t k) {
  if (k >= xs.size()) return {};
  return std::vector<GroupElem>(xs.begin() + static_cast<std::ptrdiff_t>(k), xs.end());
}

}  // namespace

ValueSequence ValueSequence::negated() const {
  struct {
    Kind operator()(const FiniteList& f) const { return FiniteList{negate_all(f.values)}; }
    Kind operator()(const ClosedForm& f) const { return ClosedForm{negate_all(f.prefix), -f.c, -f.d, f.base}; }
    Kind operator()(const Arithmetic& f) const { return Arithmetic{negate_all(f.prefix), -f.c, -f.d}; }
    Kind operator()(const Stabilized& f) const { return Stabilized{negate_all(f.prefix), -f.tail}; }
    Kind operator()(const Probed& f) const {
      auto term = f.term;
      return Probed{[term](long n) { return -term(n); }, f.rank, "-(" + f.description + ")"};
    }
  } visitor;
  return ValueSequence(std::visit(visitor, kind_), first_index_);
}

ValueSequence ValueSequence::tail_from(long n) const {
  if (n <= first_index_) return *this;
  const auto k = static_cast<std::size_t>(n - first_index_);
  struct {
    std::size_t k;
    Kind operator()(const FiniteList& f) const {
      if (k >= f.values.size()) throw Error(ErrorCode::EmptySequence, "tail past the end of a finite list");
      return FiniteList{drop_front(f.values, k)};
    }
    Kind operator()(const ClosedForm& f) const { return ClosedForm{drop_front(f.prefix, k), f.c, f.d, f.base}; }
    Kind operator()(const Arithmetic& f) const { return Arithmetic{drop_front(f.prefix, k), f.c, f.d}; }
    Kind operator()(const Stabilized& f) const { return Stabilized{drop_front(f.prefix, k), f.tail}; }
    Kind operator()(const Probed& f) const { return f; }
  } visitor{k};
  return ValueSequence(std::visit(visitor, kind_), n);
}

std::string ValueSequence::describe() const {
  std::ostringstream os;
  auto list = [&os](const std::vector<GroupElem>& xs) {
    os << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i].to_string();
    os << ']';
  };
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FiniteList>) {
          os << "list";
          list(f.values);
        } else if constexpr (std::is_same_v<T, ClosedForm>) {
          if (!f.prefix.empty()) {
            list(f.prefix);
            os << " then ";
          }
          os << "(" << f.c.to_string() << ")*(" << to_string(f.base) << ")^-n + (" << f.d.to_string() << ")";
        } else if constexpr (std::is_same_v<T, Arithmetic>) {
          if (!f.prefix.empty()) {
            list(f.prefix);
            os << " then ";
          }
          os << "(" << f.c.to_string() << ")*n + (" << f.d.to_string() << ")";
        } else if constexpr (std::is_same_v<T, Stabilized>) {
          list(f.prefix);
          os << " then constant " << f.tail.to_string();
        } else {
          os << "probed " << f.description;
        }
      },
      kind_);
  os << " from n=" << first_index_;
  return os.str();
}

// ------------------------------------------------------------------ Segment

bool Boundary::contains(const GroupElem& x) const {
  const int s = compare_mod(x, anchor, IsolatedSubgroup{anchor.rank(), subgroup});
  return closed ? s >= 0 : s > 0;
}

bool operator==(const Boundary& a, const Boundary& b) {
  return a.subgroup == b.subgroup && a.closed == b.closed &&
         truncate_mod(a.anchor, a.subgroup) == truncate_mod(b.anchor, b.subgroup);
}

Segment::Segment(Kind kind, std::size_t rank, std::optional<GroupElem> min, std::optional<ValueSequence> gens,
                 std::optional<Boundary> boundary)
    : kind_(kind), rank_(rank), min_(std::move(min)), gens_(std::move(gens)), boundary_(std::move(boundary)) {}

Segment Segment::empty(std::size_t rank) {
  return Segment(Kind::Empty, rank, std::nullopt, std::nullopt, Boundary{GroupElem::zero(rank), rank, false});
}

Segment Segment::whole(std::size_t rank) {
  return Segment(Kind::WholeGroup, rank, std::nullopt, std::nullopt, Boundary{GroupElem::zero(rank), rank, true});
}

Segment Segment::min_closed(GroupElem min) {
  const auto r = min.rank();
  Boundary b{min, 0, true};
  return Segment(Kind::MinClosed, r, std::move(min), std::nullopt, std::move(b));
}

Segment Segment::generated_by(ValueSequence generators, std::optional<Boundary> boundary) {
  const auto r = generators.rank();
  if (boundary) {
    boundary->anchor = truncate_mod(boundary->anchor, boundary->subgroup);
    if (boundary->subgroup >= r) return boundary->closed ? whole(r) : empty(r);
  }
  return Segment(Kind::GeneratedBy, r, std::nullopt, std::move(generators), std::move(boundary));
}

const GroupElem& Segment::minimum() const {
  if (!min_) throw Error(ErrorCode::PreconditionViolated, "segment has no minimum");
  return *min_;
}

const ValueSequence& Segment::generators() const {
  if (!gens_) throw Error(ErrorCode::PreconditionViolated, "segment is not given by generators");
  return *gens_;
}

std::optional<bool> Segment::contains(const GroupElem& x, std::size_t probe_budget) const {
  if (boundary_) return boundary_->contains(x);
  const auto& g = *gens_;
  for (std::size_t k = 0; k < probe_budget; ++k)
    if (g.at(g.first_index() + static_cast<long>(k)) <= x) return true;
  return std::nullopt;
}

std::string Segment::describe() const {
  switch (kind_) {
    case Kind::Empty: return "empty";
    case Kind::WholeGroup: return "whole group";
    case Kind::MinClosed: return "[" + min_->to_string() + ", inf)";
    case Kind::GeneratedBy: break;
  }
  if (!boundary_) return "generated by " + gens_->describe() + " (undecided)";
  std::string h = boundary_->subgroup == 0 ? "" : " + Delta_" + std::to_string(boundary_->subgroup);
  return std::string(boundary_->closed ? "{g >= " : "{g > ") + boundary_->anchor.to_string() + h + "}";
}

std::string_view to_string(SegmentOrder order) {
  switch (order) {
    case SegmentOrder::Equal: return "Equal";
    case SegmentOrder::AContainsB: return "AContainsB";
    case SegmentOrder::BContainsA: return "BContainsA";
    case SegmentOrder::Incomparable: return "Incomparable";
    case SegmentOrder::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

std::optional<GroupElem> min_of(const std::vector<GroupElem>& xs) {
  if (xs.empty()) return std::nullopt;
  return *std::min_element(xs.begin(), xs.end());
}

// Cut of the part of a law-carrying sequence past its prefix.
Boundary law_boundary(const ValueSequence& seq) {
  const auto r = seq.rank();
  const long n1 = seq.first_index() +
                  static_cast<long>(std::visit(
                      [](const auto& f) -> std::size_t {
                        using T = std::decay_t<decltype(f)>;
                        if constexpr (std::is_same_v<T, ValueSequence::ClosedForm> ||
                                      std::is_same_v<T, ValueSequence::Arithmetic> ||
                                      std::is_same_v<T, ValueSequence::Stabilized>)
                          return f.prefix.size();
                        else
                          return 0;
                      },
                      seq.kind()));
  if (const auto* cf = std::get_if<ValueSequence::ClosedForm>(&seq.kind())) {
    if (cf->c.is_zero()) return Boundary{cf->d, 0, true};
    const bool converging = cf->base > 1;
    const int s = cf->c.sign();
    const std::size_t lead = *cf->c.lead();
    if (converging && s > 0) return Boundary{cf->d, r - lead - 1, false};
    if (!converging && s < 0) return Boundary{cf->d, r - lead, true};
    return Boundary{seq.at(n1), 0, true};
  }
  if (const auto* ar = std::get_if<ValueSequence::Arithmetic>(&seq.kind())) {
    if (ar->c.is_zero()) return Boundary{ar->d, 0, true};
    if (ar->c.sign() < 0) return Boundary{ar->d, r - *ar->c.lead(), true};
    return Boundary{seq.at(n1), 0, true};
  }
  if (const auto* st = std::get_if<ValueSequence::Stabilized>(&seq.kind())) return Boundary{st->tail, 0, true};
  throw Error(ErrorCode::PreconditionViolated, "no law");
}

const std::vector<GroupElem>* prefix_of(const ValueSequence& seq) {
  return std::visit(
      [](const auto& f) -> const std::vector<GroupElem>* {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ValueSequence::FiniteList>)
          return &f.values;
        else if constexpr (std::is_same_v<T, ValueSequence::Probed>)
          return nullptr;
        else
          return &f.prefix;
      },
      seq.kind());
}

SegmentOrder compare_boundaries(const Boundary& x, const Boundary& y) {
  const std::size_t k = std::max(x.subgroup, y.subgroup);
  const int s = compare_mod(x.anchor, y.anchor, IsolatedSubgroup{x.anchor.rank(), k});
  if (s < 0) return SegmentOrder::AContainsB;
  if (s > 0) return SegmentOrder::BContainsA;
  if (x.subgroup > y.subgroup) return x.closed ? SegmentOrder::AContainsB : SegmentOrder::BContainsA;
  if (y.subgroup > x.subgroup) return y.closed ? SegmentOrder::BContainsA : SegmentOrder::AContainsB;
  if (x.closed == y.closed) return SegmentOrder::Equal;
  return x.closed ? SegmentOrder::AContainsB : SegmentOrder::BContainsA;
}

GroupElem probe_term(const Segment& s, long k) {
  if (s.kind() == Segment::Kind::MinClosed) return s.minimum();
  const auto& g = s.generators();
  return g.at(g.first_index() + k);
}

}  // namespace

Segment segment_from(const ValueSequence& values) {
  if (const auto* fl = std::get_if<ValueSequence::FiniteList>(&values.kind())) {
    if (fl->values.empty()) throw Error(ErrorCode::EmptySequence, "segment of an empty sequence");
    return Segment::min_closed(*min_of(fl->values));
  }
  if (!values.has_law()) return Segment::generated_by(values, std::nullopt);

  const Boundary law = law_boundary(values);
  const auto prefix_min = min_of(*prefix_of(values));
  if (law.subgroup == 0 && law.closed) {
    // attained minimum
    GroupElem m = law.anchor;
    if (prefix_min && *prefix_min < m) m = *prefix_min;
    return Segment::min_closed(std::move(m));
  }
  if (prefix_min) {
    const Boundary pm{*prefix_min, 0, true};
    if (compare_boundaries(pm, law) != SegmentOrder::BContainsA) return Segment::min_closed(*prefix_min);
  }
  return Segment::generated_by(values, law);
}

SegmentOrder segment_compare(const Segment& a, const Segment& b, std::size_t probe_budget) {
  if (a.rank() != b.rank()) throw Error(ErrorCode::RankMismatch, "comparing segments of different rank");
  if (a.boundary() && b.boundary()) return compare_boundaries(*a.boundary(), *b.boundary());
  auto probe = [probe_budget](const Segment& exact, const Segment& opaque) {
    const auto& g = opaque.generators();
    for (std::size_t k = 0; k < probe_budget; ++k)
      if (!*exact.contains(g.at(g.first_index() + static_cast<long>(k)))) return true;
    return false;
  };
  if (a.boundary() && probe(a, b)) return SegmentOrder::BContainsA;
  if (b.boundary() && probe(b, a)) return SegmentOrder::AContainsB;
  return SegmentOrder::Inconclusive;
}

Segment segment_union(const Segment& a, const Segment& b) {
  switch (segment_compare(a, b)) {
    case SegmentOrder::Equal:
    case SegmentOrder::AContainsB: return a;
    case SegmentOrder::BContainsA: return b;
    default: break;
  }
  // Undecided: interleave the generators and leave the cut open.
  auto term = [a, b](long n) { return n % 2 == 0 ? probe_term(a, n / 2) : probe_term(b, n / 2); };
  return Segment::generated_by(ValueSequence::probed(term, a.rank(), "union"), std::nullopt);
}

bool translation_invariant(const Segment& alpha, std::size_t k) {
  const auto r = alpha.rank();
  if (k > r) throw Error(ErrorCode::InvalidSubgroup, "subgroup index exceeds the rank");
  if (!alpha.boundary()) throw Error(ErrorCode::Inconclusive, "segment cut is undecided");
  if (alpha.kind() == Segment::Kind::Empty || alpha.kind() == Segment::Kind::WholeGroup) return true;
  const Boundary& b = *alpha.boundary();
  // A representative element of alpha sitting next to the cut.
  GroupElem lambda = b.anchor;
  if (!b.closed) {
    std::vector<Rational> unit(r);
    unit[r - b.subgroup - 1] = 1;
    lambda += GroupElem(std::move(unit));
  }
  for (std::size_t j = r - k; j < r; ++j) {
    for (int scale : {1, 2}) {
      std::vector<Rational> delta(r);
      delta[j] = scale;
      if (!b.contains(lambda - GroupElem(std::move(delta)))) return false;
    }
  }
  return true;
}

IsolatedSubgroup largest_delta(const Segment& alpha, std::size_t rank) {
  if (alpha.kind() == Segment::Kind::Empty) throw Error(ErrorCode::PreconditionViolated, "alpha is empty");
  if (alpha.rank() != rank) throw Error(ErrorCode::RankMismatch, "rank does not match the segment");
  for (std::size_t k = rank + 1; k-- > 0;)
    if (translation_invariant(alpha, k)) return IsolatedSubgroup{rank, k};
  return IsolatedSubgroup{rank, 0};
}

namespace {

// Cosets of the law part are constant (== d + Delta) when c lies in Delta.
struct CosetShape {
  bool eventually_constant;
  GroupElem tail;                    // eventual coset when constant
  std::optional<GroupElem> moving_c; // c when the cosets keep moving
  bool converging = false;
};

bool positive_but_below(const GroupElem& e, const GroupElem& c) {
  // e > 0 and e smaller than every c * q^-n (c > 0)
  return e.sign() > 0 && *e.lead() > *c.lead();
}

}  // namespace

WeakLimit wlim(const GroupElem& gamma, const ValueSequence& s, const IsolatedSubgroup& delta) {
  const auto r = s.rank();
  if (gamma.rank() != r || delta.rank != r) throw Error(ErrorCode::RankMismatch, "wlim operands differ in rank");
  if (!s.has_law()) throw Error(ErrorCode::Inconclusive, "weak limit of a sequence without a recognized law");

  std::vector<GroupElem> prefix;
  std::optional<GroupElem> tail, c, d;
  bool converging = false;
  if (const auto* fl = std::get_if<ValueSequence::FiniteList>(&s.kind())) {
    if (fl->values.empty()) throw Error(ErrorCode::EmptySequence, "weak limit of an empty sequence");
    prefix = fl->values;
    tail = fl->values.back();
  } else if (const auto* st = std::get_if<ValueSequence::Stabilized>(&s.kind())) {
    prefix = st->prefix;
    tail = st->tail;
  } else if (const auto* cf = std::get_if<ValueSequence::ClosedForm>(&s.kind())) {
    prefix = cf->prefix;
    converging = cf->base > 1;
    if (delta.contains(cf->c)) tail = cf->d;
    else {
      c = cf->c;
      d = cf->d;
    }
  } else if (const auto* ar = std::get_if<ValueSequence::Arithmetic>(&s.kind())) {
    prefix = ar->prefix;
    if (delta.contains(ar->c)) tail = ar->d;
    else {
      c = ar->c;
      d = ar->d;
    }
  }

  if (tail) {
    // Branch (2): finitely many cosets, the eventual one must be the least and contain gamma.
    for (const auto& x : prefix)
      if (compare_mod(x, *tail, delta) < 0) return {};
    if (compare_mod(gamma, *tail, delta) != 0) return {};
    return {true, 2};
  }
  // Moving cosets: only a converging, decreasing law can have no least coset.
  if (!converging || c->sign() < 0) return {};
  const GroupElem cbar = truncate_mod(*c, delta.suffix_len);
  for (const auto& x : prefix) {
    const GroupElem e = truncate_mod(x - *d, delta.suffix_len);
    if (e.sign() <= 0 || positive_but_below(e, cbar)) return {};  // a least coset exists
  }
  // Branch (1): |gamma - s_n| < eps eventually for every eps > Delta.
  if (!delta.contains(gamma - *d)) return {};
  if (*c->lead() + 1 + delta.suffix_len != r) return {};
  return {true, 1};
}

std::vector<GroupElem> coset_representatives(long m, long d) {
  if (m <= 0 || d <= 0 || m % d != 0)
    throw Error(ErrorCode::InvalidSubgroup, "(1/" + std::to_string(d) + ")Z is not a subgroup of (1/" +
                                                std::to_string(m) + ")Z");
  std::vector<GroupElem> out;
  for (long j = 0; j < m / d; ++j) out.emplace_back(Rational(j, m));
  return out;
}

std::optional<bool> eventually_in(const ValueSequence& seq, const Segment& segment) {
  if (!segment.boundary()) return std::nullopt;
  const Boundary& b = *segment.boundary();
  if (const auto* fl = std::get_if<ValueSequence::FiniteList>(&seq.kind())) {
    if (fl->values.empty()) throw Error(ErrorCode::EmptySequence, "empty sequence");
    return b.contains(fl->values.back());
  }
  if (const auto* st = std::get_if<ValueSequence::Stabilized>(&seq.kind())) return b.contains(st->tail);
  if (!seq.has_law()) return std::nullopt;

  GroupElem c, d;
  bool converging = false;
  if (const auto* cf = std::get_if<ValueSequence::ClosedForm>(&seq.kind())) {
    c = cf->c;
    d = cf->d;
    converging = cf->base > 1;
  } else {
    const auto& ar = std::get<ValueSequence::Arithmetic>(seq.kind());
    c = ar.c;
    d = ar.d;
  }
  const GroupElem cbar = truncate_mod(c, b.subgroup);
  const GroupElem e = truncate_mod(d - b.anchor, b.subgroup);
  if (cbar.is_zero()) return b.closed ? e.sign() >= 0 : e.sign() > 0;
  int s;
  if (!e.is_zero() && (converging ? *e.lead() <= *cbar.lead() : *e.lead() < *cbar.lead()))
    s = e.sign();
  else
    s = cbar.sign();
  return s > 0;
}

std::optional<GroupElem> approximating_term(const ValueSequence& generators, const GroupElem& eps,
                                            std::size_t probe_budget) {
  if (eps.sign() <= 0) throw Error(ErrorCode::PreconditionViolated, "eps must be positive");
  const Segment seg = segment_from(generators);
  if (seg.has_minimum()) return seg.minimum();
  if (!seg.boundary()) return std::nullopt;
  const Boundary& b = *seg.boundary();
  const auto* prefix = prefix_of(generators);
  const long n1 = generators.first_index() + static_cast<long>(prefix ? prefix->size() : 0);
  if (b.closed) return generators.at(n1);
  for (std::size_t k = 0; k < probe_budget; ++k) {
    GroupElem t = generators.at(n1 + static_cast<long>(k));
    if (t - b.anchor < eps) return t;
  }
  return std::nullopt;
}

}  // namespace valkit
