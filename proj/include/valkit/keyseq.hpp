#pragma once

// Key-polynomial sequences: explicit stages and lazy plateau families.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "valkit/poly.hpp"
#include "valkit/truncation.hpp"

namespace valkit {

struct KeyIndex {
  std::size_t stage = 0;
  long n = 0;

  friend bool operator==(const KeyIndex&, const KeyIndex&) = default;
  friend auto operator<=>(const KeyIndex&, const KeyIndex&) = default;
};

/// One member of a plateau family. Polynomial families carry Q_n and the
/// root approximant a_n; value-only families carry nu(Q_n) directly.
struct FamilyTerm {
  std::optional<Poly> Q;
  std::optional<FieldElem> approximant;
  std::optional<GroupElem> nuQ;
};

/// Lazily materialized family n -> Q_n, n >= first_index(). Terms are
/// memoized; concurrent first access yields the same term.
class PlateauFamily {
 public:
  virtual ~PlateauFamily() = default;

  virtual std::string kind() const = 0;
  virtual std::string describe() const = 0;
  virtual long first_index() const { return 0; }
  /// Largest index that may be materialized.
  virtual long max_index() const = 0;
  virtual bool value_only() const { return false; }
  /// Declared law for n -> nu(Q_n), verified by consumers.
  virtual std::optional<ValueSequence> declared_nu_law() const { return std::nullopt; }

  FamilyTerm term(long n) const;

 protected:
  virtual FamilyTerm compute(long n) const = 0;

 private:
  mutable std::recursive_mutex mu_;
  mutable std::map<long, FamilyTerm> memo_;
};

/// x - a_n with a_n = sum_{i<n} a^(1/p^i) - a over Hahn series; nu(x - a_n) = v(a)/p^n.
class ArtinSchreierFamily : public PlateauFamily {
 public:
  ArtinSchreierFamily(unsigned long p, HahnElem a);
  std::string kind() const override { return "artin_schreier"; }
  std::string describe() const override;
  long max_index() const override { return 60; }
  std::optional<ValueSequence> declared_nu_law() const override;
  /// x^p - x - a
  Poly minimal_polynomial() const;
  const HahnElem& a() const noexcept { return a_; }

 protected:
  FamilyTerm compute(long n) const override;

 private:
  unsigned long p_;
  HahnElem a_;
};

/// Newton iterates a_{n+1} = a_n - g(a_n)/g'(a_n) mod p^(2 v(g(a_n)) + 1)
/// for a monic g over p-adic rationals with a simple residue root.
class HenselFamily : public PlateauFamily {
 public:
  HenselFamily(Poly g, long residue);
  std::string kind() const override { return "hensel_lift"; }
  std::string describe() const override;
  long max_index() const override { return 18; }
  std::optional<ValueSequence> declared_nu_law() const override;

 protected:
  FamilyTerm compute(long n) const override;

 private:
  Poly g_;
  long residue_;
  long e0_;
};

/// Value-only family: nu(x - a_n) = s_n from a schedule.
class ScheduleFamily : public PlateauFamily {
 public:
  explicit ScheduleFamily(ValueSequence schedule);
  std::string kind() const override { return "schedule"; }
  std::string describe() const override { return "nu(x - a_n) = " + schedule_.describe(); }
  long first_index() const override { return schedule_.first_index(); }
  long max_index() const override;
  bool value_only() const override { return true; }
  std::optional<ValueSequence> declared_nu_law() const override;
  const ValueSequence& schedule() const noexcept { return schedule_; }

 protected:
  FamilyTerm compute(long n) const override;

 private:
  ValueSequence schedule_;
};

struct ExplicitStage {
  std::string label;
  Poly Q;
  std::optional<GroupElem> nuQ;
  std::optional<GroupElem> nuQprime;
};

struct PlateauStage {
  long degree = 1;
  std::shared_ptr<const PlateauFamily> family;
};

using KeyStage = std::variant<ExplicitStage, PlateauStage>;

class KeySequence {
 public:
  KeySequence(FieldSpec spec, std::vector<KeyStage> stages, Poly g, unsigned long p);

  const FieldSpec& spec() const noexcept { return spec_; }
  const std::vector<KeyStage>& stages() const noexcept { return stages_; }
  const Poly& g() const noexcept { return g_; }
  unsigned long residue_char() const noexcept { return p_; }
  long stage_degree(std::size_t stage) const;
  bool is_plateau(std::size_t stage) const;
  const PlateauFamily& family(std::size_t stage) const;
  bool value_only() const;

  /// Q_i for polynomial stages.
  Poly key_poly(const KeyIndex& i) const;
  std::string label(const KeyIndex& i) const;
  /// Indices of I* in order: explicit stages once, plateaus from first to
  /// first + count - 1 (capped by the family's max index).
  std::vector<KeyIndex> indices(std::size_t plateau_terms) const;

 private:
  FieldSpec spec_;
  std::vector<KeyStage> stages_;
  Poly g_;
  unsigned long p_;
};

/// nu(Q_i): supplied by the stage or the family, else computed by the oracle.
GroupElem key_value(const KeySequence& ks, const NuOracle* nu, const KeyIndex& i);
/// nu(Q_i').
Extended key_derivative_value(const KeySequence& ks, const NuOracle* nu, const KeyIndex& i);

struct NormalizedKey {
  KeyIndex index;
  Poly Q;
  FieldElem a;   // v(a) = nu(Q)
  Poly Qtilde;   // Q / a
};

/// Q~_i = Q_i / a_i with v(a_i) = nu(Q_i); ValueNotRepresentable if no such a_i.
std::vector<NormalizedKey> normalize(const KeySequence& ks, const NuOracle& nu, std::size_t plateau_terms);

struct CompletenessEntry {
  Poly f;
  Extended nu_f;
  std::optional<KeyIndex> witness;  // nullopt with witness_is_g means g itself
  bool witness_is_g = false;
  bool found = false;
};

/// For each f, the first key q with deg q <= deg f and nu_q(f) = nu(f).
std::vector<CompletenessEntry> completeness_probe(const KeySequence& ks, const NuOracle& nu,
                                                  const std::vector<Poly>& fs, std::size_t budget);

/// degree -> whether the keys of that degree have a last element.
std::map<long, bool> plateaus(const KeySequence& ks);

}  // namespace valkit
