#pragma once

// The valuation nu on K[x] with support (g) and its truncations nu_q.

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "valkit/errors.hpp"
#include "valkit/poly.hpp"

namespace valkit {

/// Raised when stabilization finds no window of agreeing values.
class StabilizationError : public Error {
 public:
  StabilizationError(const std::string& what, std::vector<Extended> trace)
      : Error(ErrorCode::StabilizationBudgetExceeded, what), trace_(std::move(trace)) {}
  const std::vector<Extended>& trace() const noexcept { return trace_; }

 private:
  std::vector<Extended> trace_;
};

class NuOracle {
 public:
  /// Value of a nonzero polynomial of degree < deg g.
  using Evaluator = std::function<Extended(const Poly&)>;
  /// Approximant a_m of the root, for m >= first.
  using Approximants = std::function<FieldElem(long)>;

  static constexpr std::size_t kDefaultWindow = 3;
  static constexpr std::size_t kDefaultBudget = 64;

  static NuOracle evaluation(Poly g, Evaluator eval, std::string description);
  static NuOracle stabilization(Poly g, Approximants approximants, long first, std::size_t window = kDefaultWindow,
                                std::size_t budget = kDefaultBudget, std::string description = "stabilization");

  const Poly& g() const noexcept { return g_; }
  bool is_stabilization() const noexcept { return !eval_; }
  const std::string& description() const noexcept { return description_; }

  /// nu(f) = v(f_0(eta)) where f_0 = f mod g.
  Extended nu(const Poly& f) const;
  /// The value sequence v(f_0(a_m)) probed by stabilization mode.
  std::vector<Extended> trace(const Poly& f, std::size_t count) const;

 private:
  NuOracle(Poly g) : g_(std::move(g)) {}
  Extended nu_reduced(const Poly& f0) const;

  Poly g_;
  Evaluator eval_;
  Approximants approximants_;
  long first_ = 0;
  std::size_t window_ = kDefaultWindow;
  std::size_t budget_ = kDefaultBudget;
  std::string description_;

  // pure cache keyed by the printed reduced polynomial
  struct Cache {
    std::mutex mu;
    std::unordered_map<std::string, Extended> values;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// min_i nu(f_i) + i nu(q) over the q-expansion; nu(q) must be finite.
Extended nu_q(const NuOracle& nu, const Poly& f, const Poly& q);
/// Same with nu(q) supplied.
Extended nu_q(const NuOracle& nu, const Poly& f, const Poly& q, const GroupElem& nu_of_q);

/// nu(f) = v(N(f)) / deg g. Valid when v extends uniquely to K[x]/(g).
NuOracle norm_model(const Poly& g);

/// Monic quadratic g over p-adic rationals whose roots have distinct
/// residues; eta is the root with residue `residue` mod p.
NuOracle quadratic_root_model(const Poly& g, long residue);

/// Residue of an integral p-adic rational in F_p.
unsigned long residue_mod_p(const Rational& x, unsigned long p);

}  // namespace valkit
