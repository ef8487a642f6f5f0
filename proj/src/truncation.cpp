#include "valkit/truncation.hpp"

#include "valkit/errors.hpp"

namespace valkit {

NuOracle NuOracle::evaluation(Poly g, Evaluator eval, std::string description) {
  if (!g.is_monic() || g.degree() < 1) throw Error(ErrorCode::NonMonicBase, "g must be monic of degree >= 1");
  NuOracle o(std::move(g));
  o.eval_ = std::move(eval);
  o.description_ = std::move(description);
  return o;
}

NuOracle NuOracle::stabilization(Poly g, Approximants approximants, long first, std::size_t window,
                                 std::size_t budget, std::string description) {
  if (!g.is_monic() || g.degree() < 1) throw Error(ErrorCode::NonMonicBase, "g must be monic of degree >= 1");
  if (window == 0 || budget < window) throw Error(ErrorCode::ConfigError, "need 0 < window <= budget");
  NuOracle o(std::move(g));
  o.approximants_ = std::move(approximants);
  o.first_ = first;
  o.window_ = window;
  o.budget_ = budget;
  o.description_ = std::move(description);
  return o;
}

Extended NuOracle::nu(const Poly& f) const {
  Poly quot(g_.spec()), f0(g_.spec());
  Poly::divmod(f, g_, quot, f0);
  if (f0.is_zero()) return Extended::infinity();
  if (f0.is_constant()) return f0.lead().valuation();
  const std::string key = f0.to_string();
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (auto it = cache_->values.find(key); it != cache_->values.end()) return it->second;
  }
  const Extended value = nu_reduced(f0);
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->values.emplace(key, value);
  return value;
}

std::vector<Extended> NuOracle::trace(const Poly& f, std::size_t count) const {
  if (!approximants_) throw Error(ErrorCode::PreconditionViolated, "trace needs a stabilization oracle");
  Poly quot(g_.spec()), f0(g_.spec());
  Poly::divmod(f, g_, quot, f0);
  std::vector<Extended> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(f0.evaluate(approximants_(first_ + static_cast<long>(k))).valuation());
  return out;
}

Extended NuOracle::nu_reduced(const Poly& f0) const {
  if (eval_) return eval_(f0);
  std::vector<Extended> seen;
  std::size_t run = 0;
  for (std::size_t k = 0; k < budget_; ++k) {
    Extended value = f0.evaluate(approximants_(first_ + static_cast<long>(k))).valuation();
    run = (!seen.empty() && seen.back() == value) ? run + 1 : 1;
    seen.push_back(std::move(value));
    if (run >= window_) return seen.back();
  }
  std::string msg = "no " + std::to_string(window_) + " consecutive equal values of v(f(a_m)) for f = " +
                    f0.to_string() + " within " + std::to_string(budget_) + " terms; trace:";
  for (const auto& v : seen) msg += " " + v.to_string();
  throw StabilizationError(msg, std::move(seen));
}

Extended nu_q(const NuOracle& nu, const Poly& f, const Poly& q, const GroupElem& nu_of_q) {
  const QExpansion e = q_expand(f, q);
  std::optional<Extended> best;
  for (std::size_t i = 0; i < e.coeffs.size(); ++i) {
    if (e.coeffs[i].is_zero()) continue;
    Extended term = nu.nu(e.coeffs[i]) + Extended(nu_of_q.scaled(Rational(static_cast<long>(i))));
    if (!best || term < *best) best = std::move(term);
  }
  return best ? *best : Extended::infinity();
}

Extended nu_q(const NuOracle& nu, const Poly& f, const Poly& q) {
  const Extended vq = nu.nu(q);
  if (vq.is_infinite()) throw Error(ErrorCode::PreconditionViolated, "truncation at q with nu(q) = infinity");
  return nu_q(nu, f, q, vq.finite());
}

NuOracle norm_model(const Poly& g) {
  const Rational deg(g.degree());
  return NuOracle::evaluation(
      g,
      [g, deg](const Poly& f0) -> Extended {
        const Extended v = norm(f0, g).valuation();
        if (v.is_infinite()) return v;
        return GroupElem(v.finite()[0] / deg);
      },
      "norm form");
}

unsigned long residue_mod_p(const Rational& x, unsigned long p) {
  const Integer P(p);
  Integer den = x.get_den() % P;
  if (den == 0) throw Error(ErrorCode::PreconditionViolated, "residue of a non-integral element");
  Integer inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t());
  Integer r = (Integer(x.get_num()) * inv) % P;
  if (r < 0) r += P;
  return r.get_ui();
}

NuOracle quadratic_root_model(const Poly& g, long residue) {
  const FieldSpec& k = g.spec();
  if (k.backend != Backend::PAdic || g.degree() != 2 || !g.is_monic())
    throw Error(ErrorCode::PreconditionViolated, "quadratic root model needs a monic quadratic over p-adic rationals");
  const unsigned long p = k.p;
  const Rational c0 = std::get<PAdicRational>(g.coeff(0).repr()).value();
  const Rational c1 = std::get<PAdicRational>(g.coeff(1).repr()).value();
  if (padic_exponent(c0 == 0 ? Rational(1) : c0, p) < 0 || padic_exponent(c1 == 0 ? Rational(1) : c1, p) < 0)
    throw Error(ErrorCode::PreconditionViolated, "quadratic root model needs integral coefficients");
  const unsigned long r = mod_reduce(residue, p);
  if ((residue_mod_p(c0, p) + residue_mod_p(c1, p) * r + r * r) % p != 0)
    throw Error(ErrorCode::PreconditionViolated, "residue " + std::to_string(r) + " is not a root of g mod p");
  const unsigned long other = mod_reduce(-static_cast<long>(residue_mod_p(c1, p)) - static_cast<long>(r), p);
  if (other == r) throw Error(ErrorCode::PreconditionViolated, "roots of g share a residue");
  return NuOracle::evaluation(
      g,
      [g, p, other](const Poly& f0) -> Extended {
        // f0 = b0 + b1 x = b1 (x - c)
        const FieldElem b1 = f0.coeff(1);
        const FieldElem c = -f0.coeff(0) / b1;
        const Extended vb1 = b1.valuation();
        const Extended vc = c.valuation();
        if (vc.is_finite() && vc.finite().sign() < 0) return vb1 + vc;
        const Rational cv = std::get<PAdicRational>(c.repr()).value();
        if (residue_mod_p(cv, p) == other) return vb1;
        return vb1 + g.evaluate(c).valuation();
      },
      "separated quadratic root");
}

}  // namespace valkit
