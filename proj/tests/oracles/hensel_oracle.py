#!/usr/bin/env python3
"""Independent oracle for the immediate 2-adic example g = x^2 + x + 2.

The root eta (eta = 0 mod 2) is computed to high precision by digit-by-digit
lifting; values nu(f) = v_2(f(eta)) are read off exactly. The key family is
the Newton sequence a_0 = 0, a_{n+1} = a_n - g(a_n)/g'(a_n) reduced modulo
2^(2 v(g(a_n)) + 1). Writes golden per-index values as JSON.
"""
import json
import sys

P = 2
PREC = 1 << 14


def v(x):
    if x == 0:
        return None
    k = 0
    while x % P == 0:
        x //= P
        k += 1
    return k


def g(x):
    return x * x + x + 2


def root():
    eta = 0
    for k in range(1, PREC):
        if g(eta) % P ** (k + 1) != 0:
            eta += P ** k
    assert g(eta) % P ** PREC == 0
    return eta


def family(count):
    a = [0]
    while len(a) < count:
        an = a[-1]
        prec = P ** (2 * v(g(an)) + 1)
        inv = pow(2 * an + 1, -1, prec)
        a.append((an - g(an) * inv) % prec)
    return a


def main():
    eta = root()
    rows = []
    for n, an in enumerate(family(12)):
        nu_q = v(eta - an)
        # g(y + a) = y^2 + (2a + 1) y + g(a)
        nu_g = min(v(g(an)), v(2 * an + 1) + nu_q, 2 * nu_q)
        # g'(y + a) = 2 y + (2a + 1)
        nu_gprime_n = min(v(2 * an + 1), v(2) + nu_q)
        nu_gprime = v(2 * eta + 1)
        rows.append({
            "n": n,
            "nu_Q": str(nu_q),
            "alpha": str(-nu_q),
            "nu_g": str(nu_g),
            "nu_gprime": str(nu_gprime_n),
            "beta": str(nu_gprime - nu_g),
            "beta_tilde": str(nu_gprime_n - nu_g),
        })
    # ground truth for the evaluation model: nu(b0 + b1 x) = v(b0 + b1 eta)
    samples = []
    for b0 in range(-12, 13):
        for b1 in (1, 2, 3, 4, 6, 8):
            val = v(b0 + b1 * eta)
            samples.append({"b0": b0, "b1": b1, "nu": str(val)})
    json.dump({"rows": rows, "linear_values": samples}, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
