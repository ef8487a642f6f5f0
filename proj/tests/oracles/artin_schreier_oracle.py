#!/usr/bin/env python3
"""Independent oracle for the Artin-Schreier scenario.

Works directly with truncations of the root eta = sum_{i>=1} a^(1/p^i) of
g = x^p - x - a over F_p((t^Q)), a = t^va, instead of probing values along
the key-polynomial family. Writes golden per-index values as JSON.

Key family: Q_n = x - a_n, a_n = sum_{i=0}^{n-1} a^(1/p^i) - a.
"""
import json
import sys
from fractions import Fraction
from math import comb


def hadd(x, y, p):
    out = dict(x)
    for e, c in y.items():
        out[e] = (out.get(e, 0) + c) % p
        if out[e] == 0:
            del out[e]
    return out


def hneg(x, p):
    return {e: (-c) % p for e, c in x.items()}


def hmul(x, y, p):
    out = {}
    for e1, c1 in x.items():
        for e2, c2 in y.items():
            e = e1 + e2
            out[e] = (out.get(e, 0) + c1 * c2) % p
            if out[e] == 0:
                del out[e]
    return out


def hval(x):
    return min(x) if x else None


def mono(e, c=1):
    return {Fraction(e): c}


def scenario(p, va, terms):
    a = mono(va)
    depth = terms + 40
    eta = {}
    for i in range(1, depth + 1):
        eta = hadd(eta, mono(Fraction(va, p**i)), p)

    rows = []
    for n in range(terms):
        an = hneg(a, p)
        for i in range(n):
            an = hadd(an, mono(Fraction(va, p**i)), p)
        nu_q = hval(hadd(eta, hneg(an, p), p))
        # Taylor shift of g(x) = x^p - x - a around a_n: coefficients of y^j.
        powers = [{Fraction(0): 1}]
        for _ in range(p):
            powers.append(hmul(powers[-1], an, p))
        coeffs = []
        for j in range(p + 1):
            c = {}
            # from x^p
            c = hadd(c, {e: (v * comb(p, j)) % p for e, v in powers[p - j].items() if (v * comb(p, j)) % p}, p)
            if j == 0:
                c = hadd(c, hneg(an, p), p)
                c = hadd(c, hneg(a, p), p)
            if j == 1:
                c = hadd(c, mono(0, p - 1), p)
            coeffs.append(c)
        vals = [hval(c) + j * nu_q for j, c in enumerate(coeffs) if c]
        nu_g = min(vals)
        # g' = p x^(p-1) - 1 = -1 in characteristic p: both nu(g') and nu_n(g') are v(-1) = 0.
        gprime_shift = [mono(0, p - 1)]
        nu_gprime_n = min(hval(c) + j * nu_q for j, c in enumerate(gprime_shift) if c)
        nu_gprime = hval(mono(0, p - 1))
        rows.append({
            "n": n,
            "nu_Q": str(nu_q),
            "alpha": str(-nu_q),
            "nu_g": str(nu_g),
            "nu_gprime": str(nu_gprime_n),
            "beta": str(nu_gprime - nu_g),
            "beta_tilde": str(nu_gprime_n - nu_g),
        })
    return rows


def main():
    out = {}
    for p in (2, 3):
        out[f"p{p}"] = scenario(p, -1, 12)
    json.dump(out, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
