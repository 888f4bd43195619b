#!/usr/bin/env python3
"""Recompute the exponent table with exact rational arithmetic.

Independent cross-check for the floating-point implementation in
dampedwave.exponents: every quantity is rebuilt here from fractions, so
the two paths share no code.  Values print as ``name = float`` with
repr precision; rational inputs give exactly representable outputs for
the cases used in the tests.

Usage:
    exponent_crosscheck.py --dim N --p P [--lambda LAM]

P and LAM accept fractions like 7/2.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def fujita(dim: int) -> Fraction:
    return 1 + Fraction(2, dim)


def q_exponent(dim: int, p: Fraction) -> Fraction:
    return max(Fraction(2), Fraction(dim, 2) * (p - 1))


def threshold(dim: int, p: Fraction) -> Fraction:
    pf = fujita(dim)
    if p <= pf:
        raise SystemExit(f"p = {p} is not above the critical power {pf}")
    if dim >= 3 and p > Fraction(dim, dim - 2):
        raise SystemExit(f"p = {p} is above the admissible upper bound")
    q = q_exponent(dim, p)
    gap = p - pf
    candidates = [
        Fraction(1),
        Fraction(dim, 2),
        Fraction(2 * dim - (dim - 2) * p, 2 * p),
        (2 * dim - Fraction(8, dim) - (dim - 2) * p) / (4 * gap),
        Fraction(q - 1, q) * (dim + 2 - (dim - 2) * p) / (2 * gap),
    ]
    return max(candidates)


def table(dim: int, p: Fraction, lam: Fraction) -> dict[str, Fraction]:
    q = q_exponent(dim, p)
    theta_gn = Fraction(dim) * (p - 1) / (2 * (p + 1))
    mu = dim * (Fraction(1, 2) - 1 / q)
    theta_weighted = (
        1 / (p + 1) + 2 * lam / (dim * (p + 1)) - 1 / q
    ) / (Fraction(1, 2) - 1 / q + (lam - 1) / dim)
    if p < 2:
        theta_lp = dim * (2 - p) / (2 * p * (lam - 1))
        budget_lp = lam * p * theta_lp / 2 - Fraction(dim, 4) * p * (1 - theta_lp)
    else:
        theta_lp = dim * (p - 2) / (2 * p)
        budget_lp = -(Fraction(dim, 4) + Fraction(1, 2)) * p * theta_lp - Fraction(
            dim, 4
        ) * p * (1 - theta_lp)
    theta_l2p = dim * (p - 1) / (2 * p)
    budget_weighted = lam * ((p + 1) * theta_weighted / 2 - 1) - (
        Fraction(dim, 4) + mu / 2
    ) * (1 - theta_weighted) * (p + 1)
    budget_l2p = -(Fraction(dim, 4) + Fraction(1, 2)) * p * theta_l2p - Fraction(
        dim, 4
    ) * p * (1 - theta_l2p)
    return {
        "p_fujita": fujita(dim),
        "q": q,
        "lambda_min": threshold(dim, p),
        "theta_gn": theta_gn,
        "theta_weighted": theta_weighted,
        "mu": mu,
        "theta_lp": theta_lp,
        "theta_l2p": theta_l2p,
        "budget_weighted": budget_weighted,
        "budget_lp": budget_lp,
        "budget_l2p": budget_l2p,
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dim", type=int, required=True)
    parser.add_argument("--p", type=parse_fraction, required=True)
    parser.add_argument("--lambda", dest="lam", type=parse_fraction, default=None)
    args = parser.parse_args(argv)

    lam = args.lam
    if lam is None:
        lam = threshold(args.dim, args.p) * Fraction(11, 10)
    values = table(args.dim, args.p, lam)
    for name, value in values.items():
        print(f"{name} = {float(value)!r}")
    checks = {
        "budget_weighted_negative": values["budget_weighted"] < 0,
        "budget_lp_below_minus_one": values["budget_lp"] < -1,
        "budget_l2p_below_minus_one": values["budget_l2p"] < -1,
    }
    ok = True
    for name, passed in checks.items():
        print(f"{name} = {passed}")
        ok = ok and passed
    for name in ("theta_gn", "theta_weighted", "mu", "theta_lp", "theta_l2p"):
        in_range = 0 <= values[name] <= 1
        print(f"{name}_in_unit_interval = {in_range}")
        ok = ok and in_range
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
