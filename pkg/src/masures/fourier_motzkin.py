"""Exact feasibility of small linear systems by Fourier-Motzkin elimination.

A constraint is (coeffs, const, strict) meaning coeffs . v + const >= 0,
with > instead of >= when strict.  Dimensions and constraint counts stay
small here (apartment dimensions, a few dozen half-spaces), which is the
regime where Fourier-Motzkin is simpler and more trustworthy than a
simplex implementation.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Sequence

Constraint = tuple[tuple[Q, ...], Q, bool]


def _normalized(c: Constraint) -> Constraint:
    coeffs, const, strict = c
    lead = next((abs(x) for x in coeffs if x != 0), None)
    if lead is None:
        return c
    return tuple(x / lead for x in coeffs), const / lead, strict


def _combine(p: Constraint, n: Constraint, k: int) -> Constraint:
    # p has positive coefficient on var k, n negative; eliminate var k
    pc, pconst, pstrict = p
    nc, nconst, nstrict = n
    a, b = pc[k], -nc[k]
    coeffs = tuple(a * nc[i] + b * pc[i] for i in range(len(pc)))
    return coeffs, a * nconst + b * pconst, pstrict or nstrict


def feasible(constraints: Sequence[Constraint], dim: int) -> tuple[Q, ...] | None:
    """An exact rational point satisfying every constraint, or None."""
    current: dict[Constraint, None] = {}
    for c in constraints:
        coeffs, const, strict = c
        if len(coeffs) != dim:
            raise ValueError(f"constraint of arity {len(coeffs)}, expected {dim}")
        current[_normalized((tuple(Q(x) for x in coeffs), Q(const), strict))] = None

    stages: list[tuple[int, list[Constraint], list[Constraint]]] = []
    rows = list(current)
    for k in range(dim - 1, -1, -1):
        pos = [r for r in rows if r[0][k] > 0]
        neg = [r for r in rows if r[0][k] < 0]
        zero = [r for r in rows if r[0][k] == 0]
        stages.append((k, pos, neg))
        fresh: dict[Constraint, None] = {r: None for r in zero}
        for p in pos:
            for n in neg:
                fresh[_normalized(_combine(p, n, k))] = None
        rows = list(fresh)

    for coeffs, const, strict in rows:
        if strict and not const > 0:
            return None
        if not strict and const < 0:
            return None

    witness = [Q(0)] * dim
    for k, pos, neg in reversed(stages):
        lower = None  # (value, strict)
        upper = None
        for coeffs, const, strict in pos:
            rest = sum((coeffs[i] * witness[i] for i in range(dim) if i != k), Q(0))
            bound = -(rest + const) / coeffs[k]
            if lower is None or bound > lower[0] or (bound == lower[0] and strict):
                lower = (bound, strict)
        for coeffs, const, strict in neg:
            rest = sum((coeffs[i] * witness[i] for i in range(dim) if i != k), Q(0))
            bound = -(rest + const) / coeffs[k]
            if upper is None or bound < upper[0] or (bound == upper[0] and strict):
                upper = (bound, strict)
        if lower is None and upper is None:
            value = Q(0)
        elif upper is None:
            value = lower[0] + 1
        elif lower is None:
            value = upper[0] - 1
        elif lower[0] == upper[0]:
            value = lower[0]  # elimination guarantees both bounds non-strict here
        else:
            value = (lower[0] + upper[0]) / 2
        witness[k] = value
    return tuple(witness)
