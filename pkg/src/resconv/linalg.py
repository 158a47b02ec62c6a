"""Exact rational linear algebra used by the decision procedures.

Everything here works over `fractions.Fraction`; no floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

F0 = Fraction(0)
F1 = Fraction(1)

Vec = tuple[Fraction, ...]


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(u, v)), F0)


def in_span(vectors: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> bool:
    """Is `target` a rational linear combination of `vectors`?"""
    rows = [list(v) for v in vectors]
    t = list(target)
    ncols = len(t)
    pivot_cols: list[int] = []
    reduced: list[list[Fraction]] = []
    for row in rows:
        r = row[:]
        for pc, pr in zip(pivot_cols, reduced):
            if r[pc] != 0:
                f = r[pc]
                r = [a - f * b for a, b in zip(r, pr)]
        lead = next((j for j in range(ncols) if r[j] != 0), None)
        if lead is None:
            continue
        inv = F1 / r[lead]
        r = [a * inv for a in r]
        pivot_cols.append(lead)
        reduced.append(r)
    for pc, pr in zip(pivot_cols, reduced):
        if t[pc] != 0:
            f = t[pc]
            t = [a - f * b for a, b in zip(t, pr)]
    return all(a == 0 for a in t)


def orthogonal_residual(vectors: Sequence[Sequence[Fraction]],
                        target: Sequence[Fraction]) -> Vec | None:
    """Component of `target` orthogonal to span(vectors), or None if zero.

    Gram-Schmidt without square roots: orthogonal (not orthonormal)
    basis vectors keep all arithmetic rational.  The residual w satisfies
    w . v = 0 for every v in the span and w . target = |w|^2 > 0, so it
    certifies that target lies outside the span.
    """
    basis: list[list[Fraction]] = []
    for v in vectors:
        r = list(v)
        for u in basis:
            denom = dot(u, u)
            if denom != 0:
                c = dot(r, u) / denom
                r = [a - c * b for a, b in zip(r, u)]
        if any(a != 0 for a in r):
            basis.append(r)
    r = list(target)
    for u in basis:
        denom = dot(u, u)
        if denom != 0:
            c = dot(r, u) / denom
            r = [a - c * b for a, b in zip(r, u)]
    if all(a == 0 for a in r):
        return None
    return tuple(r)


def feasible_nonneg_solution(equations: Sequence[Sequence[Fraction]],
                             rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve A x = b, x >= 0 exactly, or return None when infeasible.

    Phase-1 simplex with Bland's rule (least index), which terminates on
    every rational input.  The returned solution is basic, so at most
    len(equations) entries are nonzero.
    """
    m = len(equations)
    if m == 0:
        return []
    n = len(equations[0])
    # Tableau rows: [A | I | b] with b made non-negative.
    tab: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(x) for x in equations[i]]
        b = Fraction(rhs[i])
        if b < 0:
            row = [-x for x in row]
            b = -b
        art = [F1 if j == i else F0 for j in range(m)]
        tab.append(row + art + [b])
    basis = [n + i for i in range(m)]
    total = n + m
    # Objective: minimize sum of artificials.  Start from the raw cost row
    # (1 on artificial columns) and eliminate the basic columns.
    cost = [F0] * (total + 1)
    for k in range(m):
        cost[n + k] = F1
    for i in range(m):
        cost = [x - y for x, y in zip(cost, tab[i])]

    while True:
        enter = next((j for j in range(total) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][total] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            # Unbounded phase-1 objective cannot happen; defensive guard.
            return None
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [x - f * y for x, y in zip(cost, tab[leave])]
        basis[leave] = enter

    if -cost[total] != 0:
        return None
    x = [F0] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = tab[i][total]
        elif tab[i][total] != 0:
            return None  # artificial stuck at a nonzero level
    return x
