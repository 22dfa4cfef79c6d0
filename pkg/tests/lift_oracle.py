"""Exhaustive enumeration of all lifts of a series to a finer level over F_p.

Subspaces are handled as sets of vectors; containment of images is checked
by applying the transition matrices to every element.
"""

from __future__ import annotations

from levelseries.curvemodel import CurveConfig, phi_dn_matrix, phi_up_matrix

from oracles import apply, span_set, subspace_sets


def _maps_into(Mrows, src: frozenset, dst: frozenset, p: int) -> bool:
    return all(apply(Mrows, v, p) in dst for v in src)


def all_lifts(g, c: int):
    """Every tuple (V^(0), ..., V^(c d delta)) at level c*delta that is a
    limit series and keeps V^(ci) = g.V[i]; subspaces as frozensets."""
    F = g.field
    p, d, n = F.p, g.config.d, g.r + 1
    cfg = CurveConfig(F, d, c * g.config.delta)
    amb = d + 1
    choices = subspace_sets(p, amb, n)
    fixed = [span_set(S.basis, p, amb) for S in g.V]
    up = {k: phi_up_matrix(cfg, k).entries for k in range(cfg.top)}
    dn = {k: phi_dn_matrix(cfg, k).entries for k in range(cfg.top)}

    def ok(k, a, b):
        # a at level k, b at level k+1
        return _maps_into(up[k], a, b, p) and _maps_into(dn[k], b, a, p)

    def block_chains(i):
        start, end = fixed[i], fixed[i + 1]
        out = []

        def rec(prev, j, acc):
            k = c * i + j
            if j == c:
                if ok(k - 1, prev, end):
                    out.append(tuple(acc))
                return
            for S in choices:
                if ok(k - 1, prev, S):
                    acc.append(S)
                    rec(S, j + 1, acc)
                    acc.pop()

        rec(start, 1, [])
        return out

    blocks = [block_chains(i) for i in range(g.config.top)]
    return fixed, blocks


def count_lifts(g, c: int) -> int:
    _, blocks = all_lifts(g, c)
    total = 1
    for b in blocks:
        total *= len(b)
    return total


def as_sets(series):
    p, amb = series.field.p, series.config.d + 1
    return [span_set(S.basis, p, amb) for S in series.V]


def first_lift_sets(g, c: int):
    fixed, blocks = all_lifts(g, c)
    out = []
    for i, chains in enumerate(blocks):
        out.append(fixed[i])
        out.extend(chains[0])
    out.append(fixed[-1])
    return out
