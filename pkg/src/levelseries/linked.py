"""Linked sequences of vector spaces.

A sequence of dimension ``n`` is stored on a finite window ``[lo, hi]``:
``up[k]`` is the matrix of ``h^(lo+k): V^(lo+k) -> V^(lo+k+1)`` and ``dn[k]``
that of ``h_(lo+k): V^(lo+k+1) -> V^(lo+k)``.  Outside the window the maps
follow the boundary convention

* ``i < lo``:  ``h_i = id``, ``h^i = 0``
* ``i >= hi``: ``h^i = id``, ``h_i = 0``

which realises the eventual-isomorphism axiom with the smallest window.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import NamedTuple

from .numfn import NumericalFunction
from .qlinalg import (
    Field,
    LinalgError,
    Matrix,
    Subspace,
    complement_and_graph,
    image,
    kernel,
    pivot_complement,
    random_subspace_between,
    rref,
    sum_intersect,
)


class SequenceError(ValueError):
    """Domain error: an axiom or precondition fails for a linked sequence."""


@dataclass(frozen=True)
class LinkedSequence:
    field: Field
    n: int
    lo: int
    hi: int
    up: tuple = ()
    dn: tuple = ()

    def __post_init__(self):
        if self.n < 0 or self.lo > self.hi:
            raise LinalgError(f"bad shape n={self.n}, window [{self.lo}, {self.hi}]")
        steps = self.hi - self.lo
        object.__setattr__(self, "up", tuple(self.up))
        object.__setattr__(self, "dn", tuple(self.dn))
        if len(self.up) != steps or len(self.dn) != steps:
            raise LinalgError(f"expected {steps} maps each way, got {len(self.up)} and {len(self.dn)}")
        for M in self.up + self.dn:
            if not isinstance(M, Matrix) or M.field != self.field or (M.rows, M.cols) != (self.n, self.n):
                raise LinalgError(f"every map must be an {self.n}x{self.n} matrix over {self.field}")

    def h_up(self, i: int) -> Matrix:
        """Matrix of h^i for any integer i."""
        if i < self.lo:
            return Matrix.zeros(self.field, self.n, self.n)
        if i >= self.hi:
            return Matrix.identity(self.field, self.n)
        return self.up[i - self.lo]

    def h_dn(self, i: int) -> Matrix:
        """Matrix of h_i for any integer i."""
        if i < self.lo:
            return Matrix.identity(self.field, self.n)
        if i >= self.hi:
            return Matrix.zeros(self.field, self.n, self.n)
        return self.dn[i - self.lo]

    @classmethod
    def boundary_only(cls, field: Field, n: int, at: int = 0) -> LinkedSequence:
        """Pure transition at ``at``: a single step where both maps vanish."""
        Z = Matrix.zeros(field, n, n)
        return cls(field, n, at, at + 1, (Z,), (Z,))


def violations(S: LinkedSequence) -> list[str]:
    """Axiom violations of S; empty iff S is a linked sequence."""
    out = []
    for i in range(S.lo - 1, S.hi + 1):
        up, dn = S.h_up(i), S.h_dn(i)
        if not (dn @ up).is_zero():
            out.append(f"(a) h_{i} h^{i} != 0")
        if not (up @ dn).is_zero():
            out.append(f"(a) h^{i} h_{i} != 0")
    for i in range(S.lo, S.hi + 1):
        _, meet = sum_intersect(kernel(S.h_up(i)), kernel(S.h_dn(i - 1)))
        if meet.dim:
            out.append(f"(b) Ker h^{i} and Ker h_{i - 1} meet in dimension {meet.dim}")
    return out


def validate(S: LinkedSequence) -> list[str]:
    return violations(S)


def _require_valid(S: LinkedSequence):
    bad = violations(S)
    if bad:
        raise SequenceError("not a linked sequence: " + "; ".join(bad))


def raw_profile(S: LinkedSequence) -> list[tuple[int, int, int]]:
    """(p_i, q_i, m_i) for i = lo..hi, untrimmed."""
    out = []
    for i in range(S.lo, S.hi + 1):
        p = kernel(S.h_dn(i - 1)).dim
        q = kernel(S.h_up(i)).dim
        out.append((p, q, S.n - p - q))
    return out


def numerical_profile(S: LinkedSequence) -> NumericalFunction:
    _require_valid(S)
    return NumericalFunction(S.n, S.lo, S.hi + 1, tuple(raw_profile(S)))


def m_total(S: LinkedSequence) -> int:
    return sum(m for _, _, m in raw_profile(S))


@dataclass
class ExactnessReport:
    exact: bool
    ranks: dict = dc_field(default_factory=dict)  # i -> (rk h^i, rk h_i)
    failure: tuple | None = None  # (condition, index)
    conditions: dict = dc_field(default_factory=dict)  # condition -> holds with equality everywhere

    def __bool__(self):
        return self.exact


def is_exact(S: LinkedSequence) -> ExactnessReport:
    """Exactness of S, with the rank data and the first failing characterisation.

    Each of the equality forms of (d), (e), (g) and the count ``sum m = n`` is
    evaluated separately, together with exactness of the complexes
    ``V^i -> V^(i+1) -> V^i`` computed from kernels and images.
    """
    _require_valid(S)
    n = S.n
    prof = NumericalFunction(n, S.lo, S.hi + 1, tuple(raw_profile(S)))
    rep = ExactnessReport(exact=True)
    first: dict[str, int | None] = {"d": None, "e": None, "g": None, "complex": None}
    for i in range(S.lo - 1, S.hi + 1):
        up, dn = S.h_up(i), S.h_dn(i)
        ru, rd = up.rank, dn.rank
        rep.ranks[i] = (ru, rd)
        p0, q0, m0 = prof(i)
        p1, q1, m1 = prof(i + 1)
        if first["d"] is None and p0 + m0 != p1:
            first["d"] = i
        if first["e"] is None and q1 + m1 != q0:
            first["e"] = i
        if first["g"] is None and ru + rd != n:
            first["g"] = i
        if first["complex"] is None and (kernel(dn) != image(up) or kernel(up) != image(dn)):
            first["complex"] = i
    total = sum(prof(i)[2] for i in range(S.lo, S.hi + 1))
    rep.conditions = {k: v is None for k, v in first.items()}
    rep.conditions["f"] = total == n
    rep.exact = rep.conditions["complex"]
    for cond in ("d", "e", "f", "g"):
        if not rep.conditions[cond]:
            rep.failure = (cond, first.get(cond))
            break
    return rep


def truncate(S: LinkedSequence, m: int) -> LinkedSequence:
    """Elementary truncation at m: V^(m+1) is dropped and the two steps
    around it are composed."""
    _require_valid(S)
    new_lo = S.lo - 1 if m < S.lo else S.lo
    new_hi = S.hi - 1 if m < S.hi - 1 else S.hi
    up, dn = [], []
    for j in range(new_lo, new_hi):
        if j < m:
            up.append(S.h_up(j))
            dn.append(S.h_dn(j))
        elif j == m:
            up.append(S.h_up(m + 1) @ S.h_up(m))
            dn.append(S.h_dn(m) @ S.h_dn(m + 1))
        else:
            up.append(S.h_up(j + 1))
            dn.append(S.h_dn(j + 1))
    out = LinkedSequence(S.field, S.n, new_lo, new_hi, tuple(up), tuple(dn))
    _require_valid(out)
    return out


def deficient_indices(S: LinkedSequence) -> list[int]:
    return [i for i in range(S.lo, S.hi) if S.h_up(i).rank + S.h_dn(i).rank < S.n]


def expand_once(S: LinkedSequence, i: int) -> LinkedSequence:
    """Insert a space between V^(i) and V^(i+1) so that the new sequence
    truncates back to S at i and has strictly larger m."""
    _require_valid(S)
    f, n = S.field, S.n
    up, dn = S.h_up(i), S.h_dn(i)
    if up.rank + dn.rank >= n:
        raise SequenceError(f"nothing to expand at index {i}: rk h^{i} + rk h_{i} = {n}")
    ker_up, ker_dn = kernel(up), kernel(dn)
    im_dn, im_up = image(dn), image(up)
    _, _, K = complement_and_graph(im_dn, ker_up, im_up, ker_dn)
    zeros = (0,) * n
    W = Subspace.span(
        f,
        2 * n,
        [v + zeros for v in im_dn.basis] + [zeros + v for v in im_up.basis] + list(K.basis),
    )
    if W.dim != n:
        raise AssertionError(f"inserted space has dimension {W.dim}, expected {n}")
    # W is coordinatised by its echelon basis
    to_prev = Matrix.from_columns(f, [b[:n] for b in W.basis], n)  # W -> V^i
    to_next = Matrix.from_columns(f, [b[n:] for b in W.basis], n)  # W -> V^(i+1)
    from_prev = Matrix.from_columns(f, [W.coordinates(zeros + up.apply(e)) for e in _units(f, n)], n)
    from_next = Matrix.from_columns(f, [W.coordinates(dn.apply(e) + zeros) for e in _units(f, n)], n)
    ups, dns = [], []
    for j in range(S.lo, S.hi + 1):
        if j < i:
            ups.append(S.h_up(j))
            dns.append(S.h_dn(j))
        elif j == i:
            ups += [from_prev, to_next]
            dns += [to_prev, from_next]
        elif j < S.hi:
            ups.append(S.h_up(j))
            dns.append(S.h_dn(j))
    return LinkedSequence(f, n, S.lo, S.hi + 1, tuple(ups), tuple(dns))


def _units(f: Field, n: int):
    return [tuple(int(k == j) for k in range(n)) for j in range(n)]


class Expansion(NamedTuple):
    sequence: LinkedSequence
    schedule: list  # truncation indices, in the order they must be applied


def expand_to_exact(S: LinkedSequence) -> Expansion:
    _require_valid(S)
    inserted = []
    cur = S
    while True:
        bad = deficient_indices(cur)
        if not bad:
            break
        cur = expand_once(cur, bad[0])
        inserted.append(bad[0])
    return Expansion(cur, inserted[::-1])


def apply_schedule(S: LinkedSequence, schedule) -> LinkedSequence:
    for m in schedule:
        S = truncate(S, m)
    return S


def random_linked_sequence(field: Field, n: int, steps: int, seed: int, lo: int = 0) -> LinkedSequence:
    """Random valid sequence over F_p with ``steps`` stored steps.

    Each step picks Ker h^i meeting Ker h_(i-1) trivially, then h^i with that
    kernel, then Ker h_i containing Im h^i, then h_i with image in Ker h^i.
    """
    rng = random.Random(f"linked:{field.p}:{n}:{steps}:{seed}:{lo}")
    full = Subspace.full(field, n)
    zero = Subspace.zero(field, n)
    left_ker = zero
    ups, dns = [], []
    for _ in range(steps):
        q = rng.randint(0, n - left_ker.dim)
        while True:
            Q = random_subspace_between(zero, full, q, rng)
            if sum_intersect(Q, left_ker)[1].dim == 0:
                break
        up = _map_with_kernel(Q, random_subspace_between(zero, full, n - q, rng), rng)
        im_up = image(up)
        P = random_subspace_between(im_up, full, rng.randint(n - q, n), rng)
        dn = _map_with_kernel(P, random_subspace_between(zero, Q, n - P.dim, rng), rng)
        ups.append(up)
        dns.append(dn)
        left_ker = P
    return LinkedSequence(field, n, lo, lo + steps, tuple(ups), tuple(dns))


def _map_with_kernel(K: Subspace, target: Subspace, rng: random.Random) -> Matrix:
    """Random matrix with kernel exactly K and image exactly ``target``."""
    f = K.field
    n = K.ambient
    comp = list(pivot_complement(K, Subspace.full(f, n)).basis)
    if len(comp) != target.dim:
        raise AssertionError("kernel and image dimensions do not add up")
    # random isomorphism comp -> target
    while True:
        rows = [[rng.randrange(f.p) for _ in range(target.dim)] for _ in range(target.dim)]
        imgs = [target.combine(r) for r in rows]
        if Subspace.span(f, n, imgs).dim == target.dim:
            break
    # domain basis: K basis (-> 0) and complement vectors (-> imgs); solve M * D = T
    D = Matrix.from_columns(f, list(K.basis) + comp, n)
    T = Matrix.from_columns(f, [(0,) * n] * K.dim + imgs, n)
    return T @ _inverse(D)


def _inverse(M: Matrix) -> Matrix:
    f = M.field
    n = M.rows
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M.entries)]
    rows, pivots = rref(f, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise LinalgError("matrix is singular")
    return Matrix.from_rows(f, [r[n:] for r in rows[:n]], n)


__all__ = [
    "Expansion",
    "ExactnessReport",
    "LinkedSequence",
    "SequenceError",
    "apply_schedule",
    "deficient_indices",
    "expand_once",
    "expand_to_exact",
    "is_exact",
    "m_total",
    "numerical_profile",
    "random_linked_sequence",
    "raw_profile",
    "truncate",
    "validate",
    "violations",
]
