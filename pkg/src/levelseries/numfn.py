"""Numerical functions f: Z -> Z^3, i -> (p_i, q_i, m_i).

A function is stored on a half-open window ``[lo, hi)``; it equals the left
tail ``(0, n, 0)`` below ``lo`` and the right tail ``(n, 0, 0)`` from ``hi``
on.  Construction trims stored values that coincide with the adjacent tail,
so equal functions have equal representations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

DEFAULT_BOUND = 10**6


class NumfnError(ValueError):
    """Domain error for numerical functions."""


class SearchBoundExceeded(NumfnError):
    pass


@dataclass(frozen=True)
class NumericalFunction:
    n: int
    lo: int
    hi: int
    values: tuple = ()

    def __post_init__(self):
        vals = [tuple(int(x) for x in v) for v in self.values]
        if self.n < 1:
            raise NumfnError(f"n must be positive, got {self.n}")
        if len(vals) != self.hi - self.lo or any(len(v) != 3 for v in vals):
            raise NumfnError(f"need {self.hi - self.lo} triples for window [{self.lo}, {self.hi})")
        lo, hi = self.lo, self.hi
        left, right = (0, self.n, 0), (self.n, 0, 0)
        while vals and vals[0] == left:
            vals.pop(0)
            lo += 1
        while vals and vals[-1] == right:
            vals.pop()
            hi -= 1
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "values", tuple(vals))

    @classmethod
    def from_dict(cls, n: int, values: dict) -> NumericalFunction:
        """Build from ``{i: (p, q, m)}`` over a contiguous range of indices."""
        if not values:
            raise NumfnError("empty value map; use NumericalFunction.jump")
        lo, hi = min(values), max(values) + 1
        missing = [i for i in range(lo, hi) if i not in values]
        if missing:
            raise NumfnError(f"indices {missing} missing from value map")
        return cls(n, lo, hi, tuple(values[i] for i in range(lo, hi)))

    @classmethod
    def jump(cls, n: int, at: int) -> NumericalFunction:
        """Tails only, switching to (n, 0, 0) at ``at``."""
        return cls(n, at, at, ())

    def __call__(self, i: int) -> tuple:
        if i < self.lo:
            return (0, self.n, 0)
        if i >= self.hi:
            return (self.n, 0, 0)
        return self.values[i - self.lo]

    def p(self, i):
        return self(i)[0]

    def q(self, i):
        return self(i)[1]

    def m(self, i):
        return self(i)[2]

    @property
    def m_sum(self) -> int:
        return sum(v[2] for v in self.values)

    def support(self) -> list[int]:
        return [i for i in range(self.lo, self.hi) if self(i)[2] > 0]

    def span(self, pad: int = 1) -> range:
        return range(self.lo - pad, self.hi + pad)

    def sort_key(self, start: int, stop: int) -> tuple:
        return tuple(self(i) for i in range(start, stop))


class Check(NamedTuple):
    ok: bool
    failure: str | None = None

    def __bool__(self):
        return self.ok


def is_admissible(f: NumericalFunction) -> Check:
    """Conditions (a)-(f) on p, q, m; reports the first one that fails."""
    n = f.n
    for i in f.span():
        p, q, m = f(i)
        if p + q + m != n:
            return Check(False, f"(a) p+q+m = {p + q + m} != {n} at i={i}")
        if min(p, q, m) < 0:
            return Check(False, f"(b) negative entry {f(i)} at i={i}")
    # (c) holds by construction of the tails
    for i in f.span():
        p0, q0, m0 = f(i)
        p1, q1, m1 = f(i + 1)
        if p0 + m0 > p1:
            return Check(False, f"(d) p_{i}+m_{i} = {p0 + m0} > p_{i + 1} = {p1}")
        if q1 + m1 > q0:
            return Check(False, f"(e) q_{i + 1}+m_{i + 1} = {q1 + m1} > q_{i} = {q0}")
    if f.m_sum > n:
        return Check(False, f"(f) sum of m = {f.m_sum} > {n}")
    return Check(True)


def is_exact_fn(f: NumericalFunction) -> bool:
    chk = is_admissible(f)
    if not chk:
        raise NumfnError(f"not admissible: {chk.failure}")
    for i in f.span():
        p0, q0, m0 = f(i)
        p1, q1, m1 = f(i + 1)
        if p0 + m0 != p1 or q1 + m1 != q0:
            return False
    return f.m_sum == f.n


def refine_fff(f: NumericalFunction, c: int, ell: int) -> NumericalFunction:
    """The exact refinement f' with f'(ci) = f(i); the jump between f(i) and
    f(i+1) is placed at slot ``ell`` of each block."""
    if c < 2 or not 1 <= ell <= c - 1:
        raise NumfnError(f"need c >= 2 and 1 <= ell <= c-1, got c={c}, ell={ell}")
    chk = is_admissible(f)
    if not chk:
        raise NumfnError(f"not admissible: {chk.failure}")
    lo, hi = f.lo - 1, f.hi + 1
    vals = {}
    for i in range(lo, hi):
        p0, q0, m0 = f(i)
        p1, q1, m1 = f(i + 1)
        vals[c * i] = (p0, q0, m0)
        for j in range(1, c):
            if j < ell:
                vals[c * i + j] = (p0 + m0, q0, 0)
            elif j == ell:
                vals[c * i + j] = (p0 + m0, q1 + m1, p1 - p0 - m0)
            else:
                vals[c * i + j] = (p1, q1 + m1, 0)
    return NumericalFunction(f.n, c * lo, c * (hi - 1) + 1, tuple(vals[k] for k in range(c * lo, c * (hi - 1) + 1)))


class Restriction(NamedTuple):
    function: NumericalFunction
    admissible: bool


def restrict(fp: NumericalFunction, c: int) -> Restriction:
    """f(i) = f'(ci).  Not raising on inadmissible results is deliberate: the
    flag tells the caller."""
    if c < 1:
        raise NumfnError(f"c must be positive, got {c}")
    lo = (fp.lo - 1) // c
    hi = (fp.hi + c) // c + 1
    f = NumericalFunction(fp.n, lo, hi, tuple(fp(c * i) for i in range(lo, hi)))
    return Restriction(f, bool(is_admissible(f)))


def _triples(n: int):
    return [(p, q, n - p - q) for p in range(n + 1) for q in range(n + 1 - p)]


def _block_chains(start: tuple, end: tuple, c: int, n: int, bound: int):
    """All admissible interior fillings (length c-1) between two values."""
    if c == 1:
        yield ()
        return
    opts = _triples(n)
    if len(opts) ** (c - 1) > bound:
        raise SearchBoundExceeded(f"block search space {len(opts)}^{c - 1} exceeds bound {bound}")

    def ok(a, b):
        return a[0] + a[2] <= b[0] and b[1] + b[2] <= a[1]

    def rec(prev, depth, acc):
        if depth == c - 1:
            if ok(prev, end):
                yield tuple(acc)
            return
        for t in opts:
            if ok(prev, t):
                acc.append(t)
                yield from rec(t, depth + 1, acc)
                acc.pop()

    yield from rec(start, 0, [])


def enumerate_refinements(f: NumericalFunction, c: int, bound: int = DEFAULT_BOUND) -> list[NumericalFunction]:
    """Every admissible f' with f = f'c, canonically sorted."""
    chk = is_admissible(f)
    if not chk:
        raise NumfnError(f"not admissible: {chk.failure}")
    if c == 1:
        return [f]
    n = f.n
    # only blocks touching the window can differ from the tails
    blocks = list(range(f.lo - 1, f.hi))
    per_block = [list(_block_chains(f(i), f(i + 1), c, n, bound)) for i in blocks]
    total = 1
    for b in per_block:
        total *= max(len(b), 1)
    if total > bound:
        raise SearchBoundExceeded(f"{total} candidate slot assignments exceed bound {bound}")
    budget = n - f.m_sum
    start, stop = c * blocks[0], c * blocks[-1] + c + 1
    out = []
    for combo in itertools.product(*per_block):
        extra = sum(t[2] for chain in combo for t in chain)
        if extra > budget:
            continue
        vals = {}
        for i, chain in zip(blocks, combo):
            vals[c * i] = f(i)
            for j, t in enumerate(chain, 1):
                vals[c * i + j] = t
        vals[c * (blocks[-1] + 1)] = f(blocks[-1] + 1)
        g = NumericalFunction(n, start, stop, tuple(vals[k] for k in range(start, stop)))
        if is_admissible(g):
            out.append(g)
    out.sort(key=lambda g: g.sort_key(start - 1, stop + 1))
    return out


def fiber_dimension(fp: NumericalFunction, c: int) -> int:
    """Relative dimension of the forgetful map over the stratum of f'c,
    restricted to the stratum of f'."""
    p, q, m = fp.p, fp.q, fp.m
    total = 0
    for i in range((fp.lo - 1) // c - 1, fp.hi // c + 2):
        b = c * i
        for j in range(1, c):
            total += (q(b + j - 1) - q(b + j)) * (p(b + c) - p(b + j) - m(b + j))
            total += (p(b + j + 1) - p(b + j)) * (q(b) - q(b + j) - m(b + j))
            total += m(b + j) * (p(b + j + 1) - p(b + j - 1) - m(b + j - 1))
    return total


def exact_fiber_dimension(fp: NumericalFunction, c: int) -> int:
    """sum_i (m_{ci+1} + ... + m_{ci+c-1})^2, the value for exact f'."""
    total = 0
    for i in range((fp.lo - 1) // c - 1, fp.hi // c + 2):
        total += sum(fp.m(c * i + j) for j in range(1, c)) ** 2
    return total


__all__ = [
    "Check",
    "DEFAULT_BOUND",
    "NumericalFunction",
    "NumfnError",
    "Restriction",
    "SearchBoundExceeded",
    "enumerate_refinements",
    "exact_fiber_dimension",
    "fiber_dimension",
    "is_admissible",
    "is_exact_fn",
    "refine_fff",
    "restrict",
]
