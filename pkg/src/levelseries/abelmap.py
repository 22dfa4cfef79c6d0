"""Divisors of sections, the degree-d Abel map, and the loci P(g) over F_p.

A ``Divisor`` is kept unfactored: the monic part of the Y-polynomial prime to
y, the same on Z, and multiplicities at Q_Y, Q_Z and P.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .curvemodel import CurveConfig, LimitSeries, forget, linked_sequence, series_m
from .linked import is_exact
from .qlinalg import Field, projective_points

DEFAULT_ENUM_BOUND = 10**5


class DivisorError(ValueError):
    pass


class EnumerationBoundExceeded(DivisorError):
    pass


@dataclass(frozen=True)
class Divisor:
    uY: tuple
    kQY: int
    uZ: tuple
    kQZ: int
    kP: int

    def __post_init__(self):
        for name in ("uY", "uZ"):
            u = tuple(getattr(self, name))
            object.__setattr__(self, name, u)
            if not u or u[-1] != 1 or not u[0]:
                raise DivisorError(f"{name} must be monic with nonzero constant term, got {u}")
        if min(self.kQY, self.kQZ, self.kP) < 0:
            raise DivisorError("multiplicities must be nonnegative")

    @property
    def degree(self) -> int:
        return len(self.uY) - 1 + self.kQY + len(self.uZ) - 1 + self.kQZ + self.kP

    def key(self):
        return (self.kP, self.kQY, self.kQZ, len(self.uY), tuple(map(str, self.uY)), len(self.uZ), tuple(map(str, self.uZ)))

    @classmethod
    def points(cls, QY: int = 0, QZ: int = 0, P: int = 0) -> Divisor:
        return cls((1,), QY, (1,), QZ, P)


class AbelClass(NamedTuple):
    degY: int
    degZ: int


def _split(F: Field, poly):
    """(order at 0, degree, monic part prime to the variable)."""
    nz = [k for k, a in enumerate(poly) if a]
    if not nz:
        raise DivisorError("zero polynomial has no divisor")
    lo, hi = nz[0], nz[-1]
    inv = F.inv(poly[hi])
    core = tuple((a * inv) % F.p if F.p else a * inv for a in poly[lo : hi + 1])
    return lo, hi, core


def section_divisor(config: CurveConfig, i: int, f, h) -> Divisor:
    """D(s) for the level-i section s = (f, h).

    Y side: zeros of f, (d - deg f) Q_Y, minus floor(i/delta) P.  Z side:
    zeros of h, (ceil - floor)(i/delta) P, (floor(i/delta) - deg h) Q_Z.
    One P is removed at non-invertible levels.
    """
    lev = config.level(i)
    f, h = lev.check_section(f, h)
    if not any(f) or not any(h):
        raise DivisorError("divisor undefined for torsion directions (section lies in a kernel)")
    F = config.field
    of, df, uY = _split(F, f)
    oh, dh, uZ = _split(F, h)
    fl, cl = lev.fl, lev.cl
    kP = (of - fl) + oh + (cl - fl) - (1 if cl > fl else 0)
    return Divisor(uY, config.d - df, uZ, fl - dh, kP)


def divisor_of_section(g: LimitSeries, i: int, s) -> Divisor:
    """D(s) for s given by its coordinates in the canonical basis of Gamma^(i)."""
    if not 0 <= i <= g.config.top:
        raise DivisorError(f"level {i} outside 0..{g.config.top}")
    if not g.V[i].contains(s):
        raise DivisorError(f"section {tuple(s)} is not in V^({i})")
    return section_divisor(g.config, i, *g.config.level(i).section(s))


def abel(d: int, D: Divisor, p_on_z: int = 0) -> AbelClass:
    """Bidegree of O_X(D) in the normalisation with Z-degree 0.

    ``p_on_z`` of the kP copies of P are counted on the Z side; the result
    does not depend on it.
    """
    if D.degree != d:
        raise DivisorError(f"divisor has degree {D.degree}, expected {d}")
    if not 0 <= p_on_z <= D.kP:
        raise DivisorError(f"cannot move {p_on_z} of {D.kP} copies of P to Z")
    d1 = len(D.uY) - 1 + D.kQY + D.kP - p_on_z
    d2 = len(D.uZ) - 1 + D.kQZ + p_on_z
    # twisting by d2 (P on Y minus P on Z) moves all degree to Y
    return AbelClass(d1 + d2, 0)


class PgResult(NamedTuple):
    points: list
    S: list
    exact: bool
    by_level: dict  # i -> frozenset of divisors

    def as_dict(self):
        return {"points": self.points, "S": self.S, "exact": self.exact}


def enumerate_Pg(g: LimitSeries, bound: int = DEFAULT_ENUM_BOUND) -> PgResult:
    """D(s) for a representative s of every line of every V^(i) avoiding the
    two kernels, plus S = {i : m_i > 0}."""
    F = g.field
    if not F.is_finite:
        raise DivisorError("enumeration needs a prime field")
    cfg = g.config
    cost = (g.r + 1) * (cfg.top + 1) * F.p ** (g.r + 1)
    if cost > bound:
        raise EnumerationBoundExceeded(f"enumeration cost {cost} exceeds bound {bound}")
    ls = linked_sequence(g)
    by_level = {}
    for i, Vi in enumerate(g.V):
        lev = cfg.level(i)
        found = set()
        for s in projective_points(Vi):
            f, h = lev.section(s)
            if any(f) and any(h):
                found.add(section_divisor(cfg, i, f, h))
        by_level[i] = frozenset(found)
    pts = sorted(set().union(*by_level.values()), key=Divisor.key)
    S = [i for i, m in enumerate(series_m(g)) if m > 0]
    return PgResult(pts, S, is_exact(ls).exact, by_level)


def compare_Pg(g: LimitSeries, gp: LimitSeries, bound: int = DEFAULT_ENUM_BOUND) -> dict:
    """Generator-level comparison of P(g) and P(g') for g = forget(g')."""
    if gp.config.delta % g.config.delta or forget(gp, g.config.delta) != g:
        raise DivisorError("the first series is not the forgetful image of the second")
    c = gp.config.delta // g.config.delta
    a, b = enumerate_Pg(g, bound), enumerate_Pg(gp, bound)
    scaled = sorted(c * i for i in a.S)
    extra = sorted(set(b.S) - set(scaled))
    pa, pb = set(a.points), set(b.points)
    matched = all(a.by_level[i] == b.by_level[c * i] for i in a.by_level)
    checks = {"included": pa <= pb, "matched_levels_agree": matched}
    if a.exact:
        checks["same_components"] = b.S == scaled
    if b.exact and not a.exact:
        checks["extra_components"] = set(scaled) < set(b.S)
    return {
        "c": c,
        "included": pa <= pb,
        "points_equal": pa == pb,
        "matched_levels_agree": matched,
        "S": a.S,
        "S_prime": b.S,
        "extra_components": extra,
        "exact": a.exact,
        "exact_prime": b.exact,
        "consistent": all(checks.values()),
    }


__all__ = [
    "AbelClass",
    "DEFAULT_ENUM_BOUND",
    "Divisor",
    "DivisorError",
    "EnumerationBoundExceeded",
    "PgResult",
    "abel",
    "compare_Pg",
    "divisor_of_section",
    "enumerate_Pg",
    "section_divisor",
]
