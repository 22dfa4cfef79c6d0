"""Twist sequences and level-delta limit linear series on X = Y u_P Z with
both components rational.

Coordinates: y on Y and z on Z, with P at y = 0 and z = 0, Q_Y at y = inf and
Q_Z at z = inf.  The bundle is normalised to bidegree (d, 0) at level 0.

A section of the level-i sheaf is a pair ``(f, h)`` of coefficient tuples
(ascending powers, length d+1):

* ``f`` in F[y], deg f <= d, ord_{y=0} f >= ceil(i/delta)
* ``h`` in F[z], deg h <= floor(i/delta), standing for h(z) / z^floor(i/delta)

At invertible levels (delta | i, q = i/delta) the two parts are glued:
coefficient of y^q in f equals h(0).  Basis of Gamma^(i): Y monomials in
descending degree, then the gluing vector (y^q, 1) when present, then Z
monomials in ascending degree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .linked import LinkedSequence, is_exact, numerical_profile, raw_profile
from .numfn import NumericalFunction, is_admissible, restrict
from .qlinalg import (
    Field,
    LinalgError,
    Matrix,
    Subspace,
    kernel,
    random_subspace_between,
    rref,
    sum_intersect,
)


class SeriesError(ValueError):
    """Domain error for twist levels and limit series."""


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class CurveConfig:
    field: Field
    d: int
    delta: int

    def __post_init__(self):
        if self.d < 1 or self.delta < 1:
            raise SeriesError(f"need d >= 1 and delta >= 1, got d={self.d}, delta={self.delta}")

    @property
    def top(self) -> int:
        return self.d * self.delta

    def level(self, i: int) -> TwistLevel:
        return twist_level(self, i)


@dataclass(frozen=True)
class TwistLevel:
    config: CurveConfig
    i: int

    @property
    def fl(self) -> int:
        return self.i // self.config.delta

    @property
    def cl(self) -> int:
        return _ceil_div(self.i, self.config.delta)

    @property
    def invertible(self) -> bool:
        return self.i % self.config.delta == 0

    @property
    def degY(self) -> int:
        return self.config.d - self.cl

    @property
    def degZ(self) -> int:
        return self.fl

    @property
    def dim(self) -> int:
        return self.config.d + 1

    def basis(self) -> list[tuple[tuple, tuple]]:
        d = self.config.d
        f0 = self.config.field.zero
        out = []

        def mono(k):
            return tuple(1 if t == k else f0 for t in range(d + 1))

        zero = (f0,) * (d + 1)
        if self.invertible:
            q = self.fl
            out += [(mono(j), zero) for j in range(d, q, -1)]
            out.append((mono(q), mono(0)))
            out += [(zero, mono(k)) for k in range(1, q + 1)]
        else:
            out += [(mono(j), zero) for j in range(d, self.cl - 1, -1)]
            out += [(zero, mono(k)) for k in range(0, self.fl + 1)]
        return out

    def check_section(self, f, h):
        d = self.config.d
        F = self.config.field
        f = tuple(F(x) for x in f)
        h = tuple(F(x) for x in h)
        if len(f) != d + 1 or len(h) != d + 1:
            raise SeriesError(f"section parts must have {d + 1} coefficients")
        if any(f[k] for k in range(self.cl)):
            raise SeriesError(f"Y-part vanishes to order < {self.cl} at P on level {self.i}")
        if any(h[k] for k in range(self.fl + 1, d + 1)):
            raise SeriesError(f"Z-part has degree > {self.fl} on level {self.i}")
        if self.invertible and f[self.fl] != h[0]:
            raise SeriesError(f"gluing fails on level {self.i}: y^{self.fl} coefficient != h(0)")
        return f, h

    def coords(self, f, h) -> tuple:
        """Coordinates of the section (f, h) in the canonical basis."""
        f, h = self.check_section(f, h)
        d = self.config.d
        if self.invertible:
            q = self.fl
            return tuple(f[j] for j in range(d, q, -1)) + (f[q],) + tuple(h[k] for k in range(1, q + 1))
        return tuple(f[j] for j in range(d, self.cl - 1, -1)) + tuple(h[k] for k in range(self.fl + 1))

    def section(self, coords) -> tuple[tuple, tuple]:
        F = self.config.field
        d = self.config.d
        f = [F.zero] * (d + 1)
        h = [F.zero] * (d + 1)
        if len(coords) != d + 1:
            raise SeriesError(f"expected {d + 1} coordinates")
        for a, (bf, bh) in zip(coords, self.basis()):
            a = F(a)
            if a:
                f = [_r(F, x + a * y) for x, y in zip(f, bf)]
                h = [_r(F, x + a * y) for x, y in zip(h, bh)]
        return tuple(f), tuple(h)


def _r(F: Field, x):
    return x % F.p if F.p else x


def twist_level(config: CurveConfig, i: int) -> TwistLevel:
    return TwistLevel(config, i)


def phi_up(config: CurveConfig, i: int, f, h):
    """phi^i: level i -> level i+1; drops the Y-part and carries the Z-part,
    multiplying by z when floor(i/delta) increases."""
    if not 0 <= i < config.top:
        raise SeriesError(f"phi^{i} out of range 0..{config.top - 1}")
    src, dst = config.level(i), config.level(i + 1)
    f, h = src.check_section(f, h)
    zero = (config.field.zero,) * (config.d + 1)
    if dst.fl != src.fl:
        h = (config.field.zero,) + h[:-1]
    return dst.check_section(zero, h)


def phi_dn(config: CurveConfig, i: int, f, h):
    """phi_i: level i+1 -> level i; keeps the Y-part, drops the Z-part."""
    if not 0 <= i < config.top:
        raise SeriesError(f"phi_{i} out of range 0..{config.top - 1}")
    src, dst = config.level(i + 1), config.level(i)
    f, h = src.check_section(f, h)
    return dst.check_section(f, (config.field.zero,) * (config.d + 1))


@lru_cache(maxsize=None)
def phi_up_matrix(config: CurveConfig, i: int) -> Matrix:
    src, dst = config.level(i), config.level(i + 1)
    cols = [dst.coords(*phi_up(config, i, f, h)) for f, h in src.basis()]
    return Matrix.from_columns(config.field, cols, dst.dim)


@lru_cache(maxsize=None)
def phi_dn_matrix(config: CurveConfig, i: int) -> Matrix:
    src, dst = config.level(i + 1), config.level(i)
    cols = [dst.coords(*phi_dn(config, i, f, h)) for f, h in src.basis()]
    return Matrix.from_columns(config.field, cols, dst.dim)


@dataclass(frozen=True)
class LimitSeries:
    config: CurveConfig
    r: int
    V: tuple

    def __post_init__(self):
        object.__setattr__(self, "V", tuple(self.V))
        cfg = self.config
        if len(self.V) != cfg.top + 1:
            raise SeriesError(f"expected {cfg.top + 1} subspaces, got {len(self.V)}")
        for i, S in enumerate(self.V):
            if not isinstance(S, Subspace) or S.field != cfg.field or S.ambient != cfg.d + 1:
                raise SeriesError(f"V^({i}) must be a subspace of F^{cfg.d + 1} over {cfg.field}")

    @property
    def field(self) -> Field:
        return self.config.field

    @classmethod
    def from_sections(cls, config: CurveConfig, r: int, sections) -> LimitSeries:
        """``sections[i]`` is a list of (f, h) pairs spanning V^(i)."""
        V = []
        for i, secs in enumerate(sections):
            lev = config.level(i)
            V.append(Subspace.span(config.field, config.d + 1, [lev.coords(f, h) for f, h in secs]))
        return cls(config, r, tuple(V))


def validate_series(g: LimitSeries) -> list[str]:
    out = []
    cfg = g.config
    for i, S in enumerate(g.V):
        if S.dim != g.r + 1:
            out.append(f"V^({i}) has dimension {S.dim}, expected {g.r + 1}")
    for i in range(cfg.top):
        up = g.V[i].image(phi_up_matrix(cfg, i))
        for v in up.basis:
            if not g.V[i + 1].contains(v):
                out.append(f"phi^{i}(V^({i})) not in V^({i + 1}): section {cfg.level(i + 1).section(v)}")
                break
        dn = g.V[i + 1].image(phi_dn_matrix(cfg, i))
        for v in dn.basis:
            if not g.V[i].contains(v):
                out.append(f"phi_{i}(V^({i + 1})) not in V^({i}): section {cfg.level(i).section(v)}")
                break
    return out


def _require_valid(g: LimitSeries):
    bad = validate_series(g)
    if bad:
        raise SeriesError("invalid limit series: " + "; ".join(bad))


def _restricted(M: Matrix, src: Subspace, dst: Subspace) -> Matrix:
    """Matrix of M|src: src -> dst in the echelon bases."""
    cols = [dst.coordinates(M.apply(b)) for b in src.basis]
    return Matrix.from_columns(M.field, cols, dst.dim)


def linked_sequence(g: LimitSeries) -> LinkedSequence:
    _require_valid(g)
    cfg = g.config
    ups = tuple(_restricted(phi_up_matrix(cfg, i), g.V[i], g.V[i + 1]) for i in range(cfg.top))
    dns = tuple(_restricted(phi_dn_matrix(cfg, i), g.V[i + 1], g.V[i]) for i in range(cfg.top))
    return LinkedSequence(cfg.field, g.r + 1, 0, cfg.top, ups, dns)


def series_profile(g: LimitSeries) -> NumericalFunction:
    return numerical_profile(linked_sequence(g))


def series_m(g: LimitSeries) -> list[int]:
    """m_i for i = 0..d*delta on the untrimmed window."""
    return [m for _, _, m in raw_profile(linked_sequence(g))]


def is_exact_series(g: LimitSeries) -> bool:
    return is_exact(linked_sequence(g)).exact


def forget(g: LimitSeries, delta: int) -> LimitSeries:
    """The level-``delta`` series keeping every c-th subspace, c = delta'/delta."""
    dp = g.config.delta
    if delta < 1 or dp % delta:
        raise SeriesError(f"target level {delta} does not divide {dp}")
    c = dp // delta
    cfg = CurveConfig(g.field, g.config.d, delta)
    return LimitSeries(cfg, g.r, tuple(g.V[c * i] for i in range(cfg.top + 1)))


class LiftFailed(SeriesError):
    pass


def _y_vec(cfg: CurveConfig, lev: TwistLevel, f) -> tuple:
    return lev.coords(f, (cfg.field.zero,) * (cfg.d + 1))


def _z_vec(cfg: CurveConfig, lev: TwistLevel, h) -> tuple:
    return lev.coords((cfg.field.zero,) * (cfg.d + 1), h)


def fiber_sample(g: LimitSeries, fprime: NumericalFunction, c: int, seed: int = 0, retries: int = 64) -> LimitSeries:
    """A level-(c*delta) series with profile ``fprime`` forgetting to g.

    Interior subspaces are built block by block from random flags
    A_1 <= ... <= A_(c-1) in W_+ and B_(c-1) <= ... <= B_1 in W_-, each
    interior V sandwiched between B_(j+1) + A_(j-1) and B_j + A_j with
    surjective projections.  Random choices are retried up to ``retries``
    times per interior level.
    """
    if c < 1:
        raise SeriesError(f"c must be positive, got {c}")
    if c == 1:
        return g
    if not g.field.is_finite:
        raise SeriesError("fiber sampling needs a prime field")
    n = g.r + 1
    if fprime.n != n:
        raise SeriesError(f"refinement has n={fprime.n}, series has r+1={n}")
    chk = is_admissible(fprime)
    if not chk:
        raise SeriesError(f"refinement not admissible: {chk.failure}")
    prof = series_profile(g)
    if restrict(fprime, c).function != prof:
        raise SeriesError("refinement does not restrict to the profile of the series")

    F = g.field
    d, delta = g.config.d, g.config.delta
    cfg = CurveConfig(F, d, c * delta)
    rng = random.Random(f"lift:{F.p}:{seed}")
    V = {}
    for i in range(g.config.top + 1):
        V[c * i] = g.V[i]
    for i in range(g.config.top):
        lev0, lev1 = cfg.level(c * i), cfg.level(c * i + c)
        mid = cfg.level(c * i + 1)  # all interior levels share this Gamma
        S0, S1 = g.V[i], g.V[i + 1]
        secs0 = [lev0.section(b) for b in S0.basis]
        secs1 = [lev1.section(b) for b in S1.basis]
        amb = d + 1
        # V_+ and W_+ live in Z-polynomials, V_- and W_- in Y-polynomials;
        # both are stored as coefficient vectors of length d+1
        v_plus = Subspace.span(F, amb, [h for _, h in secs0])
        v_minus = Subspace.span(F, amb, [f for f, _ in secs1])
        w_plus = _w_plus(cfg, lev0.fl, lev1, S1)
        w_minus = _w_minus(cfg, lev0, S0)
        A = [v_plus]
        for j in range(1, c):
            A.append(random_subspace_between(A[-1], w_plus, n - fprime.q(c * i + j), rng))
        B = {c: v_minus}
        for j in range(c - 1, 0, -1):
            B[j] = random_subspace_between(B[j + 1], w_minus, n - fprime.p(c * i + j), rng)
        for j in range(1, c):
            base = [_y_vec(cfg, mid, v) for v in B[j + 1].basis] + [_z_vec(cfg, mid, v) for v in A[j - 1].basis]
            top = [_y_vec(cfg, mid, v) for v in B[j].basis] + [_z_vec(cfg, mid, v) for v in A[j].basis]
            lower = Subspace.span(F, amb, base)
            upper = Subspace.span(F, amb, top)
            for _ in range(retries):
                cand = random_subspace_between(lower, upper, n, rng)
                secs = [mid.section(b) for b in cand.basis]
                if (Subspace.span(F, amb, [f for f, _ in secs]) == B[j]
                        and Subspace.span(F, amb, [h for _, h in secs]) == A[j]):
                    V[c * i + j] = cand
                    break
            else:
                raise LiftFailed(f"no admissible V^({c * i + j}) after {retries} attempts")
    out = LimitSeries(cfg, g.r, tuple(V[k] for k in range(cfg.top + 1)))
    bad = validate_series(out)
    if bad:
        raise AssertionError("lift is not a limit series: " + "; ".join(bad))
    if series_profile(out) != fprime:
        raise AssertionError("lift has the wrong profile")
    return out


def _w_plus(cfg: CurveConfig, fl0: int, lev1: TwistLevel, S1: Subspace) -> Subspace:
    """Z-polynomials h of the interior levels (deg h <= fl0) whose image under
    phi^(ci+c-1) lies in V^(c(i+1)); the image is (0, z h) when the floor
    steps up at c(i+1), else (0, h)."""
    F = cfg.field
    d = cfg.d
    shift = lev1.fl != fl0
    basis = [_mono(F, d, k) for k in range(fl0 + 1)]
    zero = (F.zero,) * (d + 1)
    images = [lev1.coords(zero, ((F.zero,) + h[:-1]) if shift else h) for h in basis]
    pre = S1.preimage(Matrix.from_columns(F, images, d + 1))
    return Subspace.span(F, d + 1, [_combine_polys(F, basis, v) for v in pre.basis])


def _w_minus(cfg: CurveConfig, lev0: TwistLevel, S0: Subspace) -> Subspace:
    """Y-polynomials f of the interior levels with (f, 0) in V^(ci)."""
    F = cfg.field
    d = cfg.d
    basis = [_mono(F, d, k) for k in range(lev0.fl + 1, d + 1)]
    images = [lev0.coords(f, (F.zero,) * (d + 1)) for f in basis]
    if not images:
        return Subspace.zero(F, d + 1)
    M = Matrix.from_columns(F, images, d + 1)
    pre = S0.preimage(M)
    return Subspace.span(F, d + 1, [_combine_polys(F, basis, v) for v in pre.basis])


def _mono(F: Field, d: int, k: int) -> tuple:
    return tuple(F.one if t == k else F.zero for t in range(d + 1))


def _combine_polys(F: Field, basis, coeffs):
    out = [F.zero] * len(basis[0])
    for a, b in zip(coeffs, basis):
        if a:
            out = [_r(F, x + a * y) for x, y in zip(out, b)]
    return tuple(out)


def random_series(field: Field, d: int, delta: int, r: int, seed: int, exact: bool = False) -> LimitSeries:
    """Random valid series over F_p.

    Each V^(i+1) contains phi^i(V^(i)) and lies in phi_i^{-1}(V^(i)).  With
    ``exact=True`` the complement is a lift of V^(i) n Ker(phi^i) through
    phi_i, which makes every step exact.
    """
    if r + 1 > d + 1:
        raise SeriesError(f"rank {r} too large for degree {d}")
    cfg = CurveConfig(field, d, delta)
    rng = random.Random(f"series:{field.p}:{d}:{delta}:{r}:{seed}:{exact}")
    amb = d + 1
    full = Subspace.full(field, amb)
    V = [random_subspace_between(Subspace.zero(field, amb), full, r + 1, rng)]
    for i in range(cfg.top):
        up, dn = phi_up_matrix(cfg, i), phi_dn_matrix(cfg, i)
        forced = V[i].image(up)
        if exact:
            _, K = sum_intersect(V[i], kernel(up))
            ker_dn = kernel(dn)
            lifts = []
            for k in K.basis:
                noise = ker_dn.combine([rng.randrange(field.p) for _ in range(ker_dn.dim)])
                lifts.append(tuple(_r(field, a + b) for a, b in zip(_solve(dn, k), noise)))
            nxt = forced + Subspace.span(field, amb, lifts)
        else:
            nxt = random_subspace_between(forced, V[i].preimage(dn), r + 1, rng)
        if nxt.dim != r + 1:
            raise AssertionError(f"step {i} produced dimension {nxt.dim}")
        V.append(nxt)
    return LimitSeries(cfg, r, tuple(V))


def _solve(M: Matrix, b) -> tuple:
    """Some x with M x = b."""
    F = M.field
    aug = [list(row) + [bb] for row, bb in zip(M.entries, b)]
    rows, pivots = rref(F, aug, M.cols + 1)
    if M.cols in pivots:
        raise LinalgError("system is inconsistent")
    x = [F.zero] * M.cols
    for row, pc in zip(rows, pivots):
        x[pc] = row[-1]
    return tuple(x)


__all__ = [
    "CurveConfig",
    "LiftFailed",
    "LimitSeries",
    "SeriesError",
    "TwistLevel",
    "fiber_sample",
    "forget",
    "is_exact_series",
    "linked_sequence",
    "phi_dn",
    "phi_dn_matrix",
    "phi_up",
    "phi_up_matrix",
    "random_series",
    "series_m",
    "series_profile",
    "twist_level",
    "validate_series",
]
