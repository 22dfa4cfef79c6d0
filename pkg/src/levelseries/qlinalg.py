"""Exact linear algebra over the rationals and prime fields.

Vectors are tuples of field elements (``Fraction`` over Q, ``int`` in
``[0, p)`` over F_p).  Matrices act on column vectors.  Subspaces are kept in
reduced row-echelon form, so two ``Subspace`` values compare equal exactly
when they are the same subspace.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class LinalgError(ValueError):
    """Raised on malformed linear-algebra input (shapes, fields, dimensions)."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class Field:
    """Q when ``p`` is None, otherwise the prime field F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise LinalgError(f"field characteristic {self.p} is not prime")

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def __call__(self, x):
        """Coerce an int, Fraction or ``"a/b"`` string into the field."""
        if self.p is None:
            return Fraction(x)
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise LinalgError(f"{x} has no image in F_{self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / a
        return pow(a, -1, self.p)

    def elements(self):
        if self.p is None:
            raise LinalgError("Q cannot be enumerated")
        return range(self.p)

    def __str__(self):
        return "Q" if self.p is None else f"F_{self.p}"


QQ = Field()


def GF(p: int) -> Field:
    return Field(p)


def _reduce(field: Field, x):
    return x % field.p if field.p else x


def rref(field: Field, rows: Iterable[Sequence], ncols: int):
    """Reduced row-echelon form.

    Returns ``(rows, pivots)`` where ``rows`` are the nonzero echelon rows as
    tuples and ``pivots`` the pivot column of each.
    """
    work = [list(r) for r in rows]
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        pr = next((k for k in range(top, len(work)) if work[k][col]), None)
        if pr is None:
            continue
        work[top], work[pr] = work[pr], work[top]
        lead = work[top]
        s = field.inv(lead[col])
        if s != 1:
            lead[:] = [_reduce(field, x * s) for x in lead]
        for k, row in enumerate(work):
            if k != top and row[col]:
                c = row[col]
                row[:] = [_reduce(field, a - c * b) for a, b in zip(row, lead)]
        pivots.append(col)
        top += 1
        if top == len(work):
            break
    return [tuple(r) for r in work[:top]], pivots


@dataclass(frozen=True)
class Matrix:
    """Dense matrix; ``entries`` is a row-major tuple of row tuples."""

    field: Field
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise LinalgError("negative matrix shape")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise LinalgError(f"entries do not match shape {self.rows}x{self.cols}")
        f = self.field
        object.__setattr__(self, "entries", tuple(tuple(f(x) for x in r) for r in self.entries))

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> Matrix:
        rows = [tuple(r) for r in rows]
        if cols is None:
            if not rows:
                raise LinalgError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        return cls(field, len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> Matrix:
        return cls(field, rows, len(columns), tuple(tuple(c[i] for c in columns) for i in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> Matrix:
        return cls(field, n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> Matrix:
        return cls(field, rows, cols, tuple((0,) * cols for _ in range(rows)))

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.field != other.field or self.cols != other.rows:
            raise LinalgError("incompatible matrices")
        f = self.field
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = tuple(
            tuple(_reduce(f, sum((a * b for a, b in zip(r, c)), f.zero)) for c in cols)
            for r in self.entries
        )
        return Matrix(f, self.rows, other.cols, out)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise LinalgError("vector length does not match matrix")
        f = self.field
        return tuple(_reduce(f, sum((a * b for a, b in zip(r, v)), f.zero)) for r in self.entries)

    def transpose(self) -> Matrix:
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def columns(self) -> list[tuple]:
        return [tuple(r[j] for r in self.entries) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    @property
    def rank(self) -> int:
        return len(rref(self.field, self.entries, self.cols)[1])


@dataclass(frozen=True)
class Subspace:
    """A subspace of F^ambient, stored by its reduced echelon basis."""

    field: Field
    ambient: int
    basis: tuple = ()

    def __post_init__(self):
        f = self.field
        vecs = [tuple(f(x) for x in v) for v in self.basis]
        if any(len(v) != self.ambient for v in vecs):
            raise LinalgError(f"vector length differs from ambient dimension {self.ambient}")
        rows, pivots = rref(f, vecs, self.ambient)
        object.__setattr__(self, "basis", tuple(rows))
        object.__setattr__(self, "_pivots", tuple(pivots))

    @classmethod
    def span(cls, field: Field, ambient: int, vectors: Iterable[Sequence]) -> Subspace:
        return cls(field, ambient, tuple(tuple(v) for v in vectors))

    @classmethod
    def zero(cls, field: Field, n: int) -> Subspace:
        return cls(field, n, ())

    @classmethod
    def full(cls, field: Field, n: int) -> Subspace:
        return cls(field, n, Matrix.identity(field, n).entries)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple:
        return self._pivots

    def _check(self, other: Subspace):
        if self.field != other.field or self.ambient != other.ambient:
            raise LinalgError("subspaces live in different spaces")

    def coordinates(self, v: Sequence) -> tuple:
        """Coordinates of ``v`` in the echelon basis; raises if ``v`` is outside."""
        f = self.field
        v = tuple(f(x) for x in v)
        coords = tuple(v[c] for c in self._pivots)
        back = [f.zero] * self.ambient
        for a, b in zip(coords, self.basis):
            if a:
                back = [_reduce(f, x + a * y) for x, y in zip(back, b)]
        if tuple(back) != v:
            raise LinalgError("vector is not in the subspace")
        return coords

    def contains(self, v: Sequence) -> bool:
        try:
            self.coordinates(v)
        except LinalgError:
            return False
        return True

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def combine(self, coords: Sequence) -> tuple:
        f = self.field
        out = [f.zero] * self.ambient
        for a, b in zip(coords, self.basis):
            if a:
                out = [_reduce(f, x + f(a) * y) for x, y in zip(out, b)]
        return tuple(out)

    def is_subspace_of(self, other: Subspace) -> bool:
        self._check(other)
        return all(other.contains(v) for v in self.basis)

    def __le__(self, other: Subspace) -> bool:
        return self.is_subspace_of(other)

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace(self.field, self.ambient, self.basis + other.basis)

    def as_matrix(self) -> Matrix:
        return Matrix(self.field, self.dim, self.ambient, self.basis)

    def image(self, M: Matrix) -> Subspace:
        if M.cols != self.ambient:
            raise LinalgError("matrix does not act on this subspace")
        return Subspace(self.field, M.rows, tuple(M.apply(b) for b in self.basis))

    def preimage(self, M: Matrix) -> Subspace:
        """``{v : M v in self}``."""
        if M.rows != self.ambient:
            raise LinalgError("matrix does not map into this subspace's ambient space")
        ann = annihilator(self)
        return kernel(Matrix(self.field, ann.dim, self.ambient, ann.basis) @ M)

    def __repr__(self):
        return f"Subspace({self.field}, {self.ambient}, {list(map(list, self.basis))})"


def kernel(M: Matrix) -> Subspace:
    f = M.field
    rows, pivots = rref(f, M.entries, M.cols)
    free = [c for c in range(M.cols) if c not in pivots]
    vecs = []
    for fc in free:
        v = [f.zero] * M.cols
        v[fc] = f.one
        for r, pc in zip(rows, pivots):
            v[pc] = _reduce(f, -r[fc])
        vecs.append(v)
    return Subspace.span(f, M.cols, vecs)


def image(M: Matrix) -> Subspace:
    return Subspace.span(M.field, M.rows, M.columns())


def annihilator(S: Subspace) -> Subspace:
    """Orthogonal complement for the standard bilinear form."""
    return kernel(Matrix(S.field, S.dim, S.ambient, S.basis))


def rank_kernel_image(M: Matrix) -> tuple[int, Subspace, Subspace]:
    im = image(M)
    return im.dim, kernel(M), im


def sum_intersect(U: Subspace, W: Subspace) -> tuple[Subspace, Subspace]:
    U._check(W)
    f = U.field
    total = U + W
    # columns u_1..u_k, -w_1..-w_l; a kernel vector (a, b) gives sum a_i u_i in U ∩ W
    cols = list(U.basis) + [tuple(_reduce(f, -x) for x in w) for w in W.basis]
    if not cols:
        return total, Subspace.zero(f, U.ambient)
    K = kernel(Matrix.from_columns(f, cols, U.ambient))
    meet = Subspace.span(f, U.ambient, (U.combine(v[: U.dim]) for v in K.basis))
    return total, meet


def pivot_complement(A: Subspace, U: Subspace) -> Subspace:
    """Complement of ``A`` inside ``U`` spanned by the echelon rows of ``U``
    whose pivots are not pivots of ``A`` (standard basis vectors when U is
    the whole space)."""
    if not A <= U:
        raise LinalgError("A is not contained in U")
    taken = set(A.pivots)
    return Subspace.span(U.field, U.ambient, (b for b, p in zip(U.basis, U.pivots) if p not in taken))


def complement_and_graph(A: Subspace, U: Subspace, B: Subspace, W: Subspace):
    """Complements ``C_A`` of A in U and ``C_B`` of B in W, and the graph in
    U x W of the isomorphism C_A -> C_B pairing echelon bases in pivot order."""
    if A.field != B.field:
        raise LinalgError("A and B are over different fields")
    if U.dim - A.dim != W.dim - B.dim:
        raise LinalgError(
            f"complement dimensions differ: {U.dim - A.dim} vs {W.dim - B.dim}"
        )
    ca = pivot_complement(A, U)
    cb = pivot_complement(B, W)
    graph = Subspace.span(A.field, U.ambient + W.ambient, (a + b for a, b in zip(ca.basis, cb.basis)))
    return ca, cb, graph


def random_subspace(field: Field, n: int, k: int, seed: int) -> Subspace:
    """Uniformly random k-dimensional subspace of F_p^n, determined by the arguments."""
    if not field.is_finite:
        raise LinalgError("random subspaces are only sampled over prime fields")
    if not 0 <= k <= n:
        raise LinalgError(f"cannot pick a {k}-dimensional subspace of F^{n}")
    rng = random.Random(f"subspace:{field.p}:{n}:{k}:{seed}")
    while True:
        S = Subspace.span(field, n, ([rng.randrange(field.p) for _ in range(n)] for _ in range(k)))
        if S.dim == k:
            return S


def random_vector(field: Field, n: int, rng: random.Random) -> tuple:
    return tuple(rng.randrange(field.p) for _ in range(n))


def random_subspace_between(lower: Subspace, upper: Subspace, k: int, rng: random.Random) -> Subspace:
    """Random k-dimensional S with lower <= S <= upper (F_p only)."""
    if not (lower.dim <= k <= upper.dim) or not lower <= upper:
        raise LinalgError(f"no {k}-dimensional subspace between the given bounds")
    S = lower
    f = lower.field
    while S.dim < k:
        v = upper.combine([rng.randrange(f.p) for _ in range(upper.dim)])
        S = S + Subspace(f, S.ambient, (v,))
    return S


def projective_points(S: Subspace):
    """One representative per line of S (coordinate vectors normalised so the
    first nonzero coordinate is 1), over F_p."""
    f = S.field
    p = f.p
    k = S.dim
    for lead in range(k):
        for rest in range(p ** (k - lead - 1)):
            coords = [0] * k
            coords[lead] = 1
            x = rest
            for t in range(lead + 1, k):
                coords[t] = x % p
                x //= p
            yield S.combine(coords)


__all__ = [
    "Field",
    "GF",
    "QQ",
    "LinalgError",
    "Matrix",
    "Subspace",
    "annihilator",
    "complement_and_graph",
    "image",
    "kernel",
    "pivot_complement",
    "projective_points",
    "random_subspace",
    "random_subspace_between",
    "random_vector",
    "rank_kernel_image",
    "rref",
    "sum_intersect",
]
