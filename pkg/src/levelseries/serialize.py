"""Canonical JSON documents for every artifact type.

Output is byte-stable: sorted keys, no insignificant whitespace (or a fixed
two-space indent when pretty), F_p entries as integers in [0, p) and Q
entries as ``"a/b"`` strings in lowest terms.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .abelmap import Divisor, PgResult
from .curvemodel import CurveConfig, LimitSeries
from .linked import LinkedSequence
from .numfn import NumericalFunction
from .qlinalg import QQ, Field, Matrix, Subspace


class FormatError(ValueError):
    """A document is not well-formed."""


def dumps(obj, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e}") from e


def _need(obj, keys, what):
    if not isinstance(obj, dict):
        raise FormatError(f"{what} must be a JSON object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise FormatError(f"{what} is missing keys {missing}")


def _int(x, what):
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(f"{what} must be an integer, got {x!r}")
    return x


# fields and scalars


def field_to_json(F: Field):
    return "Q" if F.p is None else {"Fp": F.p}


def field_from_json(obj) -> Field:
    if obj == "Q":
        return QQ
    if isinstance(obj, dict) and set(obj) == {"Fp"}:
        try:
            return Field(_int(obj["Fp"], "Fp"))
        except ValueError as e:
            raise FormatError(str(e)) from e
    raise FormatError(f"field must be \"Q\" or {{\"Fp\": p}}, got {obj!r}")


def parse_field_flag(text: str) -> Field:
    """``Q`` or ``Fp:<p>``."""
    if text == "Q":
        return QQ
    if text.startswith("Fp:"):
        try:
            return Field(int(text[3:]))
        except ValueError as e:
            raise FormatError(f"bad field {text!r}: {e}") from e
    raise FormatError(f"field must be Q or Fp:<p>, got {text!r}")


def scalar_to_json(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return int(x)


def scalar_from_json(F: Field | None, x):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise FormatError(f"scalar must be an integer or \"a/b\" string, got {x!r}")
    if isinstance(x, str):
        try:
            x = Fraction(x)
        except (ValueError, ZeroDivisionError) as e:
            raise FormatError(f"bad rational {x!r}") from e
    if F is None:
        return x
    try:
        return F(x)
    except ValueError as e:
        raise FormatError(str(e)) from e


# matrices and subspaces


def matrix_to_json(M: Matrix) -> dict:
    return {
        "field": field_to_json(M.field),
        "rows": M.rows,
        "cols": M.cols,
        "entries": [[scalar_to_json(x) for x in row] for row in M.entries],
    }


def _entries(obj, what):
    _need(obj, ("field", "rows", "cols", "entries"), what)
    F = field_from_json(obj["field"])
    rows, cols = _int(obj["rows"], "rows"), _int(obj["cols"], "cols")
    ents = obj["entries"]
    if not isinstance(ents, list) or len(ents) != rows or any(not isinstance(r, list) or len(r) != cols for r in ents):
        raise FormatError(f"{what} entries do not match shape {rows}x{cols}")
    return F, rows, cols, [[scalar_from_json(F, x) for x in r] for r in ents]


def matrix_from_json(obj) -> Matrix:
    F, rows, cols, ents = _entries(obj, "matrix")
    return Matrix(F, rows, cols, tuple(map(tuple, ents)))


def subspace_to_json(S: Subspace) -> dict:
    return matrix_to_json(S.as_matrix())


def subspace_from_json(obj) -> Subspace:
    F, _, cols, ents = _entries(obj, "subspace")
    return Subspace.span(F, cols, ents)


# linked sequences and numerical functions


def linked_to_json(S: LinkedSequence) -> dict:
    return {
        "field": field_to_json(S.field),
        "n": S.n,
        "lo": S.lo,
        "hi": S.hi,
        "up": [matrix_to_json(M) for M in S.up],
        "dn": [matrix_to_json(M) for M in S.dn],
    }


def linked_from_json(obj) -> LinkedSequence:
    _need(obj, ("field", "n", "lo", "hi", "up", "dn"), "linked sequence")
    F = field_from_json(obj["field"])
    if not isinstance(obj["up"], list) or not isinstance(obj["dn"], list):
        raise FormatError("up and dn must be lists of matrices")
    up = [matrix_from_json(m) for m in obj["up"]]
    dn = [matrix_from_json(m) for m in obj["dn"]]
    try:
        return LinkedSequence(F, _int(obj["n"], "n"), _int(obj["lo"], "lo"), _int(obj["hi"], "hi"), up, dn)
    except ValueError as e:
        raise FormatError(str(e)) from e


def numfn_to_json(f: NumericalFunction) -> dict:
    return {"n": f.n, "lo": f.lo, "hi": f.hi, "pqm": [list(v) for v in f.values]}


def numfn_from_json(obj) -> NumericalFunction:
    _need(obj, ("n", "lo", "hi", "pqm"), "numerical function")
    pqm = obj["pqm"]
    if not isinstance(pqm, list) or any(not isinstance(t, list) or len(t) != 3 for t in pqm):
        raise FormatError("pqm must be a list of [p, q, m] triples")
    vals = tuple(tuple(_int(x, "pqm entry") for x in t) for t in pqm)
    try:
        return NumericalFunction(_int(obj["n"], "n"), _int(obj["lo"], "lo"), _int(obj["hi"], "hi"), vals)
    except ValueError as e:
        raise FormatError(str(e)) from e


# limit series and divisors


def series_to_json(g: LimitSeries) -> dict:
    return {
        "field": field_to_json(g.field),
        "d": g.config.d,
        "delta": g.config.delta,
        "r": g.r,
        "V": [subspace_to_json(S) for S in g.V],
    }


def series_from_json(obj) -> LimitSeries:
    _need(obj, ("field", "d", "delta", "r", "V"), "limit series")
    F = field_from_json(obj["field"])
    if not isinstance(obj["V"], list):
        raise FormatError("V must be a list of subspaces")
    V = [subspace_from_json(s) for s in obj["V"]]
    try:
        cfg = CurveConfig(F, _int(obj["d"], "d"), _int(obj["delta"], "delta"))
        return LimitSeries(cfg, _int(obj["r"], "r"), tuple(V))
    except ValueError as e:
        raise FormatError(str(e)) from e


def divisor_to_json(D: Divisor) -> dict:
    return {
        "uY": [scalar_to_json(x) for x in D.uY],
        "kQY": D.kQY,
        "uZ": [scalar_to_json(x) for x in D.uZ],
        "kQZ": D.kQZ,
        "kP": D.kP,
    }


def divisor_from_json(obj, field: Field | None = None) -> Divisor:
    _need(obj, ("uY", "kQY", "uZ", "kQZ", "kP"), "divisor")
    for k in ("uY", "uZ"):
        if not isinstance(obj[k], list):
            raise FormatError(f"{k} must be a coefficient list")
    try:
        return Divisor(
            tuple(scalar_from_json(field, x) for x in obj["uY"]),
            _int(obj["kQY"], "kQY"),
            tuple(scalar_from_json(field, x) for x in obj["uZ"]),
            _int(obj["kQZ"], "kQZ"),
            _int(obj["kP"], "kP"),
        )
    except ValueError as e:
        raise FormatError(str(e)) from e


def pg_to_json(res: PgResult) -> dict:
    return {"points": [divisor_to_json(D) for D in res.points], "S": list(res.S), "exact": bool(res.exact)}


__all__ = [
    "FormatError",
    "divisor_from_json",
    "divisor_to_json",
    "dumps",
    "field_from_json",
    "field_to_json",
    "linked_from_json",
    "linked_to_json",
    "loads",
    "matrix_from_json",
    "matrix_to_json",
    "numfn_from_json",
    "numfn_to_json",
    "parse_field_flag",
    "pg_to_json",
    "scalar_from_json",
    "scalar_to_json",
    "series_from_json",
    "series_to_json",
    "subspace_from_json",
    "subspace_to_json",
]
