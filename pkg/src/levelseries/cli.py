"""Command-line front end.

Every subcommand prints exactly one JSON document.  Exit status is 0 on
success, 1 on a domain error (the document is ``{"error": ...}``) and 2 on
malformed input.
"""

from __future__ import annotations

import argparse
import sys

from . import serialize as ser
from .abelmap import DEFAULT_ENUM_BOUND, compare_Pg, enumerate_Pg
from .curvemodel import fiber_sample, forget, series_profile, validate_series
from .linked import expand_to_exact, is_exact, numerical_profile, validate
from .numfn import (
    DEFAULT_BOUND,
    enumerate_refinements,
    fiber_dimension,
    is_admissible,
    is_exact_fn,
    refine_fff,
)


class DomainError(ValueError):
    def __init__(self, message, **extra):
        super().__init__(message)
        self.extra = extra


def _read(path: str, field):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        raise ser.FormatError(f"cannot read {path}: {e.strerror}") from e
    doc = ser.loads(text)
    if field is not None:
        doc = _refield(doc, ser.field_to_json(field))
    return doc


def _refield(doc, field_json):
    """Reinterpret every ``field`` entry of a document over another field."""
    if isinstance(doc, dict):
        return {k: field_json if k == "field" else _refield(v, field_json) for k, v in doc.items()}
    if isinstance(doc, list):
        return [_refield(v, field_json) for v in doc]
    return doc


def _require(violations):
    if violations:
        raise DomainError(violations[0], violations=violations)


# subcommand handlers; each returns a JSON-ready object


def _nf_check(a):
    f = ser.numfn_from_json(_read(a.input, a.field))
    chk = is_admissible(f)
    if not chk:
        raise DomainError(chk.failure)
    return {"admissible": True, "exact": is_exact_fn(f), "m_sum": f.m_sum}


def _nf_refine(a):
    f = ser.numfn_from_json(_read(a.input, a.field))
    return ser.numfn_to_json(refine_fff(f, a.c, a.ell))


def _nf_refinements(a):
    f = ser.numfn_from_json(_read(a.input, a.field))
    bound = a.bound if a.bound is not None else DEFAULT_BOUND
    return {"refinements": [ser.numfn_to_json(g) for g in enumerate_refinements(f, a.c, bound)]}


def _nf_fiberdim(a):
    fp = ser.numfn_from_json(_read(a.input, a.field))
    chk = is_admissible(fp)
    if not chk:
        raise DomainError(chk.failure)
    return {"dimension": fiber_dimension(fp, a.c)}


def _ls_validate(a):
    S = ser.linked_from_json(_read(a.input, a.field))
    _require(validate(S))
    return {"valid": True, "exact": is_exact(S).exact}


def _ls_profile(a):
    S = ser.linked_from_json(_read(a.input, a.field))
    _require(validate(S))
    return ser.numfn_to_json(numerical_profile(S))


def _ls_expand(a):
    S = ser.linked_from_json(_read(a.input, a.field))
    _require(validate(S))
    res = expand_to_exact(S)
    return {"sequence": ser.linked_to_json(res.sequence), "schedule": list(res.schedule)}


def _series(a, path=None):
    return ser.series_from_json(_read(path or a.input, a.field))


def _series_validate(a):
    _require(validate_series(_series(a)))
    return {"valid": True}


def _series_profile(a):
    return ser.numfn_to_json(series_profile(_series(a)))


def _series_forget(a):
    return ser.series_to_json(forget(_series(a), a.delta))


def _series_lift(a):
    g = _series(a)
    if a.c == 1:
        return ser.series_to_json(g)
    if a.refinement:
        fp = ser.numfn_from_json(_read(a.refinement, None))
    else:
        fp = refine_fff(series_profile(g), a.c, 1)
    return ser.series_to_json(fiber_sample(g, fp, a.c, seed=a.seed))


def _bound(a):
    return a.bound if a.bound is not None else DEFAULT_ENUM_BOUND


def _series_divisors(a):
    return ser.pg_to_json(enumerate_Pg(_series(a), _bound(a)))


def _series_compare(a):
    return compare_Pg(_series(a), _series(a, a.refined), _bound(a))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    common.add_argument("--bound", type=int, default=None, help="enumeration cap")
    common.add_argument("--field", type=str, default=None, help="reinterpret inputs over Q or Fp:<p>")
    common.add_argument("--pretty", action="store_true", help="indent the output")

    p = argparse.ArgumentParser(prog="levelseries", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_, **opts):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for flag, kw in opts.items():
            sp.add_argument(f"--{flag}", **kw)
        sp.add_argument("input", help='JSON document, or "-" for stdin')
        sp.set_defaults(handler=fn)
        return sp

    req_int = {"type": int, "required": True}
    add("nf-check", _nf_check, "admissibility and exactness of a numerical function")
    add("nf-refine", _nf_refine, "exact refinement of a numerical function", c=req_int, ell=req_int)
    add("nf-refinements", _nf_refinements, "all admissible refinements", c=req_int)
    add("nf-fiberdim", _nf_fiberdim, "fiber dimension of the forgetful map", c=req_int)
    add("ls-validate", _ls_validate, "check a linked sequence")
    add("ls-profile", _ls_profile, "numerical profile of a linked sequence")
    add("ls-expand", _ls_expand, "exact expansion and truncation schedule")
    add("series-validate", _series_validate, "check a limit series")
    add("series-profile", _series_profile, "numerical profile of a limit series")
    add("series-forget", _series_forget, "forget to a coarser level", delta=req_int)
    lift = add("series-lift", _series_lift, "sample a lift to level c*delta", c=req_int)
    lift.add_argument("--refinement", default=None, help="target numerical function (default: exact refinement)")
    cmp_ = add("series-compare", _series_compare, "compare divisor loci of g and a refinement")
    cmp_.add_argument("refined", help="series at the finer level")
    add("series-divisors", _series_divisors, "enumerate divisors of sections")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.field = ser.parse_field_flag(args.field) if args.field else None
        out, code = args.handler(args), 0
    except ser.FormatError as e:
        out, code = {"error": str(e)}, 2
    except DomainError as e:
        out, code = {"error": str(e), **e.extra}, 1
    except (ValueError, ZeroDivisionError) as e:
        out, code = {"error": str(e)}, 1
    sys.stdout.write(ser.dumps(out, pretty=args.pretty) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
