"""Command line interface and the on-disk point set format.

Point set files ("QPS 1") are plain text: a magic line, a "PG m q" line, then
one point per line as m+1 coordinates in [0, q).  Comments start with '#'.
Machine-readable output uses the qps-report/1 JSON schema (--json).  Census
witnesses are given as indices into the canonical point order of the space;
surgery records carry coordinate rows (hyperplanes as their dual vector,
other flats as a row basis).

Exit codes: 0 success, 1 verification failed, 2 usage or domain error,
3 file or format error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import census as census_lib
from .forms import (
    PolarKind,
    canonical_form,
    nucleus_point,
    point_set,
)
from .gf import SUPPORTED_ORDERS
from .pg import (
    Flat,
    PointSet,
    ProjSpace,
    flats_of_codim,
    normalize_point,
    null_space,
    space_for,
)
from .spectra import (
    cardinality_roots,
    classify,
    nucleus_conditions,
    profile,
    spectrum,
)
from . import surgery as surgery_lib

MAGIC = "QPS 1"
REPORT_FORMAT = "qps-report/1"


class BadHeader(ValueError):
    """Point set file does not start with the magic and space lines."""


class ParseError(ValueError):
    def __init__(self, msg: str, line: int):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class DuplicatePoint(ValueError):
    def __init__(self, line: int):
        super().__init__(f"line {line}: duplicate point")
        self.line = line


_FORMAT_ERRORS = (BadHeader, ParseError, DuplicatePoint)


def parse_point_set(text: str) -> PointSet:
    rows = [(n + 1, ln.strip()) for n, ln in enumerate(text.splitlines())]
    data = [(n, ln) for n, ln in rows if ln and not ln.startswith("#")]
    if not data or data[0][1] != MAGIC:
        raise BadHeader(f"expected '{MAGIC}' on the first line")
    if len(data) < 2:
        raise BadHeader("expected a 'PG m q' line")
    parts = data[1][1].split()
    if len(parts) != 3 or parts[0] != "PG":
        raise BadHeader("expected a 'PG m q' line")
    try:
        m, q = int(parts[1]), int(parts[2])
    except ValueError:
        raise BadHeader("m and q must be integers") from None
    try:
        space = space_for(m, q)
    except ValueError as exc:
        raise BadHeader(str(exc)) from None
    bits = 0
    for no, ln in data[2:]:
        fields = ln.split()
        if len(fields) != m + 1:
            raise ParseError(f"expected {m + 1} coordinates", no)
        try:
            vec = tuple(int(x) for x in fields)
        except ValueError:
            raise ParseError("coordinates must be integers", no) from None
        if any(not 0 <= c < q for c in vec):
            raise ParseError(f"coordinates must lie in [0, {q})", no)
        if not any(vec):
            raise ParseError("the zero vector is not a point", no)
        idx = normalize_point(space, vec)
        if bits >> idx & 1:
            raise DuplicatePoint(no)
        bits |= 1 << idx
    return PointSet(space, bits)


def format_point_set(s: PointSet) -> str:
    space = s.space
    lines = [MAGIC, f"PG {space.m} {space.q}"]
    for v in s.vectors():
        lines.append(" ".join(str(c) for c in v))
    return "\n".join(lines) + "\n"


def load_point_set(path: str) -> PointSet:
    with open(path, encoding="ascii") as fh:
        return parse_point_set(fh.read())


def save_point_set(path: str, s: PointSet) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_point_set(s))


def _parse_vec(arg: str, space: ProjSpace) -> int:
    """Point or dual-vector index from a comma separated coordinate string."""
    parts = arg.split(",")
    if len(parts) != space.m + 1:
        raise ValueError(f"expected {space.m + 1} comma separated coordinates")
    try:
        vec = tuple(int(x) for x in parts)
    except ValueError:
        raise ValueError("coordinates must be integers") from None
    if any(not 0 <= c < space.q for c in vec):
        raise ValueError(f"coordinates must lie in [0, {space.q})")
    if not any(vec):
        raise ValueError("the zero vector names no point")
    return normalize_point(space, vec)


def _report(command: str, space: ProjSpace | None = None) -> dict:
    rep: dict = {"format": REPORT_FORMAT, "command": command}
    if space is not None:
        rep["space"] = {"m": space.m, "q": space.q}
    return rep


def _spectrum_entries(hist: dict[int, int]) -> list[dict]:
    return [{"size": k, "count": v} for k, v in sorted(hist.items())]


def _verdict(cls) -> str:
    if not cls.quasi_polar:
        return "not_quasi_polar"
    if cls.exceptional:
        return f"exceptional_{cls.exceptional}"
    if cls.classical_size:
        return "classical_size"
    return "quasi_polar"


def _hyperplane_types(kind: PolarKind, hist: dict[int, int]) -> dict[str, int]:
    prof = profile(kind)
    out: dict[str, int] = {}
    for size, cnt in sorted(hist.items()):
        if size == prof.singular_size:
            lab = "singular"
        elif kind.family == "parabolic" and size == prof.sizes[0]:
            lab = "elliptic"
        elif kind.family == "parabolic" and size == prof.sizes[2]:
            lab = "hyperbolic"
        elif size in prof.sizes:
            lab = "nonsingular"
        else:
            lab = f"size_{size}"
        out[lab] = out.get(lab, 0) + cnt
    return out


def _print(rep: dict, human: list[str], as_json: bool) -> None:
    if as_json:
        print(json.dumps(rep, indent=2))
    else:
        for line in human:
            print(line)


def _kind_for(family: str, m: int, q: int) -> PolarKind:
    return PolarKind(family, m, q)


def _cmd_construct(args, threads: int) -> int:
    kind = _kind_for(args.kind, args.m, args.q)
    space = space_for(args.m, args.q)
    s = point_set(canonical_form(kind, space))
    save_point_set(args.out, s)
    cls = classify(s, kind, threads=threads)
    rep = _report("construct", space)
    rep["size"] = s.size
    rep["spectrum"] = _spectrum_entries(cls.histogram)
    rep["verdict"] = _verdict(cls)
    rep["hyperplane_types"] = _hyperplane_types(kind, cls.histogram)
    human = [
        f"wrote {s.size} points to {args.out}",
        "spectrum: " + " ".join(f"{k}:{v}" for k, v in sorted(cls.histogram.items())),
        f"verdict: {rep['verdict']}",
    ]
    _print(rep, human, args.json)
    return 0


def _cmd_spectrum(args, threads: int) -> int:
    s = load_point_set(args.infile)
    space = s.space
    rep = _report("spectrum", space)
    rep["size"] = s.size
    code = 0
    if args.kind:
        kind = _kind_for(args.kind, space.m, space.q)
        cls = classify(s, kind, threads=threads)
        rep["spectrum"] = _spectrum_entries(cls.histogram)
        rep["verdict"] = _verdict(cls)
        rep["hyperplane_types"] = _hyperplane_types(kind, cls.histogram)
        if not cls.quasi_polar:
            code = 1
        hist = cls.histogram
    else:
        hist = spectrum(s, threads=threads).histogram
        rep["spectrum"] = _spectrum_entries(hist)
    human = [
        f"{s.size} points in PG({space.m},{space.q})",
        "spectrum: " + " ".join(f"{k}:{v}" for k, v in sorted(hist.items())),
    ]
    if "verdict" in rep:
        human.append(f"verdict: {rep['verdict']}")
    _print(rep, human, args.json)
    return code


def _cmd_verify(args, threads: int) -> int:
    s = load_point_set(args.infile)
    space = s.space
    rpt = nucleus_conditions(s)
    rep = _report("verify", space)
    rep["size"] = s.size
    rep["conditions"] = dict(rpt.flags())
    rep["conditions"]["singular_count"] = rpt.singular_count
    rep["conditions"]["expected_singular"] = rpt.expected_singular
    rep["nucleus"] = {
        "exists": rpt.nucleus_candidate is not None,
        "point": rpt.nucleus_candidate,
    }
    human = [f"{s.size} points in PG({space.m},{space.q})"]
    for k, v in rpt.flags().items():
        human.append(f"condition {k}: {'yes' if v else 'no'}")
    human.append(f"singular hyperplanes: {rpt.singular_count} of {rpt.expected_singular} expected")
    human.append(f"nucleus candidate: {rpt.nucleus_candidate}")
    _print(rep, human, args.json)
    return 0


def _surgery_dispatch(args, s: PointSet, threads: int):
    """Run the chosen operation; returns (result, record, kind to verify)."""
    space = s.space
    op = args.op
    if op == "pivot":
        kind = _kind_for(args.kind, space.m, space.q)
        base = load_point_set(args.base)
        if base.space is not space:
            raise ValueError("base file lives in a different space")
        pi = _parse_vec(args.hyperplane, space)
        res, rec = surgery_lib.pivot(s, kind, pi, base)
        return res, rec, kind
    if op == "cone-swap":
        pi = _parse_vec(args.hyperplane, space)
        res, rec = surgery_lib.cone_swap(s, pi)
        return res, rec, _kind_for("parabolic", space.m, space.q)
    if op == "repeated-pivot":
        kind = _kind_for(args.kind, space.m, space.q)
        p = _parse_vec(args.p, space)
        r = _parse_vec(args.r, space)
        choices: dict[int, PointSet] = {}
        for entry in args.at or []:
            coords, _, path = entry.partition(":")
            if not path:
                raise ValueError("--at expects COORDS:PATH")
            rr = _parse_vec(coords, space)
            ch = load_point_set(path)
            if ch.space is not space:
                raise ValueError("base file lives in a different space")
            choices[rr] = ch
        res, rec = surgery_lib.repeated_pivot(s, kind, p, r, choices)
        return res, rec, kind
    if op == "affine-switch":
        res, rec = surgery_lib.affine_switch(s)
        return res, rec, _kind_for("elliptic", space.m, space.q)
    if op == "q2-switch":
        pi = _parse_vec(args.hyperplane, space)
        sec = load_point_set(args.section)
        if sec.space is not space:
            raise ValueError("section file lives in a different space")
        res, rec = surgery_lib.nonsingular_switch_q2(s, pi, sec)
        return res, rec, _kind_for("parabolic", space.m, space.q)
    if op == "q3-switch":
        first, _, second = args.sub.partition(";")
        if not second:
            raise ValueError("--sub expects two dual vectors joined by ';'")
        xi = _parse_vec(first, space)
        h2 = _parse_vec(second, space)
        if xi == h2:
            raise ValueError("--sub needs two distinct hyperplanes")
        basis = null_space(space.f, [space.points[xi], space.points[h2]])
        pi_sub = Flat(space, basis)
        res, rec = surgery_lib.internal_switch_q3(s, xi, pi_sub)
        return res, rec, _kind_for("parabolic", space.m, space.q)
    if op == "oval-swap":
        tangent = _parse_vec(args.tangent, space)
        res, rec = surgery_lib.oval_nucleus_swap(s, tangent)
        return res, rec, _kind_for("parabolic", space.m, space.q)
    if op == "shifted-nucleus":
        pi = _parse_vec(args.hyperplane, space)
        res, rec = surgery_lib.shifted_nucleus_pivot(s, pi)
        return res, rec, _kind_for("parabolic", space.m, space.q)
    raise ValueError(f"unknown operation {op}")


def _cmd_surgery(args, threads: int) -> int:
    s = load_point_set(args.infile)
    space = s.space
    res, rec, kind = _surgery_dispatch(args, s, threads)
    if args.out:
        save_point_set(args.out, res)
    cls = classify(res, kind, threads=threads)
    rep = _report("surgery", space)
    rep["size"] = res.size
    rep["spectrum"] = _spectrum_entries(cls.histogram)
    rep["verdict"] = _verdict(cls)
    rep["surgery"] = rec.to_dict()
    human = [
        f"{rec.kind}: removed {rec.removed.size}, added {rec.added.size}",
        f"result: {res.size} points",
        "spectrum: " + " ".join(f"{k}:{v}" for k, v in sorted(cls.histogram.items())),
        f"verdict: {rep['verdict']}",
    ]
    if args.out:
        human.append(f"wrote result to {args.out}")
    _print(rep, human, args.json)
    return 0 if cls.quasi_polar else 1


def _census_result(args, threads: int) -> census_lib.CensusResult:
    name = args.name
    if name == "nucleus-pivot":
        s = _census_input(args, 4, 2)
        return census_lib.nucleus_pivot_census(s, threads=threads)
    if name == "singular-switch":
        s = _census_input(args, 4, 2)
        return census_lib.singular_switch_census(s, threads=threads)
    if name == "nonsingular-switch":
        kind = _kind_for(args.kind, args.m, args.q)
        if args.infile:
            s = load_point_set(args.infile)
            if (s.space.m, s.space.q) != (args.m, args.q):
                raise ValueError(f"census needs a point set in PG({args.m},{args.q})")
        else:
            s = point_set(canonical_form(kind, space_for(args.m, args.q)))
        return census_lib.nonsingular_switch_census(s, kind, threads=threads)
    if name == "quadrics":
        kind = _kind_for(args.kind, args.m, args.q)
        space = space_for(args.m, args.q)
        import time as _time

        t0 = _time.perf_counter()
        sets = census_lib.enumerate_quadrics(space, kind)
        return census_lib.CensusResult(
            name="quadrics",
            m=args.m,
            q=args.q,
            total_candidates=len(sets),
            breakdown={args.kind: len(sets)},
            witnesses={args.kind: [t.indices() for t in sets[:10]]},
            runtime_ms=int((_time.perf_counter() - t0) * 1000),
        )
    if name == "classical-dist":
        return _classical_dist_census(args)
    if name == "two-secants":
        return _two_secant_census(args)
    raise ValueError(f"unknown census {name}")


def _census_input(args, m: int, q: int) -> PointSet:
    if args.infile:
        s = load_point_set(args.infile)
        if (s.space.m, s.space.q) != (m, q):
            raise ValueError(f"census needs a point set in PG({m},{q})")
        return s
    kind = _kind_for("parabolic", m, q)
    return point_set(canonical_form(kind, space_for(m, q)))


def _classical_dist_census(args) -> census_lib.CensusResult:
    import time as _time

    t0 = _time.perf_counter()
    kind = _kind_for(args.kind, args.m, args.q)
    space = space_for(args.m, args.q)
    form = canonical_form(kind, space)
    agg: dict[str, int] = {}
    total = 0
    for flat in flats_of_codim(space, 2):
        d = census_lib.classical_distribution(form, flat)
        label = f"sec={d['flat_section']};" + ";".join(
            f"{k}={v}" for k, v in d["hyperplanes"].items()
        )
        agg[label] = agg.get(label, 0) + 1
        total += 1
    return census_lib.CensusResult(
        name="classical-dist",
        m=args.m,
        q=args.q,
        total_candidates=total,
        breakdown=dict(sorted(agg.items())),
        witnesses={},
        runtime_ms=int((_time.perf_counter() - t0) * 1000),
    )


def _two_secant_census(args) -> census_lib.CensusResult:
    import time as _time

    t0 = _time.perf_counter()
    kind = _kind_for(args.kind, args.m, args.q)
    space = space_for(args.m, args.q)
    form = canonical_form(kind, space)
    zeros = point_set(form)
    nuc = nucleus_point(form)
    agg: dict[str, int] = {}
    total = 0
    for p in range(space.n_points):
        if zeros.contains(p) or p == nuc:
            continue
        v = census_lib.two_secant_count(form, p)
        key = f"two_secants={v}"
        agg[key] = agg.get(key, 0) + 1
        total += 1
    n = kind.m // 2
    expected = args.q ** (2 * n - 1) // 2
    return census_lib.CensusResult(
        name="two-secants",
        m=args.m,
        q=args.q,
        total_candidates=total,
        breakdown=dict(sorted(agg.items())),
        witnesses={},
        runtime_ms=int((_time.perf_counter() - t0) * 1000),
        extra={"expected": expected},
    )


def _cmd_census(args, threads: int) -> int:
    result = _census_result(args, threads)
    rep = _report("census", space_for(result.m, result.q))
    body = result.to_dict()
    body.pop("runtime_ms", None)
    rep["census"] = body
    human = [f"census {result.name} over PG({result.m},{result.q})"]
    human.append(f"candidates: {result.total_candidates}")
    for k, v in result.breakdown.items():
        human.append(f"  {k}: {v}")
    human.append(f"runtime: {result.runtime_ms} ms")
    if args.csv:
        for k, v in result.breakdown.items():
            print(f"{k},{v}")
        return 0
    _print(rep, human, args.json)
    return 0


def _cmd_roots(args, threads: int) -> int:
    kind = _kind_for(args.kind, args.m, args.q)
    rr = cardinality_roots(kind)
    rep = _report("roots", space_for(args.m, args.q))
    rep["roots"] = {
        "classical": rr.classical_root,
        "other": str(rr.other_root),
        "other_integral": rr.other_integral,
        "tag": rr.tag,
    }
    human = [
        f"classical cardinality: {rr.classical_root}",
        f"other root: {rr.other_root}",
        f"integral: {'yes' if rr.other_integral else 'no'}"
        + (f" ({rr.tag})" if rr.tag else ""),
    ]
    _print(rep, human, args.json)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qps",
        description="quasi-polar point sets in PG(m, q): build, check, switch",
    )
    ap.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("QPS_THREADS", "1")),
        help="worker threads for spectra and censuses (default 1)",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    fams = ["parabolic", "hyperbolic", "elliptic", "hermitian"]

    p = sub.add_parser("construct", help="write a canonical classical point set")
    p.add_argument("what", choices=["canonical"])
    p.add_argument("--kind", required=True, choices=fams)
    p.add_argument("--m", required=True, type=int)
    p.add_argument("--q", required=True, type=int, choices=SUPPORTED_ORDERS)
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("spectrum", help="hyperplane intersection spectrum of a file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--kind", choices=fams)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="nucleus condition flags for a point set")
    p.add_argument("what", choices=["conditions"])
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("surgery", help="switching operations")
    p.add_argument(
        "op",
        choices=[
            "pivot",
            "cone-swap",
            "repeated-pivot",
            "affine-switch",
            "q2-switch",
            "q3-switch",
            "oval-swap",
            "shifted-nucleus",
        ],
    )
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.add_argument("--kind", choices=fams)
    p.add_argument("--hyperplane", help="dual vector, comma separated coordinates")
    p.add_argument("--base", help="point set file with the replacement base")
    p.add_argument("--section", help="point set file with the replacement section")
    p.add_argument("--sub", help="two dual vectors joined by ';'")
    p.add_argument("--tangent", help="dual vector of the tangent line")
    p.add_argument("--p", help="first line point, comma separated coordinates")
    p.add_argument("--r", help="second line point, comma separated coordinates")
    p.add_argument(
        "--at",
        action="append",
        help="COORDS:PATH replacement base for one line point (repeatable)",
    )
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("census", help="exhaustive desk-scale censuses")
    p.add_argument(
        "name",
        choices=[
            "nucleus-pivot",
            "singular-switch",
            "nonsingular-switch",
            "quadrics",
            "classical-dist",
            "two-secants",
        ],
    )
    p.add_argument("--in", dest="infile")
    p.add_argument("--kind", choices=fams, default="parabolic")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--q", type=int, default=2, choices=SUPPORTED_ORDERS)
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", action="store_true")

    p = sub.add_parser("roots", help="both roots of the forced cardinality quadratic")
    p.add_argument("--kind", required=True, choices=fams)
    p.add_argument("--m", required=True, type=int)
    p.add_argument("--q", required=True, type=int, choices=SUPPORTED_ORDERS)
    p.add_argument("--json", action="store_true")
    return ap


_REQUIRED = {
    "pivot": ("kind", "hyperplane", "base"),
    "cone-swap": ("hyperplane",),
    "repeated-pivot": ("kind", "p", "r"),
    "affine-switch": (),
    "q2-switch": ("hyperplane", "section"),
    "q3-switch": ("sub",),
    "oval-swap": ("tangent",),
    "shifted-nucleus": ("hyperplane",),
}


def run(argv: list[str] | None = None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if args.command == "surgery":
        missing = [a for a in _REQUIRED[args.op] if getattr(args, a) is None]
        if missing:
            print(
                f"error: {args.op} requires --" + ", --".join(missing),
                file=sys.stderr,
            )
            return 2
    handlers = {
        "construct": _cmd_construct,
        "spectrum": _cmd_spectrum,
        "verify": _cmd_verify,
        "surgery": _cmd_surgery,
        "census": _cmd_census,
        "roots": _cmd_roots,
    }
    try:
        return handlers[args.command](args, max(1, args.threads))
    except _FORMAT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
