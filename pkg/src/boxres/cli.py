"""Command-line front end.

Ideal file grammar (UTF-8)::

    file      := line*
    line      := [content] ["#" comment]
    content   := header | exponents
    header    := "m" "=" INT            (first non-blank content line)
    exponents := INT ("," INT){m-1}     (one generator per line)

Blank lines and comments are ignored; whitespace around tokens is allowed.

Exit codes: 0 every check passed, 1 a check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from . import __version__
from .complex import (BoxComplex, build_complex, exactness_report, per_degree_oracle,
                      psi_norm_bound_check)
from .geometry import khom_formal_sum
from .ideal import MonomialIdeal, UnitIdealError
from .lattice import Box, grid
from .toeplitz import (SCHEMA_VERSION, decay_profile, projection_commutator, quotient_toeplitz,
                       schatten_partial_sums, self_commutator, toeplitz_matrix)

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


class IdealParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass
class IdealSpec:
    m: int
    generators: list[tuple[int, ...]]
    M: int = 8
    dedupe: bool = True
    s: int = 0

    def ideal(self) -> MonomialIdeal:
        return MonomialIdeal(self.m, tuple(self.generators))


def parse_ideal(text: str) -> IdealSpec:
    m = None
    gens: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m is None:
            key, eq, val = line.partition("=")
            if not eq or key.strip() != "m":
                raise IdealParseError(lineno, f"expected header 'm=<int>', got {line!r}")
            try:
                m = int(val)
            except ValueError:
                raise IdealParseError(lineno, f"bad dimension {val.strip()!r}") from None
            if m < 1:
                raise IdealParseError(lineno, "dimension must be >= 1")
            continue
        try:
            vec = tuple(int(tok) for tok in line.split(","))
        except ValueError:
            raise IdealParseError(lineno, f"malformed exponent vector {line!r}") from None
        if len(vec) != m:
            raise IdealParseError(lineno, f"expected {m} exponents, got {len(vec)}")
        if any(x < 0 for x in vec):
            raise IdealParseError(lineno, f"negative exponent in {line!r}")
        gens.append(vec)
    if m is None:
        raise IdealParseError(1, "missing header 'm=<int>'")
    if not gens:
        raise IdealParseError(len(text.splitlines()) or 1, "no generators")
    return IdealSpec(m, gens)


# -- payloads ------------------------------------------------------------------

def _box_dict(box: Box) -> dict:
    return {"j": list(box.j), "b": list(box.b)}


def _header(command: str, spec: IdealSpec, ideal: MonomialIdeal) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "ideal": {"m": ideal.m, "generators": [list(g) for g in ideal.generators]},
        "M": spec.M,
        "dedupe": spec.dedupe,
        "weight": spec.s,
    }


def resolve_payload(spec: IdealSpec, cx: BoxComplex) -> tuple[dict, bool]:
    report = exactness_report(cx)
    out = _header("resolve", spec, cx.ideal)
    out.update({"k": cx.k, "boxes": [_box_dict(b) for b in cx.boxes],
                "dims": cx.dims(), "exactness": report.to_dict()})
    return out, report.passed


def exactness_payload(spec: IdealSpec, cx: BoxComplex) -> tuple[dict, bool]:
    out, ok = resolve_payload(spec, cx)
    out["command"] = "exactness"
    norms = [psi_norm_bound_check(cx, q) for q in range(cx.k)]
    oracle = [per_degree_oracle(cx, n) for n in grid(cx.m, cx.M)]
    local_ranks = [sum(r.ranks[q] for r in oracle) for q in range(cx.k)]
    consistent = local_ranks == out["exactness"]["ranks"]
    out["norm_bounds"] = [r.to_dict() for r in norms]
    out["oracle"] = {"degrees": len(oracle), "failures": [r.to_dict() for r in oracle if not r.passed],
                     "summed_ranks": local_ranks, "consistent_with_global": consistent}
    ok = ok and all(r.passed for r in norms) and all(r.passed for r in oracle) and consistent
    out["passed"] = ok
    return out, ok


def oracle_payload(spec: IdealSpec, cx: BoxComplex, degree: tuple[int, ...] | None) -> tuple[dict, bool]:
    points = [degree] if degree is not None else grid(cx.m, cx.M)
    reports = [per_degree_oracle(cx, n) for n in points]
    out = _header("oracle", spec, cx.ideal)
    out["k"] = cx.k
    out["degrees"] = [r.to_dict() for r in reports]
    ok = all(r.passed for r in reports)
    out["passed"] = ok
    return out, ok


def khom_payload(spec: IdealSpec, cx: BoxComplex) -> dict:
    out = _header("khom", spec, cx.ideal)
    out["k"] = cx.k
    out["terms"] = [t.to_dict() for t in khom_formal_sum(cx)]
    return out


def _resolve_csv(payload: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "dim", "rank_out", "kernel_dim"])
    ex = payload["exactness"]
    ranks = ex["ranks"] + [0]
    for q, d in enumerate(ex["dims"]):
        w.writerow([q, d, ranks[q], ex["kernel_dims"][q]])
    return buf.getvalue()


# -- argument handling ---------------------------------------------------------

def _read_spec(args) -> IdealSpec:
    if args.input in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    spec = parse_ideal(text)
    spec.M = args.m_cutoff
    spec.dedupe = not args.no_dedupe
    spec.s = args.weight
    return spec


def _emit(text: str, args) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _int_tuple(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="ideal file ('-' or omitted: stdin)")
    common.add_argument("--m-cutoff", type=int, default=8, help="truncation M: keep n with every n^i < M")
    common.add_argument("--no-dedupe", action="store_true", help="keep boxes contained in other boxes")
    common.add_argument("--weight", type=int, default=0, help="weighted Bergman parameter s")
    common.add_argument("--format", choices=("json", "csv", "mm"), default="json")
    common.add_argument("--output", "-o", help="write here instead of stdout")

    parser = argparse.ArgumentParser(prog="boxres", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("resolve", parents=[common], help="boxes, level dimensions and exactness")
    sub.add_parser("exactness", parents=[common], help="exactness plus norm bounds and the per-degree oracle")
    o = sub.add_parser("oracle", parents=[common], help="per-exponent exactness oracle")
    o.add_argument("--degree", type=_int_tuple, help="single exponent, e.g. 1,0")
    sub.add_parser("khom", parents=[common], help="formal alternating sum of resolution components")
    t = sub.add_parser("toeplitz", parents=[common], help="truncated Toeplitz-type operators")
    t.add_argument("--operator", choices=("toeplitz", "projection-commutator", "self-commutator", "quotient"),
                   default="toeplitz")
    t.add_argument("--box", type=int, default=1, help="1-based index into the ideal's boxes (0: full space)")
    t.add_argument("--p", type=int, default=1, help="shift coordinate for toeplitz/commutator/quotient")
    t.add_argument("--s", type=int, default=1, help="adjoint coordinate of the self-commutator")
    t.add_argument("--t", type=int, default=1, help="shift coordinate of the self-commutator")
    t.add_argument("--fit-range", type=_int_tuple, default=(20, 200))
    t.add_argument("--schatten", type=float, help="report Schatten-p partial sums for this p")
    t.add_argument("--schatten-cutoffs", type=_int_tuple, help="truncations for the partial sums")
    return parser


def _toeplitz(args, spec: IdealSpec) -> str:
    ideal = spec.ideal()
    if args.operator == "quotient":
        op = quotient_toeplitz(ideal, args.p, spec.M, spec.s)
    else:
        boxes = build_complex(ideal, 1, spec.dedupe).boxes
        if not 0 <= args.box <= len(boxes):
            raise ValueError(f"box selector {args.box} outside [0, {len(boxes)}]")
        box = Box(ideal.m) if args.box == 0 else boxes[args.box - 1]
        if args.operator == "toeplitz":
            op = toeplitz_matrix(box, args.p, spec.M, spec.s)
        elif args.operator == "projection-commutator":
            op = projection_commutator(box, args.p, spec.M)
        else:
            op = self_commutator(box, args.s, args.t, spec.M)
    profile = decay_profile(op, tuple(args.fit_range))
    if args.format == "mm":
        return op.matrix_market()
    if args.format == "csv":
        return profile.to_csv()
    out = _header("toeplitz", spec, ideal)
    out.update({"operator": op.to_json_obj(), "decay_profile": profile.to_dict()})
    if args.schatten is not None:
        cutoffs = args.schatten_cutoffs or tuple(sorted({max(1, spec.M // 4), max(1, spec.M // 2), spec.M}))
        out["schatten"] = schatten_partial_sums(op, args.schatten, cutoffs).to_dict()
    return _dump(out)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = _read_spec(args)
        if spec.M < 1:
            raise ValueError("--m-cutoff must be >= 1")
        if args.command == "toeplitz":
            _emit(_toeplitz(args, spec), args)
            return EXIT_OK
        cx = build_complex(spec.ideal(), spec.M, spec.dedupe)
        if args.command == "resolve":
            payload, ok = resolve_payload(spec, cx)
        elif args.command == "exactness":
            payload, ok = exactness_payload(spec, cx)
        elif args.command == "oracle":
            payload, ok = oracle_payload(spec, cx, args.degree)
        else:
            payload, ok = khom_payload(spec, cx), True
    except (IdealParseError, UnitIdealError, ValueError, OSError) as exc:
        print(f"boxres: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.format == "csv" and "exactness" in payload:
        _emit(_resolve_csv(payload), args)
    else:
        _emit(_dump(payload), args)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
