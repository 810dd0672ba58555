"""The ``khext`` command line tool.

One subcommand per capability: ``classify`` (configuration report),
``homology`` (extreme / almost-extreme / arbitrary quantum grading),
``extreme`` (Lando graph, independence complex, poset duality),
``decompose`` (subposet homologies and the cofibre partition report),
``skein`` (short/long exact sequences of one chord), ``simplify``
(suspension-only chord deletions), ``verify`` (the property suite) and
``oracle`` (brute-force Khovanov homology).

Output is JSON by default (``--format tsv`` flattens to key/value rows),
byte-deterministic for fixed input and flags, and carries the schema tag
``khext/1``.  Exit codes: 0 success, 1 input error, 2 verification
failure, 3 resource guard.  Input/output formats are documented in
``FORMATS.md``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .algebra import dualize, homology, is_chain_map, solve_matrix
from .algebra.intmat import IntMat
from .configs import classify_phi_by_configs, detect_configs
from .decomp import simplify, verify_cofibre_partition, verify_skein
from .extreme import dual_subposet_check, graph_shape, independence_complex, lando_graph
from .functors import (
    almost_extreme_khovanov,
    build_F_complex,
    build_M_complex,
    build_extreme_complex,
    build_gamma,
    factor_through_pointed,
)
from .ingest import (
    ParseError,
    cd_to_text,
    j_max,
    load_diagram,
    parse_diagram_text,
    to_chord_diagram,
)
from .model import PDCode
from .oracle import almost_extreme_agreement, khovanov_homology
from .statecube import CubeIndex

SCHEMA = "khext/1"

__all__ = ["main", "run"]


class CliInputError(Exception):
    """Bad file, flag or diagram: exit code 1."""


class GuardRefusal(Exception):
    """A resource guard tripped: exit code 3."""


# ---------------------------------------------------------------------------
# input handling
# ---------------------------------------------------------------------------


def _load(path: str, max_crossings: int):
    try:
        if path == "-":
            obj = parse_diagram_text(sys.stdin.read())
        elif not Path(path).is_file():
            raise CliInputError(f"no such file: {path}")
        else:
            obj = load_diagram(path)
    except (ParseError, ValueError) as exc:
        raise CliInputError(f"{path}: {exc}") from exc
    if obj.n > max_crossings:
        raise GuardRefusal(
            f"{path}: {obj.n} crossings exceeds --max-crossings={max_crossings}"
        )
    return obj


# ---------------------------------------------------------------------------
# output handling
# ---------------------------------------------------------------------------


def _groups_json(groups: dict) -> dict:
    return {
        str(k): {"free": b, "torsion": list(t)}
        for k, (b, t) in sorted(groups.items())
    }


def _flatten(obj, prefix: str = "") -> list[tuple[str, str]]:
    rows: list[tuple[str, str]] = []
    if isinstance(obj, dict):
        for k in sorted(obj, key=lambda x: (type(x).__name__, x)):
            rows.extend(_flatten(obj[k], f"{prefix}{k}."))
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            rows.extend(_flatten(v, f"{prefix}{i}."))
    else:
        rows.append((prefix[:-1], json.dumps(obj)))
    return rows


def _emit(doc: dict, fmt: str) -> None:
    doc = {"schema": SCHEMA, **doc}
    if fmt == "json":
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for key, val in _flatten(doc):
            print(f"{key}\t{val}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_classify(args) -> int:
    d = to_chord_diagram(_load(args.path, args.max_crossings))
    doc = {"file": args.path, "report": detect_configs(d).describe()}
    _emit(doc, args.format)
    return 0


def _almost_extreme_groups(cube: CubeIndex, functor: str) -> dict:
    return _groups_json(almost_extreme_khovanov(cube, functor).groups)


def _extreme_groups(cube: CubeIndex) -> dict:
    h = homology(dualize(build_extreme_complex(cube)))
    shift = cube.diagram.n_minus or 0
    return _groups_json({-k - shift: g for k, g in h.groups.items()})


def _cmd_homology(args) -> int:
    obj = _load(args.path, args.max_crossings)
    d = to_chord_diagram(obj)
    try:
        jm: Optional[int] = j_max(d)
    except ValueError:
        jm = None

    doc: dict = {"file": args.path, "grading": args.grading, "groups": {}}
    status = 0
    if args.grading == "almax":
        cube = CubeIndex(d)
        doc["j"] = None if jm is None else jm - 2
        tags = ("F", "M") if args.functor == "both" else (args.functor,)
        for tag in tags:
            doc["groups"][tag] = _almost_extreme_groups(cube, tag)
        if len(tags) == 2:
            doc["agree"] = doc["groups"]["F"] == doc["groups"]["M"]
            if not doc["agree"]:
                status = 2
    elif args.grading == "max":
        doc["j"] = jm
        doc["groups"]["X"] = _extreme_groups(CubeIndex(d))
    else:  # j=<int>
        try:
            j = int(args.grading.split("=", 1)[1])
        except (IndexError, ValueError):
            raise CliInputError(
                f"bad --grading {args.grading!r}: want almax, max or j=<int>"
            ) from None
        if not isinstance(obj, PDCode):
            raise CliInputError(
                "arbitrary quantum gradings run through the oracle and need "
                "a planar diagram code"
            )
        doc["j"] = j
        table = khovanov_homology(obj, j=j, max_crossings=args.max_crossings)
        doc["groups"]["oracle"] = _groups_json(table[j].groups)
    _emit(doc, args.format)
    return status


def _cmd_extreme(args) -> int:
    d = to_chord_diagram(_load(args.path, args.max_crossings))
    g = lando_graph(d)
    if len(g.vertices) > args.max_independence_vertices:
        raise GuardRefusal(
            f"{args.path}: Lando graph has {len(g.vertices)} vertices, "
            f"exceeding --max-independence-vertices="
            f"{args.max_independence_vertices}"
        )
    dual = dual_subposet_check(d, max_vertices=args.max_independence_vertices)
    ind = independence_complex(g, max_vertices=args.max_independence_vertices)
    shape = graph_shape(g)
    doc = {
        "file": args.path,
        "lando": {
            "vertices": sorted(g.vertices),
            "edges": sorted(sorted(e) for e in g.edges),
            "shape": list(shape) if shape else None,
        },
        "independence": {
            "f_vector": list(ind.f_vector()),
            "reduced_homology": _groups_json(dual["independence"]),
        },
        "duality": {
            "extreme_complex": _groups_json(dual["extreme"]),
            "translated": _groups_json(dual["translated"]),
            "agree": dual["agree"],
        },
    }
    _emit(doc, args.format)
    return 0 if dual["agree"] else 2


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _cmd_decompose(args) -> int:
    d = to_chord_diagram(_load(args.path, args.max_crossings))
    report = verify_cofibre_partition(d)
    doc = {"file": args.path, "cofibre": _json_safe(report)}
    _emit(doc, args.format)
    return 0 if report["ok"] else 2


def _cmd_skein(args) -> int:
    d = to_chord_diagram(_load(args.path, args.max_crossings))
    try:
        report = verify_skein(CubeIndex(d), args.chord, sequence=args.sequence)
    except ValueError as exc:
        raise CliInputError(f"{args.path}: {exc}") from exc
    doc = {"file": args.path, "skein": _json_safe(report)}
    _emit(doc, args.format)
    return 0 if report["ok"] else 2


def _cmd_simplify(args) -> int:
    d = to_chord_diagram(_load(args.path, args.max_crossings))
    reduced, suspensions, log = simplify(d)
    doc = {
        "file": args.path,
        "suspensions": suspensions,
        "moves": [_json_safe(m) for m in log],
        "reduced": {
            "n": reduced.n,
            "circles": len(reduced.circles),
            "text": cd_to_text(reduced),
        },
    }
    _emit(doc, args.format)
    return 0


def _cmd_oracle(args) -> int:
    obj = _load(args.path, args.max_crossings)
    if not isinstance(obj, PDCode):
        raise CliInputError("the oracle needs a planar diagram code")
    j = args.j
    if j not in (None, "all"):
        try:
            j = int(j)
        except ValueError:
            raise CliInputError(f"bad --j {args.j!r}: want an integer or 'all'") from None
    try:
        table = khovanov_homology(obj, j=j, max_crossings=args.max_crossings)
    except ValueError as exc:
        raise GuardRefusal(f"{args.path}: {exc}") from exc
    doc = {
        "file": args.path,
        "khovanov": {str(q): _groups_json(h.groups) for q, h in sorted(table.items())},
    }
    _emit(doc, args.format)
    return 0


# ---------------------------------------------------------------------------
# the verify suite
# ---------------------------------------------------------------------------

_ALL_CHECKS = (
    "d_squared",
    "gamma",
    "classifier",
    "oracle",
    "duality",
    "factorization",
    "cofibre",
    "skein",
)

_CLASSIFIER_CAP = 12
_SEQUENCE_CAP = 10


def _d_squared_ok(c) -> bool:
    for k in c.basis:
        d1, d2 = c.d(k), c.d(k + 1)
        if d1 is not None and d2 is not None and not (d1 @ d2).is_zero():
            return False
    return True


def _gamma_ok(cube: CubeIndex) -> bool:
    mc = build_M_complex(cube)
    fc = build_F_complex(cube)
    g = build_gamma(cube)
    if not is_chain_map(g, mc, fc):
        return False
    for w, mat in g.items():
        if mat.nrows != mat.ncols:
            return False
        inv = solve_matrix(mat, IntMat.identity(mat.nrows))
        if inv is None or inv @ mat != IntMat.identity(mat.nrows):
            return False
    return True


def _verify_one(path: str, max_crossings: int, max_vertices: int,
                checks: Sequence[str]) -> dict:
    obj = _load(path, max_crossings)
    d = to_chord_diagram(obj)
    cube = CubeIndex(d)
    rep = detect_configs(d)
    out: dict = {"file": path, "n": d.n, "checks": {}, "ok": True}

    def record(name: str, ok: Optional[bool], skipped: Optional[str] = None) -> None:
        entry: dict = {}
        if skipped is not None:
            entry["skipped"] = skipped
        else:
            entry["ok"] = bool(ok)
            out["ok"] = out["ok"] and bool(ok)
        out["checks"][name] = entry

    for name in checks:
        if name == "d_squared":
            record(name, _d_squared_ok(build_F_complex(cube))
                   and _d_squared_ok(build_M_complex(cube)))
        elif name == "gamma":
            record(name, _gamma_ok(cube))
        elif name == "classifier":
            if d.n > _CLASSIFIER_CAP:
                record(name, None, f"n > {_CLASSIFIER_CAP}")
                continue
            ok = all(
                classify_phi_by_configs(d, mask, rep) == min(cube.phi(mask), 2)
                for mask in range(1 << d.n)
            )
            record(name, ok)
        elif name == "oracle":
            if not isinstance(obj, PDCode):
                record(name, None, "chord-diagram input")
            else:
                record(name, almost_extreme_agreement(obj)["agree"])
        elif name == "duality":
            try:
                record(name, dual_subposet_check(d, max_vertices=max_vertices)["agree"])
            except ValueError:
                record(name, None, f"Lando graph beyond {max_vertices} vertices")
        elif name == "factorization":
            f_ok = factor_through_pointed(cube, "F")["factors"] == rep.one_adequate
            m_ok = factor_through_pointed(cube, "M")["factors"] == (
                not rep.alternating_pairs
            )
            record(name, f_ok and m_ok)
        elif name == "cofibre":
            if d.n > _SEQUENCE_CAP:
                record(name, None, f"n > {_SEQUENCE_CAP}")
            else:
                record(name, verify_cofibre_partition(cube)["ok"])
        elif name == "skein":
            if d.n > _SEQUENCE_CAP:
                record(name, None, f"n > {_SEQUENCE_CAP}")
            elif d.n == 0:
                record(name, None, "no chords")
            else:
                record(
                    name,
                    all(verify_skein(cube, a)["ok"] for a in range(d.n)),
                )
        else:
            raise CliInputError(f"unknown check {name!r}")
    return out


def _verify_worker(job: tuple) -> dict:
    path, max_crossings, max_vertices, checks = job
    try:
        return _verify_one(path, max_crossings, max_vertices, checks)
    except GuardRefusal as exc:
        return {"file": path, "guard": str(exc), "ok": False}
    except CliInputError as exc:
        return {"file": path, "error": str(exc), "ok": False}


def _expand_paths(paths: Sequence[str]) -> list[str]:
    out: list[str] = []
    for p in paths:
        pp = Path(p)
        if pp.is_dir():
            found = sorted(
                str(f) for f in pp.iterdir() if f.suffix in (".pd", ".cd")
            )
            if not found:
                raise CliInputError(f"no .pd or .cd files in directory {p}")
            out.extend(found)
        else:
            out.append(p)
    return out


def _cmd_verify(args) -> int:
    if args.checks and args.all:
        raise CliInputError("--all and --checks are mutually exclusive")
    if args.checks:
        checks = tuple(s.strip() for s in args.checks.split(",") if s.strip())
        for c in checks:
            if c not in _ALL_CHECKS:
                raise CliInputError(
                    f"unknown check {c!r}; available: {', '.join(_ALL_CHECKS)}"
                )
    else:
        checks = _ALL_CHECKS

    paths = _expand_paths(args.paths)
    jobs = [(p, args.max_crossings, args.max_independence_vertices, checks)
            for p in paths]
    if args.jobs > 1 and len(jobs) > 1:
        import concurrent.futures as cf

        with cf.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_worker, jobs))
    else:
        results = [_verify_worker(j) for j in jobs]

    guard = next((r for r in results if "guard" in r), None)
    doc = {"files": results, "ok": all(r["ok"] for r in results)}
    _emit(doc, args.format)
    if guard is not None:
        print(guard["guard"], file=sys.stderr)
        return 3
    if any("error" in r for r in results):
        for r in results:
            if "error" in r:
                print(r["error"], file=sys.stderr)
        return 1
    return 0 if doc["ok"] else 2


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # input errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "tsv"), default="json",
        help="output format (default json)",
    )
    common.add_argument(
        "--max-crossings", type=int, default=14, metavar="N",
        help="refuse diagrams with more crossings (default 14)",
    )
    common.add_argument(
        "--max-independence-vertices", type=int, default=24, metavar="N",
        help="refuse independence-complex enumeration beyond N vertices "
             "(default 24)",
    )
    common.add_argument(
        "--jobs", type=int, default=1, metavar="N",
        help="worker processes for multi-file verification (default 1)",
    )

    top = _Parser(
        prog="khext",
        description="Extreme and almost-extreme Khovanov homology of link "
                    "diagrams.",
    )
    sub = top.add_subparsers(dest="command", metavar="<command>")

    p = sub.add_parser("classify", parents=[common],
                       help="configuration report of the all-ones resolution")
    p.add_argument("path")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("homology", parents=[common],
                       help="homology in a chosen quantum grading")
    p.add_argument("--grading", default="almax", metavar="almax|max|j=<int>")
    p.add_argument("--functor", choices=("F", "M", "both"), default="both")
    p.add_argument("path")
    p.set_defaults(fn=_cmd_homology)

    p = sub.add_parser("extreme", parents=[common],
                       help="Lando graph / independence complex report")
    p.add_argument("path")
    p.set_defaults(fn=_cmd_extreme)

    p = sub.add_parser("decompose", parents=[common],
                       help="subposet homologies and the cofibre partition")
    p.add_argument("path")
    p.set_defaults(fn=_cmd_decompose)

    p = sub.add_parser("skein", parents=[common],
                       help="verify the exact sequences of one chord")
    p.add_argument("--chord", type=int, required=True, metavar="I")
    p.add_argument("--sequence", choices=("M", "X"), default=None)
    p.add_argument("path")
    p.set_defaults(fn=_cmd_skein)

    p = sub.add_parser("simplify", parents=[common],
                       help="delete suspension-only chords")
    p.add_argument("path")
    p.set_defaults(fn=_cmd_simplify)

    p = sub.add_parser("verify", parents=[common],
                       help="run the property suite over files or directories")
    p.add_argument("--all", action="store_true",
                   help="run every check (the default)")
    p.add_argument("--checks", default=None, metavar="LIST",
                   help="comma-separated subset of: " + ", ".join(_ALL_CHECKS))
    p.add_argument("paths", nargs="+")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("oracle", parents=[common],
                       help="brute-force Khovanov homology (planar codes)")
    p.add_argument("--j", default="all", metavar="<int|all>")
    p.add_argument("path")
    p.set_defaults(fn=_cmd_oracle)

    return top


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "fn", None):
        parser.print_help(sys.stderr)
        return 1
    try:
        return args.fn(args)
    except GuardRefusal as exc:
        print(f"khext: resource guard: {exc}", file=sys.stderr)
        return 3
    except CliInputError as exc:
        print(f"khext: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
