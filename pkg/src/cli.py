"""The ``sftalgebra`` command line.

Each subcommand maps its flags onto one tool's parameters and prints the
tool's summary lines (or the whole JSON document with ``--json``). Exit
status: 0 pass/info, 1 fail, 2 usage or malformed input, 3 budget or
timeout exceeded.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Any, Callable, Optional, Sequence

from tools.registry import ToolRegistry, exit_code_of, parse_document
from utils.data_path import read_input
from utils.errors import MalformedInputError, SftError
from utils.logging import configure_logging, get_logger
from utils.shared_config import get_compute_config

logger = get_logger(__name__)

USAGE_EXIT = 2

Arguments = dict[str, Any]
Builder = Callable[[argparse.Namespace], Arguments]


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def _change(text: str) -> tuple[int, int, int, int]:
    values = _ints(text)
    if len(values) != 4:
        raise argparse.ArgumentTypeError("a power change is i,j,k,k_new")
    return (values[0], values[1], values[2], values[3])


def _complex(text: str) -> tuple[float, float]:
    try:
        re, _, im = text.partition(",")
        return (float(re), float(im or 0))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re,im, got {text!r}") from None


def _drop_none(values: Arguments) -> Arguments:
    return {k: v for k, v in values.items() if v is not None and v != []}


# argument builders -------------------------------------------------------


def _invariants(ns: argparse.Namespace) -> tuple[str, Arguments]:
    if ns.action == "classify2x2":
        return "classify2x2", _classify2x2(ns)
    if ns.matrix is None:
        raise MalformedInputError("invariants report needs a matrix file")
    return "invariants_report", _drop_none(
        {"matrix_path": ns.matrix, "count": ns.count, "zeta_check": ns.zeta_check}
    )


def _classify2x2(ns: argparse.Namespace) -> Arguments:
    return _drop_none(
        {
            "a": ns.a,
            "b": ns.b,
            "x": ns.x,
            "y": ns.y,
            "counts": ns.counts or None,
            "classes": ns.classes or None,
            "transpose": ns.transpose or None,
            "oracle_bound": ns.oracle_bound,
            "matrix_path": getattr(ns, "matrix", None),
        }
    )


def _structure(ns: argparse.Namespace) -> Arguments:
    return _drop_none(
        {"action": ns.action, "matrix_path": ns.matrix, "k": ns.k, "count": ns.count}
    )


def _equiv(ns: argparse.Namespace) -> Arguments:
    chain = ns.chain or (ns.file if ns.action in ("verify-chain", "compress") else None)
    return _drop_none(
        {
            "action": ns.action,
            "a_path": ns.a,
            "b_path": ns.b,
            "r_path": ns.r,
            "s_path": ns.s,
            "chain_path": chain,
            "witness_path": ns.witness,
            "ring": ns.ring,
            "rational": ns.rational or None,
        }
    )


def _neighbors(ns: argparse.Namespace) -> Arguments:
    return _drop_none(
        {
            "matrix_path": ns.matrix,
            "max_inner": ns.max_inner,
            "max_entry": ns.max_entry,
            "budget": ns.budget,
            "with_sgc2": ns.with_sgc2 or None,
        }
    )


def _poly(ns: argparse.Namespace) -> Arguments:
    log = ns.log or (ns.file if ns.action == "move" else None)
    chain = ns.chain or (ns.file if ns.action == "elementary" else None)
    matrix = ns.file if ns.action in ("nzc", "sharp", "flow") else None
    return _drop_none(
        {
            "action": ns.action,
            "matrix_path": matrix,
            "log_path": log,
            "r_path": ns.r,
            "s_path": ns.s,
            "changes": ns.change,
            "chain_path": chain,
            "with_moves": ns.with_moves or None,
        }
    )


def _niep(ns: argparse.Namespace) -> Arguments:
    ring = {"z": "Z", "dense": "dense"}[ns.ring]
    return _drop_none(
        {
            "action": ns.action,
            "poly": ns.poly,
            "det_poly": ns.det_poly,
            "values": ns.values or None,
            "coeffs": ns.coeffs,
            "complex_values": ns.complex,
            "ring": ring,
            "horizon": ns.horizon,
            "max_k": ns.max_k,
            "max_m": ns.max_m,
            "p": ns.p,
            "kmax": ns.kmax,
            "tolerance": ns.tolerance,
            "matrix_path": ns.matrix,
        }
    )


def _gyration(ns: argparse.Namespace) -> Arguments:
    return _drop_none(
        {
            "automorphism": ns.automorphism,
            "matrix_path": ns.matrix,
            "n": ns.n,
            "perm": ns.perm,
            "code_path": ns.code,
            "orbit": ns.orbit,
            "orbit_level": ns.orbit_level,
            "rotate": ns.rotate,
            "levels": ns.level,
            "m": ns.m,
            "budget": ns.budget,
        }
    )


async def _sgc2(ns: argparse.Namespace) -> Arguments:
    if ns.path is not None:
        return {"action": "path", "path_file": ns.path}
    if ns.cocycle is not None:
        return _drop_none(
            {"action": "cocycle", "count": ns.cocycle, "seed": ns.seed or 0}
        )
    if ns.triangle is not None:
        try:
            doc = json.loads(await read_input(ns.triangle))
        except json.JSONDecodeError as exc:
            raise MalformedInputError(
                exc.msg, exc.lineno, exc.colno, ns.triangle
            ) from None
        if not isinstance(doc, dict):
            raise MalformedInputError("a triangle document is a JSON object")
        return {"action": "triangle", **{k.lower(): v for k, v in doc.items()}}
    return _drop_none({"action": "edge", "r_path": ns.r, "s_path": ns.s})


# parser ------------------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument(
        "--json",
        action="store_true",
        default=argparse.SUPPRESS if suppress else False,
        help="Print the full JSON document",
    )
    parser.add_argument("--seed", type=int, default=default, help="Random seed")
    parser.add_argument(
        "--horizon", type=int, default=default, help="Trace horizon N for spectra"
    )
    parser.add_argument(
        "--order", type=int, default=default, help="Series order for zeta checks"
    )
    parser.add_argument(
        "--budget", type=int, default=default, help="Enumeration budget"
    )
    parser.add_argument(
        "--timeout", type=float, default=default, help="Seconds before giving up"
    )


def _classify_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", type=int, required=True, help="Larger eigenvalue")
    parser.add_argument("--b", type=int, required=True, help="Smaller eigenvalue")
    parser.add_argument("--x", type=int, help="Off-diagonal entry of M_x")
    parser.add_argument("--y", type=int, help="Compare M_x with M_y")
    parser.add_argument("--counts", action="store_true", help="Class counts")
    parser.add_argument("--classes", action="store_true", help="List the classes")
    parser.add_argument(
        "--transpose", action="store_true", help="Is M_x SE-Z to its transpose?"
    )
    parser.add_argument(
        "--oracle-bound", type=int, help="Confirm by unimodular search"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sftalgebra",
        description="Stable-algebra invariants of shifts of finite type",
    )
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", parents=[common], help="Invariant report")
    p.add_argument("action", choices=["report", "classify2x2"])
    p.add_argument("matrix", nargs="?", help="Matrix file")
    p.add_argument("--count", type=int, help="Number of traces to list")
    p.add_argument("--zeta-check", action="store_true", help="Check the zeta identity")
    p.add_argument("--a", type=int, help="Larger eigenvalue (classify2x2)")
    p.add_argument("--b", type=int, help="Smaller eigenvalue (classify2x2)")
    p.add_argument("--x", type=int)
    p.add_argument("--y", type=int)
    p.add_argument("--counts", action="store_true")
    p.add_argument("--classes", action="store_true")
    p.add_argument("--transpose", action="store_true")
    p.add_argument("--oracle-bound", type=int)

    p = sub.add_parser("classify2x2", parents=[common], help="2x2 triangular family")
    _classify_flags(p)
    p.add_argument("--matrix", help="A 2x2 matrix file to place in the family")

    p = sub.add_parser("structure", parents=[common], help="Support-graph structure")
    p.add_argument(
        "action",
        choices=[
            "core", "primitive", "period", "blockform", "higher", "components",
            "periodic",
        ],
    )
    p.add_argument("matrix", help="Matrix file")
    p.add_argument("--k", type=int, help="Block length for 'higher'")
    p.add_argument("--count", type=int, help="Periods for 'periodic'")

    p = sub.add_parser("equiv", parents=[common], help="Check SSE/SE certificates")
    p.add_argument(
        "action",
        choices=["verify-esse", "verify-chain", "compress", "verify-se", "maller-shub"],
    )
    p.add_argument("file", nargs="?", help="Chain file for verify-chain/compress")
    for flag in ("a", "b", "r", "s"):
        p.add_argument(f"--{flag}", help=f"File holding {flag.upper()}")
    p.add_argument("--chain", help="Chain JSON file")
    p.add_argument("--witness", help="Shift equivalence JSON file")
    p.add_argument("--ring", choices=["Zplus", "Z"])
    p.add_argument("--rational", action="store_true", help="Accept witnesses over Q")

    p = sub.add_parser("neighbors", parents=[common], help="ESSE-Z+ neighbours")
    p.add_argument("matrix", help="Matrix file")
    p.add_argument("--max-inner", type=int)
    p.add_argument("--max-entry", type=int)
    p.add_argument("--with-sgc2", action="store_true")

    p = sub.add_parser("poly", parents=[common], help="Polynomial matrices")
    p.add_argument(
        "action", choices=["nzc", "sharp", "move", "psse", "flow", "elementary"]
    )
    p.add_argument("file", nargs="?", help=".pmat, move log or chain file")
    p.add_argument("--log", help="Move log JSON file")
    p.add_argument("--r", help="File holding R")
    p.add_argument("--s", help="File holding S")
    p.add_argument("--change", type=_change, action="append", default=[])
    p.add_argument("--chain", help="SSE chain file")
    p.add_argument("--with-moves", action="store_true")

    p = sub.add_parser("niep", parents=[common], help="Spectral conditions")
    p.add_argument(
        "action",
        choices=[
            "check", "perron", "jll", "jll-bound", "suleimanova", "inflate",
            "root-poly", "positive", "laffey", "realization",
        ],
    )
    p.add_argument("values", nargs="*", help="Spectrum values")
    p.add_argument("--poly", help="Monic p(t) with the spectrum as roots")
    p.add_argument("--det-poly", help="det(I - tA) form")
    p.add_argument("--coeffs", nargs="+", help="Rational coefficients of p(t)")
    p.add_argument("--complex", type=_complex, action="append", help="re,im")
    p.add_argument("--ring", choices=["z", "dense"], default="z")
    p.add_argument("--max-k", type=int)
    p.add_argument("--max-m", type=int)
    p.add_argument("--p", type=int, help="Period for inflate/root-poly")
    p.add_argument("--kmax", type=int)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--matrix", help="Matrix file")

    p = sub.add_parser("gyration", parents=[common], help="Gyration and SGCC")
    p.add_argument(
        "--automorphism",
        choices=["shift", "symbols", "edges", "code", "one-orbit"],
    )
    p.add_argument("--matrix", help="Graph matrix file")
    p.add_argument("--n", type=int, help="Full n-shift")
    p.add_argument("--perm", type=_ints, help="Permutation, e.g. 1,2,0")
    p.add_argument("--code", help="Block-code JSON file")
    p.add_argument("--orbit", type=_ints, help="Point whose orbit is rotated")
    p.add_argument("--orbit-level", type=int)
    p.add_argument("--rotate", type=int)
    p.add_argument("--level", type=int, action="append", default=[])
    p.add_argument("--m", type=int, help="Report SGCC_m")

    p = sub.add_parser("sgc2", parents=[common], help="sgc2 of edges and paths")
    p.add_argument("--r", help="File holding R")
    p.add_argument("--s", help="File holding S")
    p.add_argument("--path", help="Path JSON file")
    p.add_argument("--triangle", help='Triangle JSON {"R1", "R2", "S3"}')
    p.add_argument("--cocycle", type=int, help="Check this many random triangles")
    return parser


_BUILDERS: dict[str, Builder] = {
    "classify2x2": _classify2x2,
    "structure": _structure,
    "equiv": _equiv,
    "neighbors": _neighbors,
    "poly": _poly,
    "niep": _niep,
    "gyration": _gyration,
}


async def _tool_call(ns: argparse.Namespace) -> tuple[str, Arguments]:
    if ns.command == "invariants":
        return _invariants(ns)
    if ns.command == "sgc2":
        return "sgc2", await _sgc2(ns)
    return ns.command, _BUILDERS[ns.command](ns)


def _error_document(tool: str, error: SftError) -> dict[str, Any]:
    return {"tool": tool, "verdict": "error", "error": error.to_dict()}


def _print(document: dict[str, Any], as_json: bool) -> None:
    if as_json:
        print(json.dumps(document, indent=2))
        return
    if document.get("verdict") == "error":
        error = document.get("error") or {}
        print(f"error: {error.get('message')}", file=sys.stderr)
        return
    for line in document.get("summary", []):
        print(line)


async def run_command(ns: argparse.Namespace) -> tuple[dict[str, Any], int]:
    overrides = {
        "horizon": ns.horizon,
        "series_order": ns.order,
        "max_factorizations": ns.budget,
        "max_periodic_points": ns.budget,
        "default_timeout": ns.timeout,
    }
    config = get_compute_config().with_overrides(**overrides)
    registry = ToolRegistry.from_config(config)
    try:
        name, arguments = await _tool_call(ns)
    except SftError as e:
        doc = _error_document(ns.command, e)
        return doc, exit_code_of(doc)
    doc = parse_document(await registry.call(name, arguments))
    return doc, exit_code_of(doc)


def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logging()
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else USAGE_EXIT
    try:
        document, code = asyncio.run(run_command(ns))
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_EXIT
    _print(document, ns.json)
    logger.debug("Command finished", extra={"command": ns.command, "exit_code": code})
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
