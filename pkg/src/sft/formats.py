"""Matrix files and JSON certificate documents.

Text matrices: a header line ``rows cols`` followed by rows of
space-separated integers. Polynomial matrices (``.pmat``) use the same layout
with entries in the ``c0+c1*t+c2*t^2`` grammar. Blank lines and lines starting
with ``#`` are ignored. A document starting with ``{`` is read as the JSON
mirror ``{"rows": n, "cols": m, "entries": [[...]]}``.
"""

from __future__ import annotations

import json
from typing import Any, Iterator, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

from sft.blockcode import Automorphism, BlockCode, Word
from sft.equivalence import Ring, SeWitness, SseChain
from sft.matrix import IntMatrix
from sft.poly import IntPoly
from sft.polymatrix import (
    ChangePowerMove,
    ElementaryMove,
    Move,
    MoveClass,
    MoveLog,
    PolyMatrix,
    StabilizeMove,
)
from utils.errors import DimensionError, MalformedInputError

Rows = list[list[int]]


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            yield number, raw


def _tokens(raw: str) -> Iterator[tuple[int, str]]:
    """(1-based column, token) pairs."""
    col = 0
    for token in raw.split():
        col = raw.index(token, col)
        yield col + 1, token
        col += len(token)


def _header(
    lines: list[tuple[int, str]], source: Optional[str]
) -> tuple[int, int, list[tuple[int, str]]]:
    if not lines:
        raise MalformedInputError("empty matrix document", source=source)
    number, raw = lines[0]
    toks = list(_tokens(raw))
    if len(toks) != 2:
        raise MalformedInputError("header must be 'rows cols'", number, 1, source)
    dims = []
    for col, tok in toks:
        if not tok.isdigit():
            raise MalformedInputError(f"bad dimension {tok!r}", number, col, source)
        dims.append(int(tok))
    rows, cols = dims
    body = lines[1:]
    if len(body) != rows:
        where = body[rows][0] if len(body) > rows else None
        raise MalformedInputError(
            f"expected {rows} rows, found {len(body)}", where, None, source
        )
    return rows, cols, body


def _row_tokens(
    number: int, raw: str, cols: int, source: Optional[str]
) -> list[tuple[int, str]]:
    toks = list(_tokens(raw))
    if len(toks) != cols:
        col = toks[cols][0] if len(toks) > cols else len(raw.rstrip()) + 1
        raise MalformedInputError(
            f"expected {cols} entries, found {len(toks)}", number, col, source
        )
    return toks


def parse_matrix(text: str, source: Optional[str] = None) -> IntMatrix:
    if text.lstrip().startswith("{"):
        return matrix_from_json(_load_json(text, source), source)
    rows, cols, body = _header(list(_content_lines(text)), source)
    out: Rows = []
    for number, raw in body:
        row = []
        for col, tok in _row_tokens(number, raw, cols, source):
            try:
                row.append(int(tok))
            except ValueError:
                raise MalformedInputError(
                    f"not an integer: {tok!r}", number, col, source
                ) from None
        out.append(row)
    return IntMatrix.from_rows(out, cols=cols)


def parse_polymatrix(text: str, source: Optional[str] = None) -> PolyMatrix:
    if text.lstrip().startswith("{"):
        doc = _load_json(text, source)
        entries = doc.get("entries") if isinstance(doc, dict) else None
        if not isinstance(entries, list):
            raise MalformedInputError("JSON polynomial matrix needs 'entries'", source=source)
        json_rows: list[list[IntPoly]] = []
        for r, row in enumerate(entries):
            if not isinstance(row, list) or len(row) != len(entries):
                raise MalformedInputError(
                    f"entries[{r}]: polynomial matrices must be square", source=source
                )
            polys = []
            for c, x in enumerate(row):
                try:
                    polys.append(IntPoly.parse(str(x)))
                except MalformedInputError as exc:
                    message = str(exc).split(": ", 1)[-1]
                    raise MalformedInputError(
                        f"entries[{r}][{c}]: {message}", source=source
                    ) from None
            json_rows.append(polys)
        return PolyMatrix.from_rows(json_rows)
    rows, cols, body = _header(list(_content_lines(text)), source)
    if rows != cols:
        line = body[0][0] if body else None
        raise MalformedInputError("polynomial matrices must be square", line, 1, source)
    out: list[list[IntPoly]] = []
    for number, raw in body:
        row = []
        for col, tok in _row_tokens(number, raw, cols, source):
            try:
                row.append(IntPoly.parse(tok, number, col))
            except MalformedInputError as exc:
                raise MalformedInputError(
                    str(exc).split(": ", 1)[-1], exc.line, exc.column, source
                ) from None
        out.append(row)
    return PolyMatrix.from_rows(out)


def format_matrix(m: IntMatrix) -> str:
    lines = [f"{m.rows} {m.cols}"]
    lines.extend(" ".join(str(x) for x in row) for row in m)
    return "\n".join(lines) + "\n"


def format_polymatrix(p: PolyMatrix) -> str:
    lines = [f"{p.size} {p.size}"]
    lines.extend(" ".join(x.to_text() for x in row) for row in p.to_rows())
    return "\n".join(lines) + "\n"


def matrix_to_json(m: IntMatrix) -> dict[str, Any]:
    return {"rows": m.rows, "cols": m.cols, "entries": m.to_rows()}


def _load_json(text: str, source: Optional[str]) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(exc.msg, exc.lineno, exc.colno, source) from None


class MatrixDocument(BaseModel):
    rows: int = Field(ge=0)
    cols: int = Field(ge=0)
    entries: Rows


def matrix_from_json(doc: Any, source: Optional[str] = None) -> IntMatrix:
    try:
        parsed = MatrixDocument.model_validate(doc)
    except ValidationError as exc:
        raise MalformedInputError(_first_error(exc), source=source) from None
    for r, row in enumerate(parsed.entries):
        if len(row) != parsed.cols:
            raise MalformedInputError(
                f"entries[{r}] has {len(row)} entries, expected {parsed.cols}",
                source=source,
            )
    m = IntMatrix.from_rows(parsed.entries, cols=parsed.cols)
    if m.shape != (parsed.rows, parsed.cols):
        raise MalformedInputError(
            f"declared {parsed.rows}x{parsed.cols} but entries are {m.rows}x{m.cols}",
            source=source,
        )
    return m


def _first_error(exc: ValidationError) -> str:
    err = exc.errors()[0]
    where = ".".join(str(p) for p in err.get("loc", ()))
    return f"{where}: {err.get('msg')}" if where else str(err.get("msg"))


# certificates -----------------------------------------------------------------


MatrixField = Union[Rows, MatrixDocument]


def _to_matrix(value: MatrixField) -> IntMatrix:
    if isinstance(value, MatrixDocument):
        return IntMatrix.from_rows(value.entries, cols=value.cols)
    return IntMatrix.from_rows(value)


class EdgeDocument(BaseModel):
    R: MatrixField
    S: MatrixField
    s: int = 1

    @field_validator("s")
    @classmethod
    def _orientation(cls, v: int) -> int:
        if v not in (1, -1):
            raise ValueError("orientation must be 1 or -1")
        return v


class ChainDocument(BaseModel):
    ring: Ring = Ring.ZPLUS
    start: Optional[MatrixField] = None
    edges: list[EdgeDocument] = Field(default_factory=list)


def parse_chain(text: str, source: Optional[str] = None, ring: Optional[Ring] = None) -> SseChain:
    """A chain document, or a bare JSON list of edges."""
    doc = _load_json(text, source)
    if isinstance(doc, list):
        doc = {"edges": doc}
    try:
        parsed = ChainDocument.model_validate(doc)
    except ValidationError as exc:
        raise MalformedInputError(_first_error(exc), source=source) from None
    try:
        pairs = [(_to_matrix(e.R), _to_matrix(e.S), e.s) for e in parsed.edges]
        start = _to_matrix(parsed.start) if parsed.start is not None else None
        return SseChain.of(pairs, ring or parsed.ring, start)
    except DimensionError as exc:
        raise MalformedInputError(str(exc), source=source) from None


def chain_to_json(chain: SseChain) -> dict[str, Any]:
    return {
        "ring": chain.ring.value,
        "start": chain.start.to_rows() if chain.start is not None else None,
        "edges": [
            {"R": e.witness.r.to_rows(), "S": e.witness.s.to_rows(), "s": e.orientation}
            for e in chain.edges
        ],
    }


class SeDocument(BaseModel):
    R: MatrixField
    S: MatrixField
    lag: int = Field(ge=1)
    ring: Ring = Ring.Z
    denominator: int = Field(default=1, ge=1)


def parse_se_witness(text: str, source: Optional[str] = None) -> SeWitness:
    try:
        parsed = SeDocument.model_validate(_load_json(text, source))
        return SeWitness(
            _to_matrix(parsed.R), _to_matrix(parsed.S), parsed.lag, parsed.ring,
            parsed.denominator,
        )
    except ValidationError as exc:
        raise MalformedInputError(_first_error(exc), source=source) from None
    except DimensionError as exc:
        raise MalformedInputError(str(exc), source=source) from None


def se_witness_to_json(w: SeWitness) -> dict[str, Any]:
    return {
        "R": w.r.to_rows(),
        "S": w.s.to_rows(),
        "lag": w.lag,
        "ring": w.ring.value,
        "denominator": w.denominator,
    }


class MoveDocument(BaseModel):
    kind: str
    i: Optional[int] = None
    j: Optional[int] = None
    poly: Optional[str] = None
    side: Optional[str] = None
    k: Optional[int] = None
    k_new: Optional[int] = None


class MoveLogDocument(BaseModel):
    class_: MoveClass = Field(alias="class")
    start: list[list[str]]
    moves: list[MoveDocument]
    end: list[list[str]]


def _move(doc: MoveDocument, index: int) -> Move:
    if doc.kind == "stabilize":
        return StabilizeMove()
    if doc.kind == "elementary" and None not in (doc.i, doc.j, doc.poly, doc.side):
        assert doc.i is not None and doc.j is not None and doc.poly is not None
        return ElementaryMove(doc.i, doc.j, IntPoly.parse(doc.poly), str(doc.side))
    if doc.kind == "change_power" and None not in (doc.i, doc.j, doc.k, doc.k_new):
        assert doc.i is not None and doc.j is not None
        assert doc.k is not None and doc.k_new is not None
        return ChangePowerMove(doc.i, doc.j, doc.k, doc.k_new)
    raise MalformedInputError(f"move {index}: incomplete or unknown move {doc.kind!r}")


def parse_move_log(text: str, source: Optional[str] = None) -> MoveLog:
    try:
        parsed = MoveLogDocument.model_validate(_load_json(text, source))
    except ValidationError as exc:
        raise MalformedInputError(_first_error(exc), source=source) from None

    def poly_matrix(rows: list[list[str]]) -> PolyMatrix:
        return PolyMatrix.from_rows([[IntPoly.parse(x) for x in row] for row in rows])

    return MoveLog(
        poly_matrix(parsed.start),
        tuple(_move(m, i) for i, m in enumerate(parsed.moves)),
        poly_matrix(parsed.end),
        parsed.class_,
    )


# block codes ------------------------------------------------------------------


class BlockCodeDocument(BaseModel):
    window: tuple[int, int]
    table: dict[str, int]


class AutomorphismDocument(BaseModel):
    matrix: MatrixField
    forward: BlockCodeDocument
    inverse: BlockCodeDocument


def _word(key: str, source: Optional[str]) -> Word:
    try:
        return tuple(int(x) for x in key.split(","))
    except ValueError:
        raise MalformedInputError(f"bad block key {key!r}", source=source) from None


def _code(doc: BlockCodeDocument, a: IntMatrix, source: Optional[str]) -> BlockCode:
    table = {_word(k, source): y for k, y in doc.table.items()}
    return BlockCode(a, a, doc.window, table)


def parse_automorphism(text: str, source: Optional[str] = None) -> Automorphism:
    """``{"matrix", "forward", "inverse"}``; table keys are comma-joined edge words."""
    try:
        parsed = AutomorphismDocument.model_validate(_load_json(text, source))
    except ValidationError as exc:
        raise MalformedInputError(_first_error(exc), source=source) from None
    a = _to_matrix(parsed.matrix)
    return Automorphism(_code(parsed.forward, a, source), _code(parsed.inverse, a, source))


def automorphism_to_json(auto: Automorphism) -> dict[str, Any]:
    return {
        "matrix": auto.matrix.to_rows(),
        "forward": auto.forward.to_dict(),
        "inverse": auto.inverse.to_dict(),
    }


__all__ = [
    "parse_matrix",
    "parse_polymatrix",
    "format_matrix",
    "format_polymatrix",
    "matrix_to_json",
    "matrix_from_json",
    "MatrixDocument",
    "EdgeDocument",
    "ChainDocument",
    "parse_chain",
    "chain_to_json",
    "SeDocument",
    "parse_se_witness",
    "se_witness_to_json",
    "parse_move_log",
    "BlockCodeDocument",
    "AutomorphismDocument",
    "parse_automorphism",
    "automorphism_to_json",
]
