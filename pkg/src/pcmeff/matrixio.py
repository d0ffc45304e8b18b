"""Reading and writing matrix files.

Plain-text format: ``#`` starts a comment, blank lines are ignored, the
first content line is the order n, then n rows of n whitespace-separated
values.  Values are decimal literals or exact rationals written p/q (so a
matrix quoted with entries like 1/7 survives a round trip without
transcription rounding).  CSV: one row per line, comma-separated, order
inferred from the first row; the same value syntax applies.
"""

from __future__ import annotations

import numpy as np

from .errors import ParseError

FORMATS = ("txt", "csv")


def _parse_value(token: str, line_no: int, column: int) -> float:
    if "/" in token:
        num_s, _, den_s = token.partition("/")
        try:
            num, den = float(num_s), float(den_s)
        except ValueError:
            raise ParseError(f"bad rational literal {token!r}", line_no, column) from None
        if den == 0:
            raise ParseError(f"zero denominator in {token!r}", line_no, column)
        return num / den
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"bad numeric literal {token!r}", line_no, column) from None


def _content_lines(text: str):
    """Yield (line_no, stripped content) skipping blanks and comments."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        if content.strip():
            yield line_no, content


def _tokens_with_columns(content: str):
    column = 0
    for token in content.split():
        column = content.index(token, column)
        yield token, column + 1
        column += len(token)


def _parse_row(content: str, line_no: int, n: int) -> list[float]:
    values = [(_parse_value(tok, line_no, col), col)
              for tok, col in _tokens_with_columns(content)]
    if len(values) != n:
        col = values[n][1] if len(values) > n else len(content.rstrip()) + 1
        raise ParseError(f"expected {n} values, found {len(values)}", line_no, col)
    return [v for v, _ in values]


def parse_matrix(text: str) -> np.ndarray:
    """Parse the plain-text format into a float array (unvalidated)."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input", 1)
    line_no, head = lines[0]
    tokens = head.split()
    if len(tokens) != 1:
        raise ParseError("first content line must be the matrix order alone", line_no)
    try:
        n = int(tokens[0])
    except ValueError:
        raise ParseError(f"bad matrix order {tokens[0]!r}", line_no, 1) from None
    if n < 1:
        raise ParseError(f"matrix order must be positive, got {n}", line_no, 1)
    if len(lines) != n + 1:
        raise ParseError(f"expected {n} matrix rows, found {len(lines) - 1}", line_no)
    rows = [_parse_row(content, row_line, n) for row_line, content in lines[1:]]
    return np.array(rows, dtype=float)


def parse_matrix_csv(text: str) -> np.ndarray:
    """Parse the CSV format into a float array (unvalidated)."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input", 1)
    rows = []
    n = None
    for line_no, content in lines:
        cells = content.split(",")
        if n is None:
            n = len(cells)
        elif len(cells) != n:
            raise ParseError(f"expected {n} cells, found {len(cells)}", line_no)
        row = []
        column = 0
        for cell in cells:
            stripped = cell.strip()
            if not stripped:
                raise ParseError("empty cell", line_no, column + 1)
            row.append(_parse_value(stripped, line_no, content.index(stripped, column) + 1))
            column += len(cell) + 1
        rows.append(row)
    if len(rows) != n:
        raise ParseError(f"expected {n} rows for a square matrix, found {len(rows)}",
                         lines[-1][0])
    return np.array(rows, dtype=float)


def load_matrix(path: str, fmt: str = "txt") -> np.ndarray:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_matrix(text) if fmt == "txt" else parse_matrix_csv(text)


def format_matrix(a: np.ndarray) -> str:
    """Render in the plain-text format; floats keep full precision."""
    a = np.asarray(a)
    lines = [str(a.shape[0])]
    for row in a:
        lines.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"
