"""
Plain-text matrix and sweep files.

Matrix format: `#` starts a comment; the first remaining line is `dim N`,
followed by N rows of N complex tokens such as `1`, `-2i`, `i`, `0.5+0.3i`
or `1e-3-2.5e-4i`. Entries are written with the shortest round-trip repr of
each float, so write-then-read is bit-identical.
"""

import math
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from kreinspec.core.exceptions import MatrixFileError
from kreinspec.numerics.fourlevel import SweepResult
from kreinspec.numerics.numkernel import ComplexMatrix, as_matrix

PathLike = Union[str, Path]


def parse_complex(token: str) -> complex:
    """Parse `re`, `imi`, `re+imi` or `re-imi` into a finite complex."""
    if not token or any(c in token for c in "jJ()_ \t"):
        raise ValueError(f"invalid complex entry {token!r}")
    text = token
    if text.endswith("i"):
        body = text[:-1]
        if body in ("", "+", "-") or (body[-1] in "+-" and body[-2] not in "eE"):
            body += "1"
        text = body + "j"
    try:
        z = complex(text)
    except ValueError:
        raise ValueError(f"invalid complex entry {token!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex entry {token!r}")
    return z


def format_complex(z: complex) -> str:
    """Inverse of parse_complex; signed zeros are preserved."""
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_matrix_text(text: str, path: Optional[str] = None) -> ComplexMatrix:
    """Parse the contents of a matrix file."""
    rows: List[List[complex]] = []
    dim: Optional[int] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        tokens = line.split()
        if dim is None:
            size = tokens[1] if len(tokens) == 2 and tokens[0] == "dim" else ""
            # str.isdigit also accepts superscripts that int() rejects
            if not (size.isascii() and size.isdigit()) or int(size) < 1:
                raise MatrixFileError("Expected header 'dim N' with N >= 1", path=path, line=lineno)
            dim = int(size)
            continue
        if len(rows) == dim:
            raise MatrixFileError(f"More than {dim} rows", path=path, line=lineno)
        if len(tokens) != dim:
            raise MatrixFileError(
                f"Expected {dim} entries, found {len(tokens)}", path=path, line=lineno
            )
        try:
            rows.append([parse_complex(tok) for tok in tokens])
        except ValueError as exc:
            raise MatrixFileError(str(exc), path=path, line=lineno) from exc

    if dim is None:
        raise MatrixFileError("Missing 'dim N' header", path=path)
    if len(rows) != dim:
        raise MatrixFileError(f"Expected {dim} rows, found {len(rows)}", path=path)
    return np.array(rows, dtype=np.complex128)


def read_matrix(path: PathLike) -> ComplexMatrix:
    """Read a matrix file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixFileError(f"Cannot read matrix file: {exc.strerror}", path=str(path)) from exc
    except UnicodeDecodeError as exc:
        raise MatrixFileError(f"Matrix file is not valid UTF-8: {exc.reason}", path=str(path)) from exc
    return parse_matrix_text(text, path=str(path))


def format_matrix_text(m: ComplexMatrix, comment: Optional[str] = None) -> str:
    m = as_matrix(m)
    lines = []
    if comment:
        lines.extend(f"# {line}" for line in comment.splitlines())
    lines.append(f"dim {m.shape[0]}")
    for row in m:
        lines.append(" ".join(format_complex(z) for z in row))
    return "\n".join(lines) + "\n"


def write_matrix(path: PathLike, m: ComplexMatrix, comment: Optional[str] = None) -> None:
    Path(path).write_text(format_matrix_text(m, comment), encoding="utf-8")


def format_sweep_text(result: SweepResult) -> str:
    """`#` header, rows `t D phase`, then `EP t t_lo t_hi` lines."""
    p = result.p0
    lines = [
        "# kreinspec sweep",
        f"# axis={result.axis.value} a0={p.a0!r} A={format_complex(p.A)} B={format_complex(p.B)}",
        "# columns: t D phase",
    ]
    for point in result.points:
        lines.append(f"{point.t!r} {point.discriminant!r} {point.phase.value}")
    for hit in result.exceptional_points:
        lines.append(f"EP {hit.t!r} {hit.t_lo!r} {hit.t_hi!r}")
    return "\n".join(lines) + "\n"


def write_sweep(path: PathLike, result: SweepResult) -> None:
    Path(path).write_text(format_sweep_text(result), encoding="utf-8")
