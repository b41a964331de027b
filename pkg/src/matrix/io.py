"""
Text formats for matrices and coverings.

Matrix file: first line ``"m n"``, then m lines of exactly n characters from
``{0,1}``; one trailing newline is optional. Covering lines: 1-based column
indices in increasing order separated by single spaces.
"""

from pathlib import Path
from typing import Iterable, List, Union

from ..utils.errors import MatrixFormatError
from ..utils.logger import get_logger
from .bitmatrix import BoolMatrix, Covering

logger = get_logger(__name__)


def parse_matrix(text: str) -> BoolMatrix:
    """
    Parse the matrix text format.

    Raises:
        MatrixFormatError: with the offending line number
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MatrixFormatError("empty input, expected header 'm n'", 1)

    header = lines[0].split(" ")
    if len(header) != 2 or not all(part.isdigit() for part in header):
        raise MatrixFormatError(f"header must be two decimal integers 'm n', got {lines[0]!r}", 1)
    m, n = int(header[0]), int(header[1])
    if m < 1 or n < 1:
        raise MatrixFormatError(f"dimensions must be positive, got m={m} n={n}", 1)

    body = lines[1:]
    if len(body) != m:
        line_number = m + 2 if len(body) > m else len(lines) + 1
        raise MatrixFormatError(f"expected {m} matrix rows, found {len(body)}", line_number)

    rows = []
    for offset, line in enumerate(body):
        line_number = offset + 2
        if len(line) != n:
            raise MatrixFormatError(f"expected {n} characters, found {len(line)}", line_number)
        mask = 0
        for k, ch in enumerate(line):
            if ch == "1":
                mask |= 1 << k
            elif ch != "0":
                raise MatrixFormatError(f"invalid character {ch!r} in column {k + 1}", line_number)
        rows.append(mask)

    return BoolMatrix(rows, n)


def format_matrix(L: BoolMatrix) -> str:
    """Render ``L`` in the matrix text format, with a trailing newline."""
    return "\n".join([f"{L.m} {L.n}", *L.to_strings()]) + "\n"


def read_matrix(path: Union[str, Path]) -> BoolMatrix:
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as f:
        text = f.read()
    matrix = parse_matrix(text)
    logger.info(f"Loaded {matrix.m}x{matrix.n} matrix from {path}")
    return matrix


def write_matrix(L: BoolMatrix, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(exist_ok=True, parents=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(format_matrix(L))
    logger.info(f"Wrote {L.m}x{L.n} matrix to {path}")
    return path


def format_covering(covering: Covering) -> str:
    return " ".join(str(j) for j in covering)


def format_coverings(coverings: Iterable[Covering]) -> str:
    """One covering per line; empty string when there are none."""
    return "".join(format_covering(c) + "\n" for c in coverings)


def parse_coverings(text: str) -> List[Covering]:
    """Inverse of :func:`format_coverings`."""
    coverings = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line:
            continue
        try:
            covering = tuple(int(part) for part in line.split(" "))
        except ValueError:
            raise MatrixFormatError(f"invalid covering line {line!r}", line_number)
        if any(b <= a for a, b in zip(covering, covering[1:])):
            raise MatrixFormatError(f"covering {line!r} is not strictly increasing", line_number)
        coverings.append(covering)
    return coverings
