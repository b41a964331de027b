"""
Matrix module: bit-packed Boolean matrices, their text format and random generation.
"""

from .bitmatrix import (
    BoolMatrix,
    ColSet,
    Covering,
    IndexSet,
    RowSet,
    as_covering,
    covers_row,
    submatrix_rows,
    uncovered_rows
)
from .generator import GenSpec, generate_matrix
from .io import format_coverings, format_matrix, parse_matrix, read_matrix, write_matrix

__all__ = [
    'BoolMatrix',
    'ColSet',
    'Covering',
    'IndexSet',
    'RowSet',
    'as_covering',
    'covers_row',
    'submatrix_rows',
    'uncovered_rows',
    'GenSpec',
    'generate_matrix',
    'format_coverings',
    'format_matrix',
    'parse_matrix',
    'read_matrix',
    'write_matrix'
]
