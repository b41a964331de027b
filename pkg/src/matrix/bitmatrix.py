"""
Bit-packed Boolean matrix with row and column views.

Rows and columns are both stored as Python integers used as bitsets: bit ``k``
of a row mask is the entry in column ``k + 1`` and bit ``k`` of a column mask is
the entry in row ``k + 1``. Every public index is 1-based; conversion happens
at this boundary only.
"""

from typing import Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np

# A covering is a strictly increasing tuple of 1-based column indices.
Covering = Tuple[int, ...]


def popcount(mask: int) -> int:
    """Number of set bits."""
    return mask.bit_count()


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the 0-based positions of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _check_index(index, universe: int, label: str) -> int:
    if isinstance(index, bool) or not isinstance(index, (int, np.integer)):
        raise ValueError(f"{label} index must be an integer, got {index!r}")
    index = int(index)
    if index < 1 or index > universe:
        raise ValueError(f"{label} index {index} out of range 1..{universe}")
    return index


def mask_from_indices(indices: Iterable[int], universe: int, label: str = "index") -> int:
    """
    Build a bitset from 1-based indices.

    Raises:
        ValueError: on an out-of-range or duplicated index
    """
    mask = 0
    for index in indices:
        index = _check_index(index, universe, label)
        bit = 1 << (index - 1)
        if mask & bit:
            raise ValueError(f"duplicate {label} index {index}")
        mask |= bit
    return mask


class IndexSet:
    """Immutable subset of ``{1..universe}`` backed by a bitset."""

    __slots__ = ("_mask", "_universe")

    def __init__(self, mask: int, universe: int):
        if universe < 0:
            raise ValueError(f"universe must be non-negative, got {universe}")
        if mask < 0 or mask >> universe:
            raise ValueError(f"mask has bits outside 1..{universe}")
        self._mask = mask
        self._universe = universe

    @classmethod
    def from_indices(cls, indices: Iterable[int], universe: int, label: str = "index") -> "IndexSet":
        return cls(mask_from_indices(indices, universe, label), universe)

    @classmethod
    def full(cls, universe: int) -> "IndexSet":
        return cls((1 << universe) - 1, universe)

    @property
    def mask(self) -> int:
        return self._mask

    @property
    def universe(self) -> int:
        return self._universe

    def __contains__(self, index) -> bool:
        if isinstance(index, bool) or not isinstance(index, (int, np.integer)):
            return False
        return 1 <= index <= self._universe and bool(self._mask >> (int(index) - 1) & 1)

    def __iter__(self) -> Iterator[int]:
        for bit in iter_bits(self._mask):
            yield bit + 1

    def __len__(self) -> int:
        return popcount(self._mask)

    def __bool__(self) -> bool:
        return self._mask != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, IndexSet):
            return self._mask == other._mask and self._universe == other._universe
        if isinstance(other, (set, frozenset)):
            return set(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._mask, self._universe))

    def to_tuple(self) -> Tuple[int, ...]:
        return tuple(self)

    def __repr__(self) -> str:
        return f"IndexSet({set(self) or '{}'}, universe={self._universe})"


# Row and column subsets share one implementation.
RowSet = IndexSet
ColSet = IndexSet


class BoolMatrix:
    """
    Immutable m×n Boolean matrix.

    Safe to share between workers: nothing mutates after construction, and
    pickling ships only the row masks.
    """

    __slots__ = ("_m", "_n", "_rows", "_cols")

    def __init__(self, rows: Sequence[int], n: int):
        """
        Args:
            rows: One bitset per row; bit k is the entry in column k + 1
            n: Column count
        """
        m = len(rows)
        if m < 1:
            raise ValueError("matrix must have at least one row")
        if n < 1:
            raise ValueError("matrix must have at least one column")
        limit = 1 << n
        packed = []
        for i, row in enumerate(rows, start=1):
            row = int(row)
            if row < 0 or row >= limit:
                raise ValueError(f"row {i} has bits outside columns 1..{n}")
            packed.append(row)

        columns = [0] * n
        for i, row in enumerate(packed):
            row_bit = 1 << i
            for k in iter_bits(row):
                columns[k] |= row_bit

        self._m = m
        self._n = n
        self._rows = tuple(packed)
        self._cols = tuple(columns)

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> "BoolMatrix":
        """Build from nested 0/1 lists, e.g. ``[[1, 1, 0], [0, 1, 1]]``."""
        if not rows:
            raise ValueError("matrix must have at least one row")
        n = len(rows[0])
        masks = []
        for i, row in enumerate(rows, start=1):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
            mask = 0
            for k, value in enumerate(row):
                if value not in (0, 1):
                    raise ValueError(f"entry ({i}, {k + 1}) is {value!r}, expected 0 or 1")
                if value:
                    mask |= 1 << k
            masks.append(mask)
        return cls(masks, n)

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BoolMatrix":
        """Build from row strings such as ``["1100", "0110"]``."""
        return cls.from_lists([[int(ch) for ch in row] for row in rows])

    @classmethod
    def from_numpy(cls, array: np.ndarray) -> "BoolMatrix":
        """Build from a 2-D array; nonzero entries become 1."""
        array = np.asarray(array)
        if array.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {array.shape}")
        m, n = array.shape
        masks = []
        for row in array != 0:
            mask = 0
            for k in np.flatnonzero(row):
                mask |= 1 << int(k)
            masks.append(mask)
        return cls(masks, n)

    @property
    def m(self) -> int:
        return self._m

    @property
    def n(self) -> int:
        return self._n

    @property
    def shape(self) -> Tuple[int, int]:
        return self._m, self._n

    @property
    def row_masks(self) -> Tuple[int, ...]:
        """Row bitsets indexed 0..m-1 (internal, hot-loop access)."""
        return self._rows

    @property
    def column_masks(self) -> Tuple[int, ...]:
        """Column bitsets indexed 0..n-1 (internal, hot-loop access)."""
        return self._cols

    @property
    def all_rows_mask(self) -> int:
        return (1 << self._m) - 1

    @property
    def all_columns_mask(self) -> int:
        return (1 << self._n) - 1

    def row_mask(self, i: int) -> int:
        return self._rows[_check_index(i, self._m, "row") - 1]

    def column_mask(self, j: int) -> int:
        return self._cols[_check_index(j, self._n, "column") - 1]

    def entry(self, i: int, j: int) -> int:
        j = _check_index(j, self._n, "column")
        return self.row_mask(i) >> (j - 1) & 1

    def row(self, i: int) -> IndexSet:
        """Columns holding a 1 in row ``i``."""
        return IndexSet(self.row_mask(i), self._n)

    def column(self, j: int) -> IndexSet:
        """Rows holding a 1 in column ``j``."""
        return IndexSet(self.column_mask(j), self._m)

    def row_sums(self) -> List[int]:
        return [popcount(row) for row in self._rows]

    def column_sums(self) -> List[int]:
        return [popcount(col) for col in self._cols]

    def has_zero_row(self) -> bool:
        return any(row == 0 for row in self._rows)

    def zero_columns(self) -> IndexSet:
        mask = 0
        for k, col in enumerate(self._cols):
            if col == 0:
                mask |= 1 << k
        return IndexSet(mask, self._n)

    def to_numpy(self) -> np.ndarray:
        array = np.zeros((self._m, self._n), dtype=np.uint8)
        for i, row in enumerate(self._rows):
            for k in iter_bits(row):
                array[i, k] = 1
        return array

    def to_strings(self) -> List[str]:
        return [
            "".join("1" if row >> k & 1 else "0" for k in range(self._n))
            for row in self._rows
        ]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoolMatrix):
            return NotImplemented
        return self._n == other._n and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._n, self._rows))

    def __reduce__(self):
        return (BoolMatrix, (self._rows, self._n))

    def __repr__(self) -> str:
        return f"BoolMatrix(m={self._m}, n={self._n})"


def as_covering(columns: Iterable[int], n: int = None) -> Covering:
    """
    Normalize a column set to a sorted tuple, validating the indices.

    Args:
        columns: 1-based column indices in any order
        n: Optional column count for range checks

    Raises:
        ValueError: on duplicates, non-integers or out-of-range indices
    """
    values = []
    for column in columns:
        if isinstance(column, bool) or not isinstance(column, (int, np.integer)):
            raise ValueError(f"column index must be an integer, got {column!r}")
        column = int(column)
        if column < 1 or (n is not None and column > n):
            bound = f"1..{n}" if n is not None else ">= 1"
            raise ValueError(f"column index {column} out of range {bound}")
        values.append(column)
    covering = tuple(sorted(values))
    if len(set(covering)) != len(covering):
        raise ValueError(f"duplicate column index in {covering}")
    return covering


def columns_mask(L: BoolMatrix, H: Iterable[int]) -> int:
    """Bitset over columns of ``L`` for the 1-based column set ``H``."""
    if isinstance(H, IndexSet):
        if H.universe != L.n:
            raise ValueError(f"column set universe {H.universe} does not match n={L.n}")
        return H.mask
    return mask_from_indices(H, L.n, "column")


def covered_rows_mask(L: BoolMatrix, column_mask: int) -> int:
    """Rows (as a bitset) holding a 1 in at least one column of ``column_mask``."""
    cols = L.column_masks
    covered = 0
    for k in iter_bits(column_mask):
        covered |= cols[k]
    return covered


def submatrix_rows(L: BoolMatrix, w: Iterable[int]) -> BoolMatrix:
    """
    Submatrix made of the rows of ``L`` with indices in ``w``, in ascending order.

    Raises:
        ValueError: if ``w`` is empty or holds an out-of-range index
    """
    if isinstance(w, IndexSet):
        if w.universe != L.m:
            raise ValueError(f"row set universe {w.universe} does not match m={L.m}")
        mask = w.mask
    else:
        mask = mask_from_indices(w, L.m, "row")
    if not mask:
        raise ValueError("row set must be nonempty")
    rows = L.row_masks
    return BoolMatrix([rows[k] for k in iter_bits(mask)], L.n)


def covers_row(L: BoolMatrix, H: Iterable[int], i: int) -> bool:
    """True iff some column of ``H`` has a 1 in row ``i``."""
    return bool(L.row_mask(i) & columns_mask(L, H))


def uncovered_rows(L: BoolMatrix, H: Iterable[int]) -> IndexSet:
    """Rows with no unit entry in the columns of ``H``; empty iff ``H`` is a covering."""
    covered = covered_rows_mask(L, columns_mask(L, H))
    return IndexSet(L.all_rows_mask & ~covered, L.m)
