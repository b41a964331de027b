"""
RUNC-M enumeration of the irreducible coverings of a Boolean matrix.

A search vertex is the tuple (H, R, C): the partial column set H, the rows R
that H does not cover yet and the candidate columns C, plus the supporting
row sets S(H, j) for every j in H. A column u is compatible with H iff it
covers some row of R and, for every j in H, misses at least one row of
S(H, j); only compatible columns stay in C.

The recursion runs on an explicit stack, so the public entry points are
plain generators: a consumer that stops iterating aborts the search cleanly.
"""

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, List, Optional, Tuple

from ..matrix.bitmatrix import (
    BoolMatrix,
    Covering,
    IndexSet,
    columns_mask,
    covered_rows_mask,
    iter_bits,
    popcount
)
from ..utils.logger import get_logger
from .schema import EnumConfig, EnumStats

logger = get_logger(__name__)

# Sink protocol: returning False aborts the enumeration.
CoveringSink = Callable[[Covering], Optional[bool]]


def _supports_from_scratch(L: BoolMatrix, positions: Iterable[int]) -> List[int]:
    """S(H, j) for each 0-based column position of H, recomputed in one pass."""
    cols = L.column_masks
    positions = list(positions)
    once = twice = 0
    for k in positions:
        col = cols[k]
        twice |= once & col
        once |= col
    return [cols[k] & ~twice for k in positions]


@dataclass(frozen=True)
class SearchNode:
    """
    One vertex (H, R, C) of the search tree.

    ``columns`` and ``supports`` are aligned and use 0-based column positions;
    ``uncovered`` (R) and ``candidates`` (C) are bitsets.
    """
    matrix: BoolMatrix
    columns: Tuple[int, ...]
    supports: Tuple[int, ...]
    uncovered: int
    candidates: int

    @classmethod
    def root(cls, L: BoolMatrix) -> "SearchNode":
        """(∅, all rows, all nonzero columns)."""
        return cls(L, (), (), L.all_rows_mask, L.all_columns_mask & ~L.zero_columns().mask)

    @classmethod
    def from_columns(cls, L: BoolMatrix, H: Iterable[int], C: Optional[Iterable[int]] = None) -> "SearchNode":
        """
        Build the vertex for column set ``H`` with every quantity computed from scratch.

        Args:
            L: Matrix
            H: 1-based columns of the partial set
            C: 1-based candidate columns; defaults to every column outside ``H``

        Raises:
            ValueError: if ``C`` intersects ``H``
        """
        h_mask = columns_mask(L, H)
        if C is None:
            c_mask = L.all_columns_mask & ~h_mask
        else:
            c_mask = columns_mask(L, C)
            if c_mask & h_mask:
                raise ValueError("candidate columns must be disjoint from H")
        positions = tuple(iter_bits(h_mask))
        uncovered = L.all_rows_mask & ~covered_rows_mask(L, h_mask)
        return cls(L, positions, tuple(_supports_from_scratch(L, positions)), uncovered, c_mask)

    def extend(self, u: int) -> "SearchNode":
        """
        Child vertex H ∪ {u}, with supports maintained incrementally.

        Adding u strips the rows u covers from every S(H, j) and creates
        S(H ∪ {u}, u) = rows covered by u and not by H. Compatibility
        filtering of C is left to the caller.
        """
        if u not in self.C:
            raise ValueError(f"column {u} is not a candidate of this vertex")
        k = u - 1
        col = self.matrix.column_masks[k]
        return SearchNode(
            self.matrix,
            self.columns + (k,),
            tuple(s & ~col for s in self.supports) + (col & self.uncovered,),
            self.uncovered & ~col,
            self.candidates & ~(1 << k)
        )

    @property
    def H(self) -> Covering:
        return tuple(sorted(k + 1 for k in self.columns))

    @property
    def R(self) -> IndexSet:
        return IndexSet(self.uncovered, self.matrix.m)

    @property
    def C(self) -> IndexSet:
        return IndexSet(self.candidates, self.matrix.n)

    @property
    def support(self) -> dict:
        """Map 1-based j in H to S(H, j)."""
        m = self.matrix.m
        return {k + 1: IndexSet(s, m) for k, s in zip(self.columns, self.supports)}


def supporting_rows(L: BoolMatrix, H: Iterable[int], j: int) -> IndexSet:
    """
    S(H, j): rows where column j has a 1 and every other column of H has a 0.

    Raises:
        ValueError: if ``j`` is not in ``H``
    """
    h_mask = columns_mask(L, H)
    if isinstance(j, bool) or not isinstance(j, int) or not 1 <= j <= L.n or not h_mask >> (j - 1) & 1:
        raise ValueError(f"column {j} is not in H")
    others = covered_rows_mask(L, h_mask & ~(1 << (j - 1)))
    return IndexSet(L.column_masks[j - 1] & ~others, L.m)


def is_consistent(L: BoolMatrix, H: Iterable[int]) -> bool:
    """
    True iff the columns of H contain an identity submatrix of order |H|,
    i.e. every j in H has a nonempty S(H, j).

    Raises:
        ValueError: if ``H`` is empty
    """
    h_mask = columns_mask(L, H)
    if not h_mask:
        raise ValueError("consistency is undefined for an empty column set")
    return all(_supports_from_scratch(L, iter_bits(h_mask)))


def is_irreducible_covering(L: BoolMatrix, H: Iterable[int]) -> bool:
    """Criterion check: H covers every row and H is consistent."""
    h_mask = columns_mask(L, H)
    if not h_mask:
        return False
    if covered_rows_mask(L, h_mask) != L.all_rows_mask:
        return False
    return all(_supports_from_scratch(L, iter_bits(h_mask)))


def is_compatible(L: BoolMatrix, node: SearchNode, u: int) -> bool:
    """
    True iff H ∪ {u} stays consistent: u covers a row that H leaves uncovered
    and covers no S(H, j) entirely.

    Raises:
        ValueError: if ``u`` is not a candidate column of ``node``
    """
    if node.matrix is not L and node.matrix != L:
        raise ValueError("search node belongs to a different matrix")
    if u not in node.C:
        raise ValueError(f"column {u} is not a candidate of this vertex")
    col = L.column_masks[u - 1]
    if not col & node.uncovered:
        return False
    return all(s & ~col for s in node.supports)


class _Frame:
    """Loop state of one RUNCM call: C_0 shrinks while C_0^min is consumed."""

    __slots__ = ("columns", "supports", "uncovered", "candidates", "pending")

    def __init__(self, columns, supports, uncovered, candidates, pending):
        self.columns = columns
        self.supports = supports
        self.uncovered = uncovered
        self.candidates = candidates
        self.pending = pending


class RuncmEnumerator:
    """Explicit-stack RUNC-M search over one matrix."""

    def __init__(self, matrix: BoolMatrix, config: Optional[EnumConfig] = None):
        """
        Args:
            matrix: Matrix to dualize
            config: Tie-break and ordering rules (defaults: lowest row, ascending columns)
        """
        self.matrix = matrix
        self.config = config or EnumConfig()
        self.nodes = 0
        self.coverings = 0
        self.dead_ends = 0
        self.aborted = False
        self._rows = matrix.row_masks
        self._cols = matrix.column_masks
        self._highest_row = self.config.min_row_tie_break == "highest"
        self._descending = self.config.column_order == "descending"

    @property
    def stats(self) -> EnumStats:
        return EnumStats(
            nodes=self.nodes,
            coverings=self.coverings,
            dead_ends=self.dead_ends,
            aborted=self.aborted
        )

    def iter_all(self) -> Iterator[Covering]:
        """Every irreducible covering of the matrix, each exactly once."""
        if self.matrix.has_zero_row():
            logger.debug("Matrix has an all-zero row; no coverings exist")
            return
        root = SearchNode.root(self.matrix)
        yield from self._search(root.columns, root.supports, root.uncovered, root.candidates)

    def iter_subtask(self, j: int) -> Iterator[Covering]:
        """Irreducible coverings whose least column index is ``j``."""
        L = self.matrix
        if isinstance(j, bool) or not isinstance(j, int) or not 1 <= j <= L.n:
            raise ValueError(f"subtask index {j} out of range 1..{L.n}")
        k = j - 1
        col = self._cols[k]
        if col == 0 or L.has_zero_row():
            return
        uncovered = L.all_rows_mask & ~col
        if not uncovered:
            self.coverings += 1
            yield (j,)
            return
        supports = (col,)
        higher = L.all_columns_mask & ~((1 << j) - 1)
        candidates = self._compatible(higher, supports, uncovered)
        yield from self._search((k,), supports, uncovered, candidates)

    def _open(self, columns, supports, uncovered, candidates) -> _Frame:
        self.nodes += 1
        rows = self._rows
        best_row = -1
        best_count = None
        for i in iter_bits(uncovered):
            count = popcount(rows[i] & candidates)
            if best_count is None or count < best_count or (self._highest_row and count == best_count):
                best_row, best_count = i, count
                if count == 0:
                    break
        pending = rows[best_row] & candidates
        if not pending:
            self.dead_ends += 1
        return _Frame(columns, supports, uncovered, candidates, pending)

    def _compatible(self, candidates: int, supports: Tuple[int, ...], uncovered: int) -> int:
        cols = self._cols
        kept = 0
        for u in iter_bits(candidates):
            col = cols[u]
            if not col & uncovered:
                continue
            for s in supports:
                if not s & ~col:
                    break
            else:
                kept |= 1 << u
        return kept

    def _search(self, columns, supports, uncovered, candidates) -> Iterator[Covering]:
        cols = self._cols
        stack = [self._open(columns, supports, uncovered, candidates)]
        while stack:
            frame = stack[-1]
            if not frame.pending:
                stack.pop()
                continue
            if self._descending:
                j = frame.pending.bit_length() - 1
                bit = 1 << j
            else:
                bit = frame.pending & -frame.pending
                j = bit.bit_length() - 1
            frame.pending ^= bit
            frame.candidates &= ~bit

            col = cols[j]
            rest = frame.uncovered & ~col
            child_columns = frame.columns + (j,)
            if not rest:
                self.coverings += 1
                yield tuple(sorted(k + 1 for k in child_columns))
                continue

            child_supports = tuple(s & ~col for s in frame.supports) + (col & frame.uncovered,)
            child_candidates = self._compatible(frame.candidates, child_supports, rest)
            stack.append(self._open(child_columns, child_supports, rest, child_candidates))


def enumerate_coverings(L: BoolMatrix, config: Optional[EnumConfig] = None) -> Iterator[Covering]:
    """Stream every irreducible covering of ``L`` (nothing if ``L`` has a zero row)."""
    return RuncmEnumerator(L, config).iter_all()


def enumerate_subtask(L: BoolMatrix, j: int, config: Optional[EnumConfig] = None) -> Iterator[Covering]:
    """Stream the irreducible j-coverings of ``L`` (least column index ``j``)."""
    return RuncmEnumerator(L, config).iter_subtask(j)


def run_enumeration(L: BoolMatrix,
                    sink: CoveringSink,
                    config: Optional[EnumConfig] = None,
                    subtask: Optional[int] = None) -> EnumStats:
    """
    Push-style enumeration: hand every covering to ``sink``.

    Args:
        L: Matrix to dualize
        sink: Called once per covering; returning ``False`` stops the search
        config: Enumeration rules
        subtask: Restrict to the j-coverings of this column

    Returns:
        Counters of the (possibly aborted) search
    """
    enumerator = RuncmEnumerator(L, config)
    stream = enumerator.iter_all() if subtask is None else enumerator.iter_subtask(subtask)
    for covering in stream:
        if sink(covering) is False:
            enumerator.aborted = True
            stream.close()
            break
    stats = enumerator.stats
    logger.debug(
        f"Enumeration finished: {stats.coverings} coverings, "
        f"{stats.dead_ends} dead ends, aborted={stats.aborted}"
    )
    return stats


def dualize(L: BoolMatrix, config: Optional[EnumConfig] = None) -> List[Covering]:
    """All irreducible coverings of ``L`` in emission order."""
    return list(enumerate_coverings(L, config))
