"""
Subtask-size estimation from random row-submatrices.

For s = 1..t an r-subset w_s of the rows is drawn uniformly (Floyd's
algorithm), P(L^{w_s}) is fully materialized by RUNC-M, and u coverings are
drawn from it uniformly with replacement; their least column indices form the
sample. Submatrices without coverings are redrawn.

Randomness: ``SeedSequence(seed).spawn(t)`` gives one PCG64 stream per
submatrix index s, so results do not depend on how the t dualizations are
spread over worker processes.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..dualization.runcm import dualize
from ..dualization.schema import EnumConfig
from ..matrix.bitmatrix import BoolMatrix, Covering, submatrix_rows
from ..utils.errors import SamplingError
from ..utils.logger import get_logger
from .schema import FrequencyEstimate, SampleConfig

logger = get_logger(__name__)

MAX_CONSECUTIVE_DISCARDS = 1000


def floyd_sample(rng: np.random.Generator, m: int, r: int) -> List[int]:
    """Uniform random r-subset of {1..m} (Floyd), returned sorted."""
    if not 1 <= r <= m:
        raise ValueError(f"subset size {r} out of range 1..{m}")
    chosen = set()
    for j in range(m - r + 1, m + 1):
        pick = int(rng.integers(1, j + 1))
        chosen.add(j if pick in chosen else pick)
    return sorted(chosen)


def draw_submatrix_coverings(matrix: BoolMatrix,
                             r: int,
                             u: int,
                             seed_seq: np.random.SeedSequence,
                             enum_config: Optional[EnumConfig] = None,
                             max_consecutive_discards: int = MAX_CONSECUTIVE_DISCARDS,
                             memo: Optional[Dict[Tuple[int, ...], List[Covering]]] = None
                             ) -> Tuple[Tuple[int, ...], List[Covering], int]:
    """
    Draw one row subset w with a non-empty P(L^w) and u coverings of L^w,
    uniformly with replacement.

    Returns:
        (w, the u coverings, number of empty submatrices discarded before w)

    Raises:
        SamplingError: after ``max_consecutive_discards`` empty submatrices in a row
    """
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    discarded = 0
    while True:
        w = tuple(floyd_sample(rng, matrix.m, r))
        if memo is not None and w in memo:
            coverings = memo[w]
        else:
            coverings = dualize(submatrix_rows(matrix, w), enum_config)
            if memo is not None:
                memo[w] = coverings
        if coverings:
            break
        discarded += 1
        if discarded >= max_consecutive_discards:
            raise SamplingError(
                f"{discarded} consecutive {r}-row submatrices had no irreducible coverings; "
                f"the matrix likely has an all-zero row"
            )
    picks = rng.integers(0, len(coverings), size=u)
    return w, [coverings[int(i)] for i in picks], discarded


def _sample_submatrix(matrix: BoolMatrix,
                      r: int,
                      u: int,
                      seed_seq: np.random.SeedSequence,
                      enum_config: Optional[EnumConfig],
                      max_consecutive_discards: int,
                      memo: Optional[Dict[Tuple[int, ...], List[Covering]]] = None) -> Tuple[List[int], int]:
    """Least indices of u coverings drawn from one random submatrix, plus the discard count."""
    _, drawn, discarded = draw_submatrix_coverings(matrix, r, u, seed_seq, enum_config,
                                                   max_consecutive_discards, memo)
    return [covering[0] for covering in drawn], discarded


def sample_eta(L: BoolMatrix,
               config: SampleConfig,
               enum_config: Optional[EnumConfig] = None,
               workers: int = 1,
               max_consecutive_discards: int = MAX_CONSECUTIVE_DISCARDS) -> FrequencyEstimate:
    """
    Estimate the subtask sizes of ``L`` by sampling least indices of random
    coverings of random r-row submatrices.

    Args:
        L: Matrix
        config: r, t, u and seed
        enum_config: Enumeration rules for the submatrix dualizations
        workers: Processes for the t independent dualizations (1 = in-process)
        max_consecutive_discards: Give up after this many empty submatrices in a row

    Raises:
        ValueError: if ``config.r > L.m``
        SamplingError: if submatrices keep having no coverings
    """
    if config.r > L.m:
        raise ValueError(f"r={config.r} exceeds the row count m={L.m}")
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")

    children = np.random.SeedSequence(config.seed).spawn(config.t)
    started = time.perf_counter()

    if workers == 1:
        # With r == m every draw is L itself; dualize it once.
        memo = {} if config.r == L.m else None
        results = [
            _sample_submatrix(L, config.r, config.u, child, enum_config, max_consecutive_discards, memo)
            for child in children
        ]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [
                executor.submit(_sample_submatrix, L, config.r, config.u, child,
                                enum_config, max_consecutive_discards)
                for child in children
            ]
            results = [future.result() for future in futures]

    sample: List[int] = []
    discarded = 0
    for values, dropped in results:
        sample.extend(values)
        discarded += dropped
    if discarded:
        logger.warning(f"Discarded {discarded} submatrices without coverings")

    counts = np.bincount(np.asarray(sample, dtype=np.int64), minlength=L.n + 1)[1:]
    f_star = (counts / float(config.N)).tolist()

    logger.info(
        f"Sampled N={config.N} least indices from t={config.t} submatrices "
        f"(r={config.r}) in {time.perf_counter() - started:.3f}s"
    )
    return FrequencyEstimate(f_star=f_star, sample=sample, config=config, discarded=discarded)


class SubtaskEstimator:
    """Config-driven front end for :func:`sample_eta`."""

    def __init__(self, config: Optional[Dict[str, Any]] = None, enum_config: Optional[EnumConfig] = None):
        """
        Initialize the estimator with configuration.

        Args:
            config: The ``estimator`` section of config.yaml
            enum_config: Enumeration rules for the submatrix dualizations
        """
        config = config or {}
        self.config = config
        self.t = config.get('t', 20)
        self.u = config.get('u', 50)
        self.r = config.get('r')
        self.workers = config.get('workers', 1)
        self.max_consecutive_discards = config.get('max_consecutive_discards', MAX_CONSECUTIVE_DISCARDS)
        self.enum_config = enum_config

    def sample_config(self, matrix: BoolMatrix, seed: int,
                      r: Optional[int] = None, t: Optional[int] = None, u: Optional[int] = None) -> SampleConfig:
        """Resolve explicit arguments against configured defaults (r defaults to ceil(m/2))."""
        if r is None:
            r = self.r if self.r is not None else SampleConfig.default_r(matrix.m)
        return SampleConfig(
            r=r,
            t=t if t is not None else self.t,
            u=u if u is not None else self.u,
            seed=seed
        )

    def estimate(self, matrix: BoolMatrix, seed: int,
                 r: Optional[int] = None, t: Optional[int] = None, u: Optional[int] = None) -> FrequencyEstimate:
        sample_config = self.sample_config(matrix, seed, r, t, u)
        logger.info(
            f"Estimating subtask sizes of a {matrix.m}x{matrix.n} matrix "
            f"(r={sample_config.r}, t={sample_config.t}, u={sample_config.u}, seed={seed})"
        )
        return sample_eta(
            matrix,
            sample_config,
            enum_config=self.enum_config,
            workers=self.workers,
            max_consecutive_discards=self.max_consecutive_discards
        )
