"""Bisection estimation of the augmented identity parameters.

The sender announces candidate encodings with m_A = m_B = 1 and receives a
noiseless believe / not-believe answer per receiver type.  Because belief
depends only on the ratio n_B/n_A through the band [k_B, k_A], bisecting on
that ratio recovers each augmented parameter to any resolution, and the
estimates are enough to synthesize the optimal encoding.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Mapping, Protocol

from .equilibrium import reduced_lp_feasible
from .model import Group, Population, SenderStrategy

#: Default search upper bound for the augmented parameters.
DEFAULT_SEARCH_BOUND = 1.0e4

#: Relative inward bias applied to synthesized boundary coordinates so the
#: exact believe comparison is robust to rounding of the ratio arithmetic.
_BOUNDARY_BIAS = 1e-14


class InvalidResolution(ValueError):
    """Raised for a non-positive resolution or one at least the search bound."""


class BelieveOracle(Protocol):
    """Answers whether one receiver type believes an announced encoding.

    Answers must be deterministic and consistent with the type's belief
    constraint at (n_A, n_B) with m_A = m_B = 1.  Implementations must be
    safe for concurrent read-only queries.
    """

    def query(self, side: Group, n_A: float, n_B: float) -> bool: ...


@dataclass(frozen=True)
class GroundTruthOracle:
    """Oracle answering directly from a known population's constraints."""

    population: Population

    def query(self, side: Group, n_A: float, n_B: float) -> bool:
        ok_A, ok_B = reduced_lp_feasible(n_A, n_B, self.population)
        return ok_A if side is Group.A else ok_B


def ground_truth_oracle(population: Population) -> GroundTruthOracle:
    return GroundTruthOracle(population)


def _round_key(side: Group, n_A: float, n_B: float) -> tuple[str, float, float]:
    return (side.value, round(n_A, 9), round(n_B, 9))


@dataclass(frozen=True)
class ReplayOracle:
    """Oracle replaying previously recorded (side, n_A, n_B, answer) rows.

    Lookups match announced strategies to 9 decimal places; querying an
    unrecorded strategy raises KeyError.
    """

    answers: Mapping[tuple[str, float, float], bool]

    @classmethod
    def from_rows(
        cls, rows: list[tuple[Group, float, float, bool]]
    ) -> "ReplayOracle":
        return cls(
            {_round_key(side, n_A, n_B): answer for side, n_A, n_B, answer in rows}
        )

    @classmethod
    def from_csv(cls, path) -> "ReplayOracle":
        rows = []
        with open(path, newline="") as handle:
            for record in csv.DictReader(handle):
                rows.append(
                    (
                        Group(record["side"]),
                        float(record["n_A"]),
                        float(record["n_B"]),
                        record["answer"].strip().lower() in ("1", "true", "yes"),
                    )
                )
        return cls.from_rows(rows)

    def query(self, side: Group, n_A: float, n_B: float) -> bool:
        return self.answers[_round_key(side, n_A, n_B)]


@dataclass(frozen=True)
class RecordingOracle:
    """Wraps an oracle and logs every query, for replay files and tests."""

    inner: BelieveOracle
    log: list = field(default_factory=list)

    def query(self, side: Group, n_A: float, n_B: float) -> bool:
        answer = self.inner.query(side, n_A, n_B)
        self.log.append((side, n_A, n_B, answer))
        return answer

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["side", "n_A", "n_B", "answer"])
            for side, n_A, n_B, answer in self.log:
                writer.writerow([side.value, repr(n_A), repr(n_B), str(answer)])


@dataclass(frozen=True)
class EstimationResult:
    """Bisection output: the estimate is the final bracket midpoint."""

    k_hat: float
    lower: float
    upper: float
    steps: int
    search_bound: float
    brackets: tuple[tuple[float, float], ...] = ()

    @property
    def hit_upper_bound(self) -> bool:
        """True when no query ever rejected, i.e. the true value may exceed
        the search bound (or is effectively unbounded for this side)."""
        return self.upper == self.search_bound


def estimate_k(
    oracle: BelieveOracle,
    side: Group,
    delta: float,
    M: float = DEFAULT_SEARCH_BOUND,
) -> EstimationResult:
    """Bisection search for one augmented identity parameter.

    Starting from the bracket [0, M] and the probe ratio 1, each step
    announces n_B = min(1, ratio), n_A = min(1, 1/ratio) and tightens the
    bracket according to the believe answer; the next probe is the bracket
    midpoint.  Terminates when the bracket is narrower than delta.  When the
    true parameter lies in [0, M] the estimate is within delta of it, in at
    most ceil(log2(M/delta)) + 1 queries.  A side that always believes
    drives the estimate to M; a side-B parameter below zero drives it to 0.
    """
    if not (delta > 0.0) or not (M > 1.0) or delta >= M:
        raise InvalidResolution(
            f"need 0 < delta < M and M > 1, got delta={delta!r}, M={M!r}"
        )
    lower, upper = 0.0, float(M)
    eta = 1.0
    steps = 0
    brackets = []
    while upper - lower >= delta:
        n_B = min(1.0, eta)
        n_A = min(1.0, 1.0 / eta)
        believe = oracle.query(side, n_A, n_B)
        if side is Group.A:
            if believe:
                lower = eta
            else:
                upper = eta
        else:
            if believe:
                upper = eta
            else:
                lower = eta
        steps += 1
        brackets.append((lower, upper))
        eta = (lower + upper) / 2.0
    return EstimationResult(
        k_hat=(lower + upper) / 2.0,
        lower=lower,
        upper=upper,
        steps=steps,
        search_bound=float(M),
        brackets=tuple(brackets),
    )


def strategy_from_estimates(k_hat_A: float, k_hat_B: float) -> SenderStrategy:
    """Synthesize the sender's encoding from estimated augmented parameters.

    Treats the estimates as the true parameters.  Negative inputs (which
    bisection never produces, but true parameters can be) denote a side
    that believes every encoding: for A that removes the upper ratio limit,
    for B the lower one.  If the band is empty only the silent-on-bad-news
    point (n_A, n_B) = (0, 0) is feasible; otherwise the ratio is the band
    point closest to 1 and the larger coordinate is 1.
    """
    k_A = math.inf if k_hat_A < 0.0 else k_hat_A
    k_B = 0.0 if k_hat_B < 0.0 else k_hat_B
    if k_A < k_B:
        return SenderStrategy(1.0, 1.0, 0.0, 0.0)
    gamma = min(max(1.0, k_B), k_A)
    if gamma <= 1.0:
        n_A = 1.0
        n_B = gamma if gamma == 1.0 else gamma * (1.0 - _BOUNDARY_BIAS)
    else:
        n_A = (1.0 / gamma) * (1.0 - _BOUNDARY_BIAS)
        n_B = 1.0
    return SenderStrategy(1.0, 1.0, n_A, n_B)
