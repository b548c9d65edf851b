"""Idealized quantum-search execution model with oracle-query accounting.

A search over m candidates with k marked items is modeled as succeeding with
certainty and returning one marked item uniformly at random, charged
ceil(pi/4 * sqrt(m/k)) oracle queries; a search with no marked item charges a
full-width run ceil(pi/4 * sqrt(m)) and reports failure.  Amplitude-level
validation of this model lives in the statevector module.

Predicates are vectorized: they receive an int64 index array and return a
boolean mask of the same length.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyDomain
from .grid import SearchSpace, space_points
from .model import NO_INDEX, Params, PointCloud


@dataclass
class PhaseCounters:
    oracle_calls: int = 0
    diffusion_calls: int = 0
    classical_equivalent_calls: int = 0
    invocations: int = 0

    def to_dict(self) -> dict:
        return {
            "oracle_calls": self.oracle_calls,
            "diffusion_calls": self.diffusion_calls,
            "classical_equivalent_calls": self.classical_equivalent_calls,
            "invocations": self.invocations,
        }


@dataclass
class QueryLedger:
    """Monotone per-phase counters of oracle work and the classical O(m) equivalent."""

    phases: dict[str, PhaseCounters] = field(default_factory=dict)

    def record(self, phase: str, *, queries: int, domain_size: int) -> None:
        if queries < 0 or domain_size < 0:
            raise ValueError("ledger increments must be non-negative")
        c = self.phases.setdefault(phase, PhaseCounters())
        c.oracle_calls += queries
        c.diffusion_calls += queries
        c.classical_equivalent_calls += domain_size
        c.invocations += 1

    @property
    def oracle_calls(self) -> int:
        return sum(c.oracle_calls for c in self.phases.values())

    @property
    def diffusion_calls(self) -> int:
        return sum(c.diffusion_calls for c in self.phases.values())

    @property
    def classical_equivalent_calls(self) -> int:
        return sum(c.classical_equivalent_calls for c in self.phases.values())

    @property
    def invocations(self) -> int:
        return sum(c.invocations for c in self.phases.values())

    def merge(self, other: "QueryLedger") -> None:
        """Fold another ledger in (for per-worker ledgers merged after a phase)."""
        for phase, c in other.phases.items():
            mine = self.phases.setdefault(phase, PhaseCounters())
            mine.oracle_calls += c.oracle_calls
            mine.diffusion_calls += c.diffusion_calls
            mine.classical_equivalent_calls += c.classical_equivalent_calls
            mine.invocations += c.invocations

    def to_dict(self) -> dict:
        return {phase: c.to_dict() for phase, c in sorted(self.phases.items())}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass
class GroverOutcome:
    found: int | None
    queries_charged: int
    marked_count_at_call: int


def grover_queries(m: int, k: int) -> int:
    """Queries charged for one run over m items with k marked (k=0: full width)."""
    return math.ceil(math.pi / 4 * math.sqrt(m / k if k else m))


def grover_find_one(
    domain: np.ndarray,
    predicate,
    ledger: QueryLedger,
    rng: np.random.Generator,
    phase: str = "grover",
) -> GroverOutcome:
    """One Grover run: returns a uniformly random marked item, or None if none exist."""
    domain = np.asarray(domain, dtype=np.int64)
    m = domain.size
    if m == 0:
        raise EmptyDomain("cannot run a search over an empty domain")
    marked = domain[np.asarray(predicate(domain), dtype=bool)]
    k = marked.size
    queries = grover_queries(m, k)
    ledger.record(phase, queries=queries, domain_size=m)
    found = int(marked[rng.integers(k)]) if k else None
    return GroverOutcome(found=found, queries_charged=queries, marked_count_at_call=k)


def grover_find_all(
    domain: np.ndarray,
    predicate,
    ledger: QueryLedger,
    rng: np.random.Generator,
    phase: str = "grover",
) -> list[int]:
    """Repeat find-one, removing each found item, until a run comes back empty.

    Set-equal to the classical filter; costs O((p+1) * sqrt(m)) queries for p
    marked among m.
    """
    domain = np.asarray(domain, dtype=np.int64)
    if domain.size == 0:
        raise EmptyDomain("cannot run a search over an empty domain")
    alive = np.ones(domain.size, dtype=bool)
    pos = {int(v): i for i, v in enumerate(domain)}
    found: list[int] = []
    while True:
        outcome = grover_find_one(domain[alive], predicate, ledger, rng, phase)
        if outcome.found is None:
            return found
        found.append(outcome.found)
        alive[pos[outcome.found]] = False
        if not alive.any():
            return found


def _split_below(lo_sq: int, cand_sq: int) -> int:
    """Upper bracket bound after halving the (lo, candidate) distance interval.

    The midpoint is taken on plain distances and floored back to the exact
    squared-integer lattice; any split strictly below the candidate keeps the
    search exact, so float sqrt rounding here is harmless.
    """
    lo_d = math.sqrt(max(lo_sq, 0))
    mid = (lo_d + math.sqrt(cand_sq)) / 2
    return min(int(mid * mid), cand_sq - 1)


def gebs_nearest_higher(
    points: PointCloud,
    space: SearchSpace | np.ndarray,
    j: int,
    params: Params,
    ledger: QueryLedger,
    rng: np.random.Generator,
    phase: str = "nearest_higher",
    *,
    grid=None,
) -> tuple[int | None, int]:
    """Grover-enhanced binary search for the nearest strictly-denser point.

    Brackets the candidate's squared distance over (lo, hi], halving toward the
    base point on every hit (Y branch), swapping to the untested upper half after
    a miss that follows a hit (B branch), and terminating on a miss that follows
    a miss or the start (A branch).  A final collect-equals pass resolves ties at
    the winning distance toward the lowest index, matching the linear scan.

    Returns (index or None, exact squared distance or -1).
    """
    if isinstance(space, SearchSpace):
        idx = space_points(grid, space)
    else:
        idx = np.asarray(space, dtype=np.int64)
    if idx.size == 0:
        return None, NO_INDEX
    # The register holds the whole space; the strict density inequality already
    # rules the base point itself out.
    s = points.sq_dists_from(j, idx)
    eligible = (points.density[idx] > points.density[j]) & (s <= params.dm_sq)
    alive = np.ones(idx.size, dtype=bool)
    pos = np.full(points.n, -1, dtype=np.int64)
    pos[idx] = np.arange(idx.size)

    lo, hi = -1, params.dm_sq
    cand_i, cand_sq = None, -1
    prev = "start"
    while True:
        run_failed = True
        if lo < hi and alive.any():
            in_bracket = eligible & (s > lo) & (s <= hi)
            outcome = grover_find_one(
                idx[alive], lambda d, m=in_bracket: m[pos[d]], ledger, rng, phase
            )
            if outcome.found is not None:
                run_failed = False
                cand_i, cand_sq = outcome.found, int(s[pos[outcome.found]])
                alive[pos[cand_i]] = False
                hi = _split_below(lo, cand_sq)
                prev = "Y"
        if run_failed:
            if prev == "Y":
                lo, hi = hi, cand_sq - 1
                prev = "B"
            else:
                break
    if cand_i is None:
        return None, NO_INDEX
    if alive.any():
        tie_mask = eligible & (s == cand_sq)
        ties = grover_find_all(
            idx[alive], lambda d: tie_mask[pos[d]], ledger, rng, phase
        )
        cand_i = min([cand_i, *ties])
    return int(cand_i), cand_sq
