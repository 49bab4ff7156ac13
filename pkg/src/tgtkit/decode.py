"""Edge-family construction and the three approximate decoders.

All three decoders share the same first step: a ``u``-subset ``X`` of the
items is an edge of the candidate family ``F`` iff ``t0(X) <= e``, where
``t0(X)`` counts the negative pools in which all of ``X`` appears and
``e = (z - 1) // 2``.  On an ``(n, d - ell, u; 2e + 1]``-disjunct matrix
with at most ``e`` erroneous outcomes, every ``u``-subset of the defective
set ``S`` is an edge and every edge contains at least ``ell + 1``
defectives, whatever the gap pools did.

The decoders differ in how they grow an approximation ``S'`` out of ``F``
and in the false-positive/false-negative envelope they guarantee:

* algorithm 1: repeatedly swap ``g + 1`` items in and ``g`` items out while
  the family stays u-complete on the candidate; envelope ``(g, g)``.
* algorithm 2: greedily union disjoint edges, then any edges bringing at
  least ``g + 1`` new items; envelope
  ``((floor(|S| / (ell + 1)) + u - 1) * g, g)``.
* algorithm 3: run algorithm 2, restrict the family to its output, then run
  the algorithm-1 extension inside it; envelope ``(g, 2g)``.

Every choice the underlying procedures leave open ("an arbitrary edge",
"check all possible cases") is resolved lexicographically over sorted item
tuples, so decoding is deterministic.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .errors import FeasibilityError, ValidationError
from .matrix import BinaryMatrix, ItemSet, OutcomeVector
from .model import TGTParams

#: default cap on family construction (number of u-subsets enumerated)
FAMILY_SUBSET_CAP = 10_000_000

#: default cap on a single extension step's candidate pairs
EXTENSION_STEP_CAP = 10_000_000


@dataclass(frozen=True)
class Family:
    """A family of ``u``-subsets of the items (the hypergraph edge set)."""

    u: int
    edges: tuple[tuple[int, ...], ...]
    edge_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for edge in self.edges:
            if len(edge) != self.u or len(set(edge)) != self.u:
                raise ValidationError(f"edge {edge} is not a {self.u}-subset")
            if tuple(sorted(edge)) != edge:
                raise ValidationError(f"edge {edge} is not sorted")
        if len(set(self.edges)) != len(self.edges):
            raise ValidationError("duplicate edges in family")
        object.__setattr__(self, "edge_set", frozenset(self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __contains__(self, edge: Iterable[int]) -> bool:
        return tuple(sorted(edge)) in self.edge_set


@dataclass(frozen=True)
class DecodeResult:
    """Recovered set plus the governing guarantee envelope."""

    recovered: ItemSet
    algorithm: int
    max_false_positives: int
    max_false_negatives: int
    underdetermined: bool = False

    @property
    def envelope(self) -> tuple[int, int]:
        return (self.max_false_positives, self.max_false_negatives)


def _negative_cooccurrence(matrix: BinaryMatrix, outcome: OutcomeVector, combo) -> int:
    # combo holds 0-based columns; counts negative rows containing them all
    rows = outcome.negatives_mask
    for j in combo:
        rows &= matrix.col_masks[j]
        if not rows:
            return 0
    return rows.bit_count()


def build_family(
    matrix: BinaryMatrix,
    outcome: OutcomeVector,
    u: int,
    e: int,
    subset_cap: int = FAMILY_SUBSET_CAP,
) -> Family:
    """All ``u``-subsets with ``t0 <= e``, enumerated lexicographically."""
    if u < 1:
        raise ValidationError(f"u must be >= 1, got {u}")
    if e < 0:
        raise ValidationError(f"e must be >= 0, got {e}")
    if len(outcome) != matrix.rows:
        raise ValidationError(
            f"outcome has {len(outcome)} entries for a {matrix.rows}-row matrix"
        )
    n = matrix.cols
    if u > n:
        raise ValidationError(f"u={u} exceeds the number of items {n}")
    total = math.comb(n, u)
    if total > subset_cap:
        raise FeasibilityError(
            f"family construction would enumerate {total} subsets > cap {subset_cap}"
        )
    edges = []
    for combo in combinations(range(n), u):
        if _negative_cooccurrence(matrix, outcome, combo) <= e:
            edges.append(tuple(j + 1 for j in combo))
    return Family(u, tuple(edges))


def is_u_complete(family: Family, items: Iterable[int]) -> bool:
    """Whether every ``u``-subset of ``items`` is an edge of the family."""
    members = tuple(sorted(set(items)))
    if len(members) < family.u:
        raise ValidationError(
            f"u-completeness needs at least u={family.u} items, got {len(members)}"
        )
    edge_set = family.edge_set
    return all(c in edge_set for c in combinations(members, family.u))


def w_bound(s_size: int, ell: int, u: int, g: int) -> int:
    """False-positive envelope of algorithm 2:
    ``(floor(s_size / (ell + 1)) + u - 1) * g``."""
    if ell < 0 or u < 1 or s_size < 0:
        raise ValidationError("need ell >= 0, u >= 1, s_size >= 0")
    if g != u - ell - 1:
        raise ValidationError(f"inconsistent gap: g={g} but u - ell - 1 = {u - ell - 1}")
    return (s_size // (ell + 1) + u - 1) * g


def _first_u_complete_extension(
    family: Family,
    current: frozenset,
    pool: tuple[int, ...],
    g: int,
    step_cap: int,
) -> Optional[frozenset]:
    """Lexicographically first ``(S ∪ A) \\ B`` that is u-complete.

    ``A`` runs over ``(g + 1)``-subsets of ``pool`` (items outside the
    current set), ``B`` over ``g``-subsets of the current set, both in
    lexicographic order with ``A`` outermost.
    """
    if len(pool) < g + 1:
        return None
    work = math.comb(len(pool), g + 1) * math.comb(len(current), g)
    if work > step_cap:
        raise FeasibilityError(
            f"extension step would check {work} candidate pairs > cap {step_cap}"
        )
    cur_sorted = tuple(sorted(current))
    edge_set = family.edge_set
    u = family.u
    for a in combinations(pool, g + 1):
        grown = current | set(a)
        for b in combinations(cur_sorted, g):
            candidate = grown - set(b)
            members = tuple(sorted(candidate))
            if all(c in edge_set for c in combinations(members, u)):
                return frozenset(candidate)
    return None


def _empty_result(algorithm: int, fp: int, fn: int) -> DecodeResult:
    return DecodeResult(ItemSet(()), algorithm, fp, fn, underdetermined=True)


def decode_alg1(
    outcome: OutcomeVector,
    matrix: BinaryMatrix,
    params: TGTParams,
    subset_cap: int = FAMILY_SUBSET_CAP,
    step_cap: int = EXTENSION_STEP_CAP,
) -> DecodeResult:
    """Swap-extension decoder; guarantees at most ``g`` false positives and
    ``g`` false negatives on a verified matrix with at most ``e`` errors."""
    g = params.g
    family = build_family(matrix, outcome, params.u, params.e, subset_cap)
    if not family.edges:
        return _empty_result(1, g, g)
    current = frozenset(family.edges[0])
    universe = range(1, params.n + 1)
    while len(current) < params.d:
        pool = tuple(j for j in universe if j not in current)
        nxt = _first_u_complete_extension(family, current, pool, g, step_cap)
        if nxt is None:
            break
        current = nxt
    return DecodeResult(ItemSet.of(current), 1, g, g)


def decode_alg2(
    outcome: OutcomeVector,
    matrix: BinaryMatrix,
    params: TGTParams,
    subset_cap: int = FAMILY_SUBSET_CAP,
) -> DecodeResult:
    """Greedy union decoder.

    Phase A unions disjoint edges; phase B unions edges contributing at
    least ``g + 1`` new items; both scan the family lexicographically and
    never reuse a consumed edge.  The reported false-positive cap uses
    ``|S| = d`` (the decoder cannot see the true size; checks against a
    known truth should use :func:`w_bound` at the actual ``|S|``).
    """
    g = params.g
    fp_cap = w_bound(params.d, params.ell, params.u, g)
    if math.e**2 * params.k_disjunct**2 > params.n * params.u:
        # the procedure runs regardless; only the cost guarantee is nominal
        warnings.warn(
            "greedy decoding assumes e^2 (d + u)^2 / u <= n; proceeding anyway",
            stacklevel=2,
        )
    family = build_family(matrix, outcome, params.u, params.e, subset_cap)
    if not family.edges:
        return _empty_result(2, fp_cap, g)
    current = set(family.edges[0])
    used: set[tuple[int, ...]] = set()
    while True:  # phase A: disjoint edges
        pick = None
        for edge in family.edges:
            if edge not in used and not current.intersection(edge):
                pick = edge
                break
        if pick is None:
            break
        used.add(pick)
        current.update(pick)
    while True:  # phase B: edges adding >= g + 1 new items
        pick = None
        for edge in family.edges:
            if edge not in used and len(set(edge) - current) >= g + 1:
                pick = edge
                break
        if pick is None:
            break
        used.add(pick)
        current.update(pick)
    return DecodeResult(ItemSet.of(current), 2, fp_cap, g)


def decode_alg3(
    outcome: OutcomeVector,
    matrix: BinaryMatrix,
    params: TGTParams,
    subset_cap: int = FAMILY_SUBSET_CAP,
    step_cap: int = EXTENSION_STEP_CAP,
) -> DecodeResult:
    """Two-stage decoder: algorithm 2 proposes a vertex set, and the
    swap-extension runs on the family restricted to it; envelope
    ``(g, 2g)``."""
    g = params.g
    if w_bound(params.d, params.ell, params.u, g) + params.d > params.n:
        warnings.warn(
            "refinement decoding assumes w + d <= n at worst-case w; "
            "proceeding anyway",
            stacklevel=2,
        )
    stage1 = decode_alg2(outcome, matrix, params, subset_cap)
    vertices = stage1.recovered.members
    if stage1.underdetermined or not vertices:
        return _empty_result(3, g, 2 * g)
    edges = []
    for combo in combinations(vertices, params.u):
        zero_based = tuple(j - 1 for j in combo)
        if _negative_cooccurrence(matrix, outcome, zero_based) <= params.e:
            edges.append(combo)
    family = Family(params.u, tuple(edges))
    if not family.edges:
        return _empty_result(3, g, 2 * g)
    current = frozenset(family.edges[0])
    while len(current) < params.d:
        pool = tuple(j for j in vertices if j not in current)
        nxt = _first_u_complete_extension(family, current, pool, g, step_cap)
        if nxt is None:
            break
        current = nxt
    return DecodeResult(ItemSet.of(current), 3, g, 2 * g)


def decode(
    outcome: OutcomeVector,
    matrix: BinaryMatrix,
    params: TGTParams,
    algorithm: int,
    subset_cap: int = FAMILY_SUBSET_CAP,
    step_cap: int = EXTENSION_STEP_CAP,
) -> DecodeResult:
    if algorithm == 1:
        return decode_alg1(outcome, matrix, params, subset_cap, step_cap)
    if algorithm == 2:
        return decode_alg2(outcome, matrix, params, subset_cap)
    if algorithm == 3:
        return decode_alg3(outcome, matrix, params, subset_cap, step_cap)
    raise ValidationError(f"unknown algorithm {algorithm!r} (expected 1, 2 or 3)")


@dataclass(frozen=True)
class EnvelopeCheck:
    false_positives: int
    false_negatives: int
    fp_limit: int
    fn_limit: int

    @property
    def passed(self) -> bool:
        return (
            self.false_positives <= self.fp_limit
            and self.false_negatives <= self.fn_limit
        )


def check_envelope(
    s_true: ItemSet,
    s_recovered: ItemSet,
    algorithm: int,
    params: TGTParams,
) -> EnvelopeCheck:
    """Compare ``|S' \\ S|`` and ``|S \\ S'|`` against the governing
    algorithm's envelope (algorithm 2's false-positive cap uses the true
    ``|S|``)."""
    for item in list(s_true) + list(s_recovered):
        if not 1 <= item <= params.n:
            raise ValidationError(f"item {item} outside 1..{params.n}")
    g = params.g
    if algorithm == 1:
        fp_limit, fn_limit = g, g
    elif algorithm == 2:
        fp_limit, fn_limit = w_bound(len(s_true), params.ell, params.u, g), g
    elif algorithm == 3:
        fp_limit, fn_limit = g, 2 * g
    else:
        raise ValidationError(f"unknown algorithm {algorithm!r} (expected 1, 2 or 3)")
    true_set = set(s_true)
    rec_set = set(s_recovered)
    return EnvelopeCheck(
        false_positives=len(rec_set - true_set),
        false_negatives=len(true_set - rec_set),
        fp_limit=fp_limit,
        fn_limit=fn_limit,
    )
