"""Threshold-test semantics: parameters, gap policies, noise, and encoding.

A test on pool ``P`` against defective set ``S`` is positive when
``|P ∩ S| >= u``, negative when ``|P ∩ S| <= ell``, and *arbitrary* in
between.  The width ``g = u - ell - 1`` of the arbitrary band is the gap.
Simulation has to pick concrete outcomes for gap pools, which is what
:class:`GapPolicy` does; the two constant policies are the adversarial
extremes, ``bernoulli`` is the usual stochastic model, and ``explicit``
pins individual rows (needed to replay worked examples bit for bit).

Noise is applied after gap resolution, so an error budget of ``e`` flips
counts genuine outcome errors rather than unlucky gap choices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping

from .errors import ValidationError
from .matrix import BinaryMatrix, ItemSet, OutcomeVector


@dataclass(frozen=True)
class TGTParams:
    """Model parameters ``(n, d, ell, u, z)`` with the derived quantities.

    ``n`` items, at most ``d`` defective, thresholds ``ell < u``, and
    disjunct multiplicity ``z`` (the decoding matrix is expected to be
    ``(n, d - ell, u; z]``-disjunct, which tolerates ``e = (z - 1) // 2``
    outcome errors).
    """

    n: int
    d: int
    ell: int
    u: int
    z: int = 1

    def __post_init__(self) -> None:
        for name in ("n", "d", "ell", "u", "z"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValidationError(f"{name} must be an integer, got {v!r}")
        if not 0 <= self.ell < self.u <= self.d < self.n:
            raise ValidationError(
                f"need 0 <= ell < u <= d < n, got ell={self.ell} u={self.u} "
                f"d={self.d} n={self.n}"
            )
        if self.z < 1:
            raise ValidationError(f"z must be >= 1, got {self.z}")

    @property
    def g(self) -> int:
        """Gap width ``u - ell - 1``."""
        return self.u - self.ell - 1

    @property
    def e(self) -> int:
        """Tolerated outcome errors ``(z - 1) // 2``."""
        return (self.z - 1) // 2

    @property
    def k_decode(self) -> int:
        """``d - ell + u``: column-set size driving the decoding matrix."""
        return self.d - self.ell + self.u

    @property
    def k_disjunct(self) -> int:
        """``d + u``: column-set size in raw disjunct-matrix bounds."""
        return self.d + self.u

    def construction_size_ok(self) -> bool:
        """Whether ``(d + u)^2 / u <= n``, required by the randomized
        row-count bounds (checked on demand, not at creation)."""
        return (self.d + self.u) ** 2 <= self.n * self.u


@dataclass(frozen=True)
class GapPolicy:
    """Rule resolving outcomes of pools whose defective count is in the gap."""

    kind: str
    p: float = 0.5
    seed: int = 0
    overrides: tuple[tuple[int, int], ...] = ()

    _KINDS = ("always_positive", "always_negative", "bernoulli", "explicit")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValidationError(f"unknown gap policy {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"bernoulli p must be in [0, 1], got {self.p}")
        for row, bit in self.overrides:
            if bit not in (0, 1):
                raise ValidationError(f"override for row {row} must be 0/1")

    @classmethod
    def always_positive(cls) -> "GapPolicy":
        return cls("always_positive")

    @classmethod
    def always_negative(cls) -> "GapPolicy":
        return cls("always_negative")

    @classmethod
    def bernoulli(cls, p: float = 0.5, seed: int = 0) -> "GapPolicy":
        return cls("bernoulli", p=p, seed=seed)

    @classmethod
    def explicit(cls, overrides: Mapping[int, int]) -> "GapPolicy":
        return cls("explicit", overrides=tuple(sorted(overrides.items())))


@dataclass(frozen=True)
class NoiseSpec:
    """Outcome noise: nothing, fixed row flips, or seeded random flips."""

    kind: str
    rows: tuple[int, ...] = ()
    count: int = 0
    seed: int = 0

    _KINDS = ("none", "flip_rows", "random_flips")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValidationError(f"unknown noise spec {self.kind!r}")
        if self.count < 0:
            raise ValidationError("flip count must be non-negative")

    @classmethod
    def none(cls) -> "NoiseSpec":
        return cls("none")

    @classmethod
    def flip_rows(cls, rows) -> "NoiseSpec":
        return cls("flip_rows", rows=tuple(sorted(set(rows))))

    @classmethod
    def random_flips(cls, count: int, seed: int = 0) -> "NoiseSpec":
        return cls("random_flips", count=count, seed=seed)

    def weight(self) -> int:
        """Number of rows this spec flips."""
        if self.kind == "none":
            return 0
        if self.kind == "flip_rows":
            return len(self.rows)
        return self.count


def _defective_counts(matrix: BinaryMatrix, x_mask: int) -> list[int]:
    return [(mask & x_mask).bit_count() for mask in matrix.row_masks]


def encode(
    matrix: BinaryMatrix,
    defectives: ItemSet,
    ell: int,
    u: int,
    policy: GapPolicy,
    noise: NoiseSpec = NoiseSpec.none(),
) -> OutcomeVector:
    """Outcome vector of all tests for the given defective set.

    Row ``i`` is 1 when it pools at least ``u`` defectives, 0 when it pools
    at most ``ell``, and otherwise takes whatever ``policy`` dictates; the
    noise flips are applied last.  Deterministic given the policy and noise
    seeds (Bernoulli draws are consumed in row order, gap rows only).
    """
    if not 0 <= ell < u:
        raise ValidationError(f"need 0 <= ell < u, got ell={ell} u={u}")
    x_mask = defectives.to_mask(matrix.cols)
    counts = _defective_counts(matrix, x_mask)

    bits: list[int] = []
    gap_rows = [i + 1 for i, c in enumerate(counts) if ell < c < u]
    override_map: dict[int, int] = {}
    if policy.kind == "explicit":
        override_map = dict(policy.overrides)
        gap_set = set(gap_rows)
        for row in override_map:
            if not 1 <= row <= matrix.rows:
                raise ValidationError(f"explicit override row {row} out of range")
            if row not in gap_set:
                raise ValidationError(
                    f"explicit override on row {row}, which is not a gap row "
                    f"for this defective set"
                )
        missing = [r for r in gap_rows if r not in override_map]
        if missing:
            raise ValidationError(
                f"explicit policy must cover every gap row; missing {missing}"
            )
    rng = random.Random(policy.seed) if policy.kind == "bernoulli" else None

    for i, c in enumerate(counts):
        if c >= u:
            bits.append(1)
        elif c <= ell:
            bits.append(0)
        elif policy.kind == "always_positive":
            bits.append(1)
        elif policy.kind == "always_negative":
            bits.append(0)
        elif policy.kind == "bernoulli":
            assert rng is not None
            bits.append(1 if rng.random() < policy.p else 0)
        else:
            bits.append(override_map[i + 1])

    outcome = OutcomeVector(tuple(bits))
    if noise.kind == "none":
        return outcome
    if noise.kind == "flip_rows":
        return outcome.flipped(noise.rows)
    if noise.count > matrix.rows:
        raise ValidationError(
            f"cannot flip {noise.count} rows in a {matrix.rows}-row matrix"
        )
    rows = random.Random(noise.seed).sample(range(1, matrix.rows + 1), noise.count)
    return outcome.flipped(rows)


def check_consistency(
    matrix: BinaryMatrix,
    defectives: ItemSet,
    outcome: OutcomeVector,
    ell: int,
    u: int,
) -> int:
    """Minimal number of flipped outcomes explaining ``outcome``.

    Counts the rows whose outcome contradicts its deterministic value
    (positive with ``>= u`` defectives, negative with ``<= ell``); gap rows
    can always be explained by the gap and contribute zero.
    """
    if not 0 <= ell < u:
        raise ValidationError(f"need 0 <= ell < u, got ell={ell} u={u}")
    if len(outcome) != matrix.rows:
        raise ValidationError(
            f"outcome has {len(outcome)} entries for a {matrix.rows}-row matrix"
        )
    x_mask = defectives.to_mask(matrix.cols)
    errors = 0
    for c, y in zip(_defective_counts(matrix, x_mask), outcome.bits):
        if c >= u and y == 0:
            errors += 1
        elif c <= ell and y == 1:
            errors += 1
    return errors


def t0(matrix: BinaryMatrix, outcome: OutcomeVector, items: ItemSet) -> int:
    """Number of negative pools in which all the given columns appear."""
    if len(items) < 1:
        raise ValidationError("t0 needs at least one column")
    if len(outcome) != matrix.rows:
        raise ValidationError(
            f"outcome has {len(outcome)} entries for a {matrix.rows}-row matrix"
        )
    mask = items.to_mask(matrix.cols)  # validates the range
    rows = ~0
    m = mask
    while m:
        low = m & -m
        rows &= matrix.col_masks[low.bit_length() - 1]
        m ^= low
    return (rows & outcome.negatives_mask).bit_count()
