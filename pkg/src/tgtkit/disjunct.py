"""Disjunct-matrix row-count bounds, randomized construction, verification.

An ``(n, d, r; z]``-disjunct matrix has, for every disjoint pair of column
sets ``(S1 of size d, S2 of size r)``, at least ``z`` rows that are all
ones on ``S2`` and all zeros on ``S1``; it tolerates ``(z - 1) // 2``
erroneous test outcomes.

Three row-count calculators are provided, named after the scheme labels
used throughout the CLI:

* ``rows_thm1`` -- the classical hypergraph bound, linear in ``z``:
  ``z (k/u)^u (k/d)^d [1 + k (1 + ln(n/k + 1))]`` with ``k = d + u``.
* ``rows_thm4`` -- the Chernoff-based randomized construction,
  ``3 alpha / (delta^2 q)`` where ``alpha = k ln(e n / k) + u ln(e k / u)``,
  ``q = (u/k)^u (d/k)^d`` and ``delta`` solves
  ``z delta^2 + 3 alpha delta - 3 alpha = 0``; the ``z`` dependence enters
  only through ``delta``, so the bound grows like ``1 + z/alpha`` instead
  of ``z``.
* ``rows_thm5`` -- a variant of the same construction that is provably
  below ``rows_thm1`` whenever ``z >= 4 / beta^2 + 1`` for
  ``beta = 1 - 2/alpha``; here ``delta`` solves
  ``z delta^2 + 2 alpha delta - 2 alpha = 0`` and the row count is
  ``floor(2 alpha / (delta^2 q)) + 1``.

All calculators evaluate in binary floating point (>= 15 significant
digits), switching to a log-domain mantissa/exponent path once the value
leaves the double range, and return integer row counts.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .errors import FeasibilityError, ValidationError
from .matrix import BinaryMatrix, ItemSet

#: refuse to materialize random matrices above this many entries
GENERATION_ENTRY_BUDGET = 200_000_000

#: default cap on the number of (S1, S2) pairs verify_disjunct may enumerate
VERIFY_PAIR_CAP = 100_000_000

_LN10 = math.log(10.0)


def _require_int(name: str, value: int, minimum: int = 1) -> None:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")


def alpha(k: int, u: int, n: int) -> float:
    """``k ln(e n / k) + u ln(e k / u)`` (e is Euler's constant)."""
    _require_int("k", k)
    _require_int("u", u)
    _require_int("n", n)
    if not u <= k <= n:
        raise ValidationError(f"need 1 <= u <= k <= n, got u={u} k={k} n={n}")
    return k * (1.0 + math.log(n / k)) + u * (1.0 + math.log(k / u))


def delta_thm4(alpha_value: float, z: int) -> float:
    """Positive root of ``z d^2 + 3 alpha d - 3 alpha = 0``; always in (0, 1).

    Evaluated as ``6 alpha / (3 alpha + sqrt(9 alpha^2 + 12 alpha z))``,
    which is the same root written without the cancellation-prone
    subtraction.
    """
    if not alpha_value > 0:
        raise ValidationError(f"alpha must be positive, got {alpha_value}")
    if z < 1:
        raise ValidationError(f"z must be >= 1, got {z}")
    a = float(alpha_value)
    return 6.0 * a / (3.0 * a + math.sqrt(9.0 * a * a + 12.0 * a * z))


def delta_thm5(alpha_value: float, z: int) -> float:
    """Positive root of ``z d^2 + 2 alpha d - 2 alpha = 0``; always in (0, 1)."""
    if not alpha_value > 0:
        raise ValidationError(f"alpha must be positive, got {alpha_value}")
    if z < 1:
        raise ValidationError(f"z must be >= 1, got {z}")
    a = float(alpha_value)
    return 4.0 * a / (2.0 * a + math.sqrt(4.0 * a * a + 8.0 * a * z))


@dataclass(frozen=True)
class BoundParams:
    """Derived quantities shared by the randomized-construction bounds."""

    n: int
    d: int
    u: int
    z: int

    def __post_init__(self) -> None:
        _require_int("n", self.n)
        _require_int("d", self.d)
        _require_int("u", self.u)
        _require_int("z", self.z)
        if self.d + self.u > self.n:
            raise ValidationError(
                f"need d + u <= n, got d={self.d} u={self.u} n={self.n}"
            )

    @property
    def k(self) -> int:
        return self.d + self.u

    @property
    def p(self) -> float:
        """Per-entry one-probability of the random construction, ``u / k``."""
        return self.u / self.k

    @property
    def q(self) -> float:
        """Per-row good-event probability ``(u/k)^u (d/k)^d``."""
        return math.exp(self.ln_q)

    @property
    def ln_q(self) -> float:
        return self.u * math.log(self.u / self.k) + self.d * math.log(self.d / self.k)

    @property
    def alpha(self) -> float:
        return alpha(self.k, self.u, self.n)

    @property
    def beta(self) -> float:
        return 1.0 - 2.0 / self.alpha

    def size_condition_ok(self) -> bool:
        """``(d + u)^2 / u <= n``."""
        return self.k * self.k <= self.n * self.u


def _int_from_ln(ln_value: float, mode: str) -> int:
    """Integer ceiling/floor of ``exp(ln_value)`` for values beyond doubles.

    Uses a 16-digit decimal mantissa, which is all the precision the float
    pipeline carries anyway.
    """
    log10 = ln_value / _LN10
    exp10 = math.floor(log10)
    mantissa = 10.0 ** (log10 - exp10)
    scaled = mantissa * 10**15
    digits = math.ceil(scaled) if mode == "ceil" else math.floor(scaled)
    return digits * 10 ** (exp10 - 15)


def rows_thm1_value(n: int, d: int, u: int, z: int) -> float:
    """Pre-ceiling value of the classical bound (float; may be ``inf``)."""
    params = BoundParams(n, d, u, z)
    k = params.k
    bracket = 1.0 + k * (1.0 + math.log(n / k + 1.0))
    ln_total = (
        math.log(z) + u * math.log(k / u) + d * math.log(k / d) + math.log(bracket)
    )
    if ln_total >= 700.0:
        return math.inf
    return z * (k / u) ** u * (k / d) ** d * bracket


def rows_thm1(n: int, d: int, u: int, z: int) -> int:
    """Row count of the classical ``(n, d, u; z]``-disjunct construction."""
    params = BoundParams(n, d, u, z)
    value = rows_thm1_value(n, d, u, z)
    if math.isfinite(value):
        return math.ceil(value)
    k = params.k
    bracket = 1.0 + k * (1.0 + math.log(n / k + 1.0))
    ln_total = (
        math.log(z) + u * math.log(k / u) + d * math.log(k / d) + math.log(bracket)
    )
    return _int_from_ln(ln_total, "ceil")


def _check_thm4_preconditions(params: BoundParams) -> None:
    if not 2 <= params.u <= params.d:
        raise ValidationError(f"need 2 <= u <= d, got u={params.u} d={params.d}")
    if not params.size_condition_ok():
        lhs = params.k**2 / params.u
        raise ValidationError(
            f"randomized-construction bound needs (d + u)^2 / u <= n, "
            f"but {lhs:g} > {params.n}"
        )


def rows_thm4_value(n: int, d: int, u: int, z: int) -> float:
    """Pre-ceiling value ``3 alpha / (delta^2 q)`` (float; may be ``inf``)."""
    params = BoundParams(n, d, u, z)
    a = params.alpha
    delta = delta_thm4(a, z)
    ln_h = math.log(3.0 * a) - 2.0 * math.log(delta) - params.ln_q
    if ln_h >= 700.0:
        return math.inf
    return 3.0 * a / (delta * delta) * math.exp(-params.ln_q)


def rows_thm4(n: int, d: int, u: int, z: int, strict: bool = True) -> int:
    """Row count of the Chernoff-based randomized construction.

    With ``strict=True`` the stated preconditions ``2 <= u <= d`` and
    ``(d + u)^2 / u <= n`` are enforced; ``strict=False`` evaluates the
    formula anyway (the sampling recipe is well defined regardless, only
    the bound's guarantee needs the size condition).
    """
    params = BoundParams(n, d, u, z)
    if strict:
        _check_thm4_preconditions(params)
    value = rows_thm4_value(n, d, u, z)
    if math.isfinite(value):
        return math.ceil(value)
    a = params.alpha
    delta = delta_thm4(a, z)
    ln_h = math.log(3.0 * a) - 2.0 * math.log(delta) - params.ln_q
    return _int_from_ln(ln_h, "ceil")


def thm5_min_z(n: int, d: int, u: int) -> float:
    """Smallest admissible ``z`` for the strict variant, ``4 / beta^2 + 1``."""
    params = BoundParams(n, d, u, 1)
    beta = params.beta
    if beta <= 0:
        return math.inf
    return 4.0 / (beta * beta) + 1.0


def rows_thm5_value(n: int, d: int, u: int, z: int) -> float:
    """Pre-floor value ``2 alpha / (delta^2 q)`` (float; may be ``inf``)."""
    params = BoundParams(n, d, u, z)
    a = params.alpha
    delta = delta_thm5(a, z)
    ln_h = math.log(2.0 * a) - 2.0 * math.log(delta) - params.ln_q
    if ln_h >= 700.0:
        return math.inf
    return 2.0 * a / (delta * delta) * math.exp(-params.ln_q)


def rows_thm5(n: int, d: int, u: int, z: int, strict: bool = True) -> int:
    """Row count of the strict randomized variant, ``floor(...) + 1``.

    Requires ``z >= 4 / beta^2 + 1``; for such ``z`` the recovered
    ``delta`` provably lands in ``(0, beta]`` and the result is strictly
    below ``rows_thm1`` at the same parameters.
    """
    params = BoundParams(n, d, u, z)
    if strict:
        _check_thm4_preconditions(params)
    z_min = thm5_min_z(n, d, u)
    if z < z_min:
        raise ValidationError(
            f"z={z} is below the admissible threshold 4/beta^2 + 1 = {z_min:.4f}"
        )
    a = params.alpha
    delta = delta_thm5(a, z)
    if delta > params.beta:
        warnings.warn(
            f"recovered delta={delta:.6f} exceeds beta={params.beta:.6f}; "
            f"the strict bound's guarantee does not apply",
            stacklevel=2,
        )
    value = rows_thm5_value(n, d, u, z)
    if math.isfinite(value):
        return math.floor(value) + 1
    ln_h = math.log(2.0 * a) - 2.0 * math.log(delta) - params.ln_q
    return _int_from_ln(ln_h, "floor") + 1


def _sample_row_masks(rng: random.Random, rows: int, n: int, p: float) -> tuple[int, ...]:
    masks = []
    rnd = rng.random
    for _ in range(rows):
        mask = 0
        for j in range(n):
            if rnd() < p:
                mask |= 1 << j
        masks.append(mask)
    return tuple(masks)


def generate(
    n: int,
    d: int,
    u: int,
    z: int,
    seed: int,
    variant: str = "thm4",
    rows: Optional[int] = None,
) -> BinaryMatrix:
    """Sample the randomized construction: each entry is 1 with ``p = u/k``.

    The row count comes from the chosen variant's calculator (or an
    explicit ``rows`` override).  The disjunct property holds with positive
    probability but is *not* verified here; see :func:`generate_verified`.
    Deterministic given ``seed``.
    """
    if variant not in ("thm4", "thm5"):
        raise ValidationError(f"unknown generation variant {variant!r}")
    params = BoundParams(n, d, u, z)
    if rows is None:
        if variant == "thm4":
            rows = rows_thm4(n, d, u, z, strict=False)
        else:
            rows = rows_thm5(n, d, u, z, strict=False)
    _require_int("rows", rows)
    if rows * n > GENERATION_ENTRY_BUDGET:
        raise FeasibilityError(
            f"refusing to sample a {rows} x {n} matrix "
            f"({rows * n} entries > budget {GENERATION_ENTRY_BUDGET})"
        )
    rng = random.Random(seed)
    return BinaryMatrix(rows, n, _sample_row_masks(rng, rows, n, params.p))


@dataclass(frozen=True)
class DisjunctWitness:
    """A disjoint column-set pair covered by fewer than ``z`` rows.

    ``ones_set`` is the size-``r`` set that must see all ones, ``zeros_set``
    the size-``d`` set that must see all zeros.
    """

    ones_set: ItemSet
    zeros_set: ItemSet
    covered_rows: int


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    witness: Optional[DisjunctWitness] = None


def verify_disjunct(
    matrix: BinaryMatrix,
    d: int,
    r: int,
    z: int,
    pair_cap: int = VERIFY_PAIR_CAP,
) -> VerifyResult:
    """Exhaustively check the ``(n, d, r; z]``-disjunct property.

    Enumerates the size-``r`` ones-set in the outer loop and the size-``d``
    zeros-set in the inner loop, both in lexicographic order, so a failure
    witness is always the lexicographically first failing pair.
    """
    _require_int("d", d)
    _require_int("r", r)
    _require_int("z", z)
    n = matrix.cols
    if d + r > n:
        raise ValidationError(f"need d + r <= n, got d={d} r={r} n={n}")
    pairs = math.comb(n, r) * math.comb(n - r, d)
    if pairs > pair_cap:
        raise FeasibilityError(
            f"verification would enumerate {pairs} pairs > cap {pair_cap}"
        )
    cols = matrix.col_masks
    full = (1 << matrix.rows) - 1
    for s2 in combinations(range(n), r):
        ones = full
        for j in s2:
            ones &= cols[j]
        rest = [j for j in range(n) if j not in s2]
        if ones.bit_count() < z:
            # no zeros-set can help; the first one is the lex-first witness
            s1 = tuple(rest[:d])
            covered = ones
            for j in s1:
                covered &= ~cols[j]
            return VerifyResult(
                False,
                DisjunctWitness(
                    ones_set=ItemSet.of(j + 1 for j in s2),
                    zeros_set=ItemSet.of(j + 1 for j in s1),
                    covered_rows=covered.bit_count(),
                ),
            )
        for s1 in combinations(rest, d):
            covered = ones
            for j in s1:
                covered &= ~cols[j]
            if covered.bit_count() < z:
                return VerifyResult(
                    False,
                    DisjunctWitness(
                        ones_set=ItemSet.of(j + 1 for j in s2),
                        zeros_set=ItemSet.of(j + 1 for j in s1),
                        covered_rows=covered.bit_count(),
                    ),
                )
    return VerifyResult(True, None)


@dataclass(frozen=True)
class GenerationResult:
    matrix: BinaryMatrix
    attempts: int


def generate_verified(
    n: int,
    d: int,
    u: int,
    z: int,
    seed: int,
    max_attempts: int = 100,
    rows: Optional[int] = None,
    pair_cap: int = VERIFY_PAIR_CAP,
) -> GenerationResult:
    """Rejection-sample random matrices until one verifies ``(n, d, u; z]``.

    All attempts draw from a single stream seeded once, so the returned
    matrix and the attempt count are reproducible from ``seed`` alone.
    ``rows`` overrides the per-attempt row count (default: the ``thm4``
    calculator's value).
    """
    _require_int("max_attempts", max_attempts)
    params = BoundParams(n, d, u, z)
    if rows is None:
        rows = rows_thm4(n, d, u, z, strict=False)
    _require_int("rows", rows)
    pairs = math.comb(n, u) * math.comb(n - u, d)
    if pairs > pair_cap:
        raise FeasibilityError(
            f"verification would enumerate {pairs} pairs > cap {pair_cap}"
        )
    if rows * n > GENERATION_ENTRY_BUDGET:
        raise FeasibilityError(
            f"refusing to sample a {rows} x {n} matrix "
            f"({rows * n} entries > budget {GENERATION_ENTRY_BUDGET})"
        )
    rng = random.Random(seed)
    for attempt in range(1, max_attempts + 1):
        matrix = BinaryMatrix(rows, n, _sample_row_masks(rng, rows, n, params.p))
        if verify_disjunct(matrix, d, u, z, pair_cap=pair_cap).ok:
            return GenerationResult(matrix, attempt)
    raise FeasibilityError(
        f"no verified ({n}, {d}, {u}; {z}]-disjunct matrix within "
        f"{max_attempts} attempts"
    )
