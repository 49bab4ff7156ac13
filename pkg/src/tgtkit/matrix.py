"""Binary measurement matrices, outcome vectors, and item sets.

Conventions used across the package:

* Items (columns) and tests (rows) are numbered from 1 at every public
  surface, matching the usual presentation of pooling designs.
* Internally a row is a single Python integer used as a bitmask, with bit
  ``j - 1`` standing for item ``j``; a column is likewise a bitmask over
  rows.  All set intersections reduce to ``&`` plus a popcount.

Text formats (used by the CLI and by experiment specs):

* matrix file: first line ``"t n"``, then ``t`` lines of ``n`` characters
  from ``{0, 1}``;
* outcome file: a single line of ``t`` characters from ``{0, 1}``;
* item set: comma-separated 1-based indices, empty string for the empty set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ValidationError


def _mask_from_indices(indices: Iterable[int], size: int, what: str) -> int:
    mask = 0
    for idx in indices:
        if not isinstance(idx, int) or isinstance(idx, bool):
            raise ValidationError(f"{what} index {idx!r} is not an integer")
        if idx < 1 or idx > size:
            raise ValidationError(f"{what} index {idx} out of range 1..{size}")
        bit = 1 << (idx - 1)
        if mask & bit:
            raise ValidationError(f"duplicate {what} index {idx}")
        mask |= bit
    return mask


@dataclass(frozen=True)
class ItemSet:
    """A canonical (sorted, duplicate-free) set of 1-based item indices."""

    members: tuple[int, ...]

    def __post_init__(self) -> None:
        for m in self.members:
            if not isinstance(m, int) or isinstance(m, bool) or m < 1:
                raise ValidationError(f"item index {m!r} must be a positive integer")
        if list(self.members) != sorted(set(self.members)):
            raise ValidationError("item set members must be sorted and distinct")

    @classmethod
    def of(cls, items: Iterable[int]) -> "ItemSet":
        return cls(tuple(sorted(set(items))))

    @classmethod
    def parse(cls, text: str) -> "ItemSet":
        text = text.strip()
        if not text:
            return cls(())
        try:
            items = [int(tok) for tok in text.split(",")]
        except ValueError as exc:
            raise ValidationError(f"cannot parse item set {text!r}: {exc}") from None
        return cls.of(items)

    @classmethod
    def from_mask(cls, mask: int) -> "ItemSet":
        items = []
        j = 1
        while mask:
            if mask & 1:
                items.append(j)
            mask >>= 1
            j += 1
        return cls(tuple(items))

    def to_mask(self, n: int) -> int:
        return _mask_from_indices(self.members, n, "item")

    def format(self) -> str:
        return ",".join(str(m) for m in self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, item: object) -> bool:
        return item in self.members


@dataclass(frozen=True)
class BinaryMatrix:
    """A ``t x n`` 0/1 measurement matrix (rows are tests, columns items)."""

    rows: int
    cols: int
    row_masks: tuple[int, ...]
    col_masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValidationError("matrix dimensions must be positive")
        if len(self.row_masks) != self.rows:
            raise ValidationError(
                f"expected {self.rows} row masks, got {len(self.row_masks)}"
            )
        cols = [0] * self.cols
        for i, mask in enumerate(self.row_masks):
            if mask < 0 or mask >> self.cols:
                raise ValidationError(f"row {i + 1} has bits outside 1..{self.cols}")
            row_bit = 1 << i
            m = mask
            while m:
                low = m & -m
                cols[low.bit_length() - 1] |= row_bit
                m ^= low
        object.__setattr__(self, "col_masks", tuple(cols))

    @classmethod
    def from_bits(cls, bit_rows: Iterable[Iterable[int]]) -> "BinaryMatrix":
        masks = []
        width = None
        for row in bit_rows:
            row = list(row)
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValidationError("ragged rows in matrix")
            mask = 0
            for j, bit in enumerate(row):
                if bit not in (0, 1):
                    raise ValidationError(f"matrix entry {bit!r} is not 0/1")
                if bit:
                    mask |= 1 << j
            masks.append(mask)
        if not masks or not width:
            raise ValidationError("matrix must have at least one row and column")
        return cls(len(masks), width, tuple(masks))

    @classmethod
    def parse(cls, text: str) -> "BinaryMatrix":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValidationError("empty matrix file")
        head = lines[0].split()
        if len(head) != 2:
            raise ValidationError('matrix header must be "t n"')
        try:
            t, n = int(head[0]), int(head[1])
        except ValueError:
            raise ValidationError('matrix header must be "t n" with integers') from None
        if len(lines) - 1 != t:
            raise ValidationError(f"expected {t} matrix rows, found {len(lines) - 1}")
        masks = []
        for i, line in enumerate(lines[1:], start=1):
            if len(line) != n or set(line) - {"0", "1"}:
                raise ValidationError(f"matrix row {i} is not {n} characters of 0/1")
            mask = 0
            for j, ch in enumerate(line):
                if ch == "1":
                    mask |= 1 << j
            masks.append(mask)
        return cls(t, n, tuple(masks))

    @classmethod
    def load(cls, path: str | Path) -> "BinaryMatrix":
        try:
            text = Path(path).read_text(encoding="ascii")
        except OSError as exc:
            raise ValidationError(f"cannot read matrix file {path}: {exc}") from None
        return cls.parse(text)

    def to_text(self) -> str:
        out = [f"{self.rows} {self.cols}"]
        for mask in self.row_masks:
            out.append(
                "".join("1" if mask >> j & 1 else "0" for j in range(self.cols))
            )
        return "\n".join(out) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text(), encoding="ascii")

    def entry(self, row: int, col: int) -> int:
        """Entry at 1-based (row, col)."""
        if not (1 <= row <= self.rows and 1 <= col <= self.cols):
            raise ValidationError(f"entry ({row}, {col}) out of range")
        return self.row_masks[row - 1] >> (col - 1) & 1

    def row_support(self, row: int) -> tuple[int, ...]:
        """1-based items pooled by the given 1-based test."""
        if not 1 <= row <= self.rows:
            raise ValidationError(f"row {row} out of range 1..{self.rows}")
        return ItemSet.from_mask(self.row_masks[row - 1]).members

    def column_weight(self, col: int) -> int:
        if not 1 <= col <= self.cols:
            raise ValidationError(f"column {col} out of range 1..{self.cols}")
        return self.col_masks[col - 1].bit_count()


@dataclass(frozen=True)
class OutcomeVector:
    """Length-``t`` vector of test outcomes (1 positive, 0 negative)."""

    bits: tuple[int, ...]
    negatives_mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.bits:
            raise ValidationError("outcome vector must not be empty")
        neg = 0
        for i, b in enumerate(self.bits):
            if b not in (0, 1):
                raise ValidationError(f"outcome entry {b!r} is not 0/1")
            if b == 0:
                neg |= 1 << i
        object.__setattr__(self, "negatives_mask", neg)

    @classmethod
    def parse(cls, text: str) -> "OutcomeVector":
        line = text.strip()
        if not line or set(line) - {"0", "1"}:
            raise ValidationError("outcome file must be one line of 0/1 characters")
        return cls(tuple(int(ch) for ch in line))

    @classmethod
    def load(cls, path: str | Path) -> "OutcomeVector":
        try:
            text = Path(path).read_text(encoding="ascii")
        except OSError as exc:
            raise ValidationError(f"cannot read outcome file {path}: {exc}") from None
        return cls.parse(text)

    def to_text(self) -> str:
        return "".join(str(b) for b in self.bits) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text(), encoding="ascii")

    def flipped(self, rows: Iterable[int]) -> "OutcomeVector":
        """Copy with the given 1-based rows flipped."""
        bits = list(self.bits)
        for r in sorted(set(rows)):
            if not 1 <= r <= len(bits):
                raise ValidationError(f"flip row {r} out of range 1..{len(bits)}")
            bits[r - 1] ^= 1
        return OutcomeVector(tuple(bits))

    def __len__(self) -> int:
        return len(self.bits)
