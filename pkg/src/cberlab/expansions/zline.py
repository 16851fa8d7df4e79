"""Selecting a Z-interval from a symbolically described linear order.

An :class:`OrderSpec` is a finite sequence of blocks, each a copy of the
integers (Z), of the rationals (DENSE) or of a finite chain (FIN). A block
flagged ``repeat`` stands for infinitely many consecutive copies of itself,
all with the same frequency. Window elements are assigned to (block,
position) pairs, which fixes the comparison.

Z-blocks are the cores of the Z-intervals: a core together with any finite
stretch of adjacent FIN blocks is again a copy of Z with the same frequency.
The selector returns the least core attaining the largest frequency,
provided that frequency is positive and attained by finitely many
Z-intervals. Otherwise the input lies outside the classified set.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction


class BlockKind(enum.Enum):
    Z = "Z"
    DENSE = "DENSE"
    FIN = "FIN"


NOT_IN_X = "NOT-IN-X"


@dataclass(frozen=True)
class Block:
    id: str
    kind: BlockKind
    size: int = 0  # for FIN blocks
    repeat: bool = False

    def __post_init__(self):
        if self.kind is BlockKind.FIN and self.size < 1:
            raise ValueError("FIN blocks need a positive size")


@dataclass
class OrderSpec:
    blocks: list
    assignment: dict = field(default_factory=dict)  # element -> (block id, position)

    def __post_init__(self):
        ids = [b.id for b in self.blocks]
        if len(set(ids)) != len(ids):
            raise ValueError("block ids must be unique")
        self._rank = {b.id: i for i, b in enumerate(self.blocks)}
        for x, (bid, p) in self.assignment.items():
            self._check_position(bid, p)

    def _check_position(self, bid, p):
        b = self.blocks[self._rank[bid]]
        if b.kind is BlockKind.FIN and not (0 <= p < b.size and p == int(p)):
            raise ValueError(f"position {p} outside FIN({b.size}) block {bid}")
        if b.kind is BlockKind.Z and p != int(p):
            raise ValueError(f"Z block {bid} needs integer positions")

    def key(self, x):
        bid, p = self.assignment[x]
        return (self._rank[bid], Fraction(p))

    def compare(self, x, y) -> int:
        kx, ky = self.key(x), self.key(y)
        return (kx > ky) - (kx < ky)

    def successor(self, x):
        """Within a Z or FIN block the successor position exists symbolically."""
        bid, p = self.assignment[x]
        b = self.blocks[self._rank[bid]]
        if b.kind is BlockKind.DENSE:
            raise ValueError("dense blocks have no successors")
        if b.kind is BlockKind.FIN and p + 1 >= b.size:
            return None
        return (bid, p + 1)

    def relabel(self, mapping) -> "OrderSpec":
        """Same blocks, elements renamed (for example translated by a group element)."""
        return OrderSpec(list(self.blocks), {mapping(x): v for x, v in self.assignment.items()})

    def to_json(self) -> dict:
        return {"blocks": [{"id": b.id, "kind": b.kind.value, "size": b.size,
                            "repeat": b.repeat} for b in self.blocks]}

    @classmethod
    def from_json(cls, data: dict) -> "OrderSpec":
        blocks = [Block(b["id"], BlockKind(b["kind"]), int(b.get("size", 0)),
                        bool(b.get("repeat", False))) for b in data["blocks"]]
        return cls(blocks)


def zline_select(L: OrderSpec, freqs: dict, tie_tolerance: float = 0.0):
    zblocks = [b for b in L.blocks if b.kind is BlockKind.Z]
    if not zblocks:
        return NOT_IN_X
    missing = [b.id for b in zblocks if b.id not in freqs]
    if missing:
        raise ValueError(f"no frequency for Z-blocks {missing}")
    top = max(freqs[b.id] for b in zblocks)
    if top <= 0:
        return NOT_IN_X
    winners = [b for b in zblocks if freqs[b.id] >= top - tie_tolerance]
    for b in winners:
        if b.repeat or not _finitely_many_extensions(L, b):
            return NOT_IN_X  # maximum attained by infinitely many intervals
    return winners[0].id


def _finitely_many_extensions(L: OrderSpec, core: Block) -> bool:
    """A Z-block absorbs any finite stretch of adjacent FIN blocks and stays a copy of Z,
    with the same frequency. A repeated FIN neighbour gives infinitely many such intervals."""
    i = L.blocks.index(core)
    for step in (-1, 1):
        j = i + step
        while 0 <= j < len(L.blocks) and L.blocks[j].kind is BlockKind.FIN:
            if L.blocks[j].repeat:
                return False
            j += step
    return True
