"""Multigraded vector spaces and homogeneous maps between them.

Shift convention: ``shift(V, s)`` moves the piece in degree d to degree
d + s and touches no matrix.  So a module with generator at 0 shifted by s
has its generator at s.
"""
from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .field import ContractError, Field

Degree = tuple


def add_deg(a: Degree, b: Degree) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


def sub_deg(a: Degree, b: Degree) -> Degree:
    return tuple(x - y for x, y in zip(a, b))


def unit(arity: int, axis: int) -> Degree:
    """The unit multidegree e_axis, axis counted from 1."""
    return tuple(1 if t == axis - 1 else 0 for t in range(arity))


class GradedSpace:
    """Finitely supported dimension vector on Z^arity."""

    __slots__ = ("arity", "_dims")

    def __init__(self, arity: int, dims: Mapping[Degree, int] | Iterable = ()):
        if arity < 1:
            raise ContractError("arity must be positive")
        items = dims.items() if isinstance(dims, Mapping) else dims
        clean = {}
        for d, n in items:
            d = tuple(int(x) for x in d)
            if len(d) != arity:
                raise ContractError(f"degree {d} does not have arity {arity}")
            if n < 0:
                raise ContractError(f"negative dimension at {d}")
            if n:
                clean[d] = clean.get(d, 0) + int(n)
        self.arity = arity
        self._dims = dict(sorted(clean.items()))

    def dim(self, d: Degree) -> int:
        return self._dims.get(tuple(d), 0)

    def degrees(self):
        return list(self._dims)

    def items(self):
        return self._dims.items()

    @property
    def dims(self) -> dict:
        return dict(self._dims)

    @property
    def total(self) -> int:
        return sum(self._dims.values())

    def is_zero(self) -> bool:
        return not self._dims

    def shift(self, s: Degree) -> "GradedSpace":
        return GradedSpace(self.arity, {add_deg(d, s): n for d, n in self._dims.items()})

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.arity == other.arity and self._dims == other._dims

    def __hash__(self):
        return hash((self.arity, tuple(self._dims.items())))

    def __repr__(self):
        return f"GradedSpace({self.arity}, {self._dims})"

    def bounding_box(self):
        if not self._dims:
            return None
        ds = list(self._dims)
        lo = tuple(min(d[t] for d in ds) for t in range(self.arity))
        hi = tuple(max(d[t] for d in ds) for t in range(self.arity))
        return lo, hi


def direct_sum_spaces(*spaces: GradedSpace) -> GradedSpace:
    arity = spaces[0].arity
    acc = {}
    for V in spaces:
        if V.arity != arity:
            raise ContractError("direct sum of spaces with different arity")
        for d, n in V.items():
            acc[d] = acc.get(d, 0) + n
    return GradedSpace(arity, acc)


class GradedMap:
    """Homogeneous map: block at d sends source(d) to target(d + offset)."""

    __slots__ = ("field", "source", "target", "offset", "_blocks")

    def __init__(self, field: Field, source: GradedSpace, target: GradedSpace,
                 offset: Degree, blocks: Mapping[Degree, np.ndarray] | None = None, check: bool = True):
        offset = tuple(offset)
        if source.arity != target.arity or len(offset) != source.arity:
            raise ContractError("arity mismatch in graded map")
        self.field = field
        self.source = source
        self.target = target
        self.offset = offset
        stored = {}
        for d, b in (blocks or {}).items():
            d = tuple(d)
            m, n = target.dim(add_deg(d, offset)), source.dim(d)
            if check and b.shape != (m, n):
                raise ContractError(f"block at {d} has shape {b.shape}, expected {(m, n)}")
            if m and n and not field.is_zero(b):
                b = np.array(b)
                b.setflags(write=False)
                stored[d] = b
        self._blocks = dict(sorted(stored.items()))

    def block(self, d: Degree) -> np.ndarray:
        d = tuple(d)
        b = self._blocks.get(d)
        if b is not None:
            return b
        return self.field.zeros(self.target.dim(add_deg(d, self.offset)), self.source.dim(d))

    def blocks(self):
        return self._blocks.items()

    def is_zero(self) -> bool:
        return not self._blocks

    def apply(self, d: Degree, v: np.ndarray) -> np.ndarray:
        return self.field.matmul(self.block(d), v)

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        if (self.field, self.source, self.target, self.offset) != (other.field, other.source, other.target, other.offset):
            return False
        keys = set(self._blocks) | set(other._blocks)
        return all(self.field.equal(self.block(d), other.block(d)) for d in keys)

    def __repr__(self):
        return f"GradedMap(offset={self.offset}, blocks={len(self._blocks)})"


def zero_map(field, source, target, offset) -> GradedMap:
    return GradedMap(field, source, target, offset, {})


def identity(field: Field, V: GradedSpace) -> GradedMap:
    return GradedMap(field, V, V, (0,) * V.arity, {d: field.eye(n) for d, n in V.items()})


def compose(f: GradedMap, g: GradedMap) -> GradedMap:
    """f after g."""
    if g.target != f.source:
        raise ContractError("compose: g.target differs from f.source")
    if f.field != g.field:
        raise ContractError("compose: mixed fields")
    F = f.field
    blocks = {}
    for d, b in g.blocks():
        mid = add_deg(d, g.offset)
        fb = f._blocks.get(mid)
        if fb is not None:
            blocks[d] = F.matmul(fb, b)
    return GradedMap(F, g.source, f.target, add_deg(f.offset, g.offset), blocks)


def add(f: GradedMap, g: GradedMap) -> GradedMap:
    if (f.source, f.target, f.offset) != (g.source, g.target, g.offset) or f.field != g.field:
        raise ContractError("add: incompatible maps")
    keys = set(d for d, _ in f.blocks()) | set(d for d, _ in g.blocks())
    return GradedMap(f.field, f.source, f.target, f.offset,
                     {d: f.field.add(f.block(d), g.block(d)) for d in keys})


def scale(f: GradedMap, c) -> GradedMap:
    return GradedMap(f.field, f.source, f.target, f.offset,
                     {d: f.field.mul_scalar(b, c) for d, b in f.blocks()})


def shift(x, s: Degree):
    """Shift a GradedSpace or a GradedMap (both ends) by s."""
    s = tuple(s)
    if isinstance(x, GradedSpace):
        return x.shift(s)
    if isinstance(x, GradedMap):
        return GradedMap(x.field, x.source.shift(s), x.target.shift(s), x.offset,
                         {add_deg(d, s): b for d, b in x.blocks()}, check=False)
    raise ContractError(f"cannot shift {type(x).__name__}")


def block_diag(F: Field, mats) -> np.ndarray:
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = F.zeros(rows, cols)
    r = c = 0
    for m in mats:
        out[r:r + m.shape[0], c:c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def direct_sum(*maps: GradedMap) -> GradedMap:
    """Block-diagonal sum; summand bases are stacked in argument order."""
    F = maps[0].field
    off = maps[0].offset
    if any(m.offset != off or m.field != F for m in maps):
        raise ContractError("direct_sum: offsets or fields differ")
    src = direct_sum_spaces(*(m.source for m in maps))
    tgt = direct_sum_spaces(*(m.target for m in maps))
    blocks = {d: block_diag(F, [m.block(d) for m in maps]) for d in src.degrees()}
    return GradedMap(F, src, tgt, off, blocks)
