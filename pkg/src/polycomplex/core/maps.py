"""Spaces of homogeneous linear maps cut out by commuting-square equations.

A map X between graded spaces S and T of offset o is stored blockwise.  The
solver enumerates the unknown blocks, writes each constraint

    opT . X  =  sign * X . opS

as a linear system in the (row-major) entries of the blocks, and returns a
basis of solutions.  This is deliberately the plain brute-force formulation.
"""
from __future__ import annotations

import numpy as np

from .field import ContractError, Field
from .graded import GradedMap, GradedSpace, add_deg
from .linalg import kernel_of


class MapSpace:
    """Coordinates on all homogeneous maps S -> T of a fixed offset."""

    def __init__(self, field: Field, S: GradedSpace, T: GradedSpace, offset):
        self.field = field
        self.S, self.T = S, T
        self.offset = tuple(offset)
        self.slots = {}
        acc = 0
        for d, m in S.items():
            t = T.dim(add_deg(d, self.offset))
            if t:
                self.slots[d] = (acc, t, m)
                acc += t * m
        self.size = acc

    def vector(self, blocks) -> np.ndarray:
        F = self.field
        v = F.zeros(self.size, 1)
        for d, (o, t, m) in self.slots.items():
            b = blocks.get(d) if isinstance(blocks, dict) else blocks.block(d)
            if b is not None:
                v[o:o + t * m, 0] = np.asarray(b).reshape(-1)
        return v

    def blocks(self, v) -> dict:
        v = np.asarray(v).reshape(-1)
        return {d: v[o:o + t * m].reshape(t, m).copy() for d, (o, t, m) in self.slots.items()}

    def graded_map(self, v) -> GradedMap:
        return GradedMap(self.field, self.S, self.T, self.offset, self.blocks(v))


def commuting_system(space: MapSpace, constraints) -> np.ndarray:
    """Rows of the linear system; constraints are (opS, opT, sign) GradedMaps with equal offsets."""
    F = space.field
    rows = []
    for opS, opT, sign in constraints:
        if opS.offset != opT.offset:
            raise ContractError("constraint maps must share an offset")
        a = opS.offset
        for d, m in space.S.items():
            tgt = add_deg(add_deg(d, space.offset), a)
            t = space.T.dim(tgt)
            if t == 0:
                continue
            R = F.zeros(t * m, space.size)
            hit = False
            # opT . X_d
            if d in space.slots:
                o, tt, _ = space.slots[d]
                A = opT.block(add_deg(d, space.offset))
                if not F.is_zero(A):
                    R[:, o:o + tt * m] = F.add(R[:, o:o + tt * m], _kron(F, A, F.eye(m)))
                    hit = True
            # - sign * X_{d+a} . opS_d
            da = add_deg(d, a)
            if da in space.slots:
                o, tt, mm = space.slots[da]
                B = opS.block(d)
                if not F.is_zero(B):
                    blk = _kron(F, F.eye(tt), B.T)
                    blk = F.reduce(-blk) if sign == 1 else blk
                    R[:, o:o + tt * mm] = F.add(R[:, o:o + tt * mm], blk)
                    hit = True
            if hit:
                rows.append(R)
    if not rows:
        return F.zeros(0, space.size)
    return np.concatenate(rows, axis=0)


def _kron(F, A, B):
    if A.size == 0 or B.size == 0:
        return F.zeros(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])
    return F.reduce(np.kron(A, B))


def solve_commuting(space: MapSpace, constraints) -> list:
    """Basis of maps satisfying all constraints, as block dicts."""
    if space.size == 0:
        return []
    K = kernel_of(space.field, commuting_system(space, constraints))
    return [space.blocks(K[:, c]) for c in range(K.shape[1])]
