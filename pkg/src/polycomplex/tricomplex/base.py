"""Tricomplexes: trigraded modules over the exterior algebra on d1, d2, d3.

Shifts follow (M{s})_d = M_{d-s}, so M{s} moves every vector up by s.  The
standard module Q has basis w, d1 w, d2 w, d2 d1 w at (0,0,0), (1,0,0),
(0,1,0), (1,1,0) with d3 = 0; the top basis vector is d2 d1 w, so
d1(d2 w) = -(d2 d1 w).
"""
from __future__ import annotations

from ..core import ContractError, Field, add_deg
from ..exterior import (ExtModule, Morphism, direct_sum, free_module, quotient, simple_module,
                        tensor as _tensor, zero_module)

ORIGIN = (0, 0, 0)
TOP = (1, 1, 1)


class Tricomplex(ExtModule):
    """Trigraded space with three pairwise anticommuting square-zero differentials."""

    kind = "tricomplex"

    def __init__(self, field, space, diffs, check=True):
        if space.arity != 3:
            raise ContractError("a tricomplex has arity 3")
        super().__init__(field, space, diffs, check=check)

    @property
    def d1(self):
        return self.diffs[0]

    @property
    def d2(self):
        return self.diffs[1]

    @property
    def d3(self):
        return self.diffs[2]


TriMorphism = Morphism


def zero(F: Field) -> Tricomplex:
    return zero_module(Tricomplex, F, 3)


def simple(F: Field, at=ORIGIN) -> Tricomplex:
    return simple_module(Tricomplex, F, at)


def free(F: Field, at=ORIGIN) -> Tricomplex:
    """Lambda_3 with its generator at ``at`` (8-dimensional)."""
    return free_module(Tricomplex, F, at)


def Q(F: Field, at=ORIGIN) -> Tricomplex:
    """Q{at}: the quotient of Lambda_3 by the ideal of d3."""
    at = tuple(at)
    one = F.array([[1]], shape=(1, 1))
    neg = F.array([[-1]], shape=(1, 1))
    dims = {at: 1, add_deg(at, (1, 0, 0)): 1, add_deg(at, (0, 1, 0)): 1, add_deg(at, (1, 1, 0)): 1}
    d1 = {at: one, add_deg(at, (0, 1, 0)): neg}
    d2 = {at: one, add_deg(at, (1, 0, 0)): one}
    return Tricomplex.build(F, dims, [d1, d2, {}])


def lambda_hat(F: Field) -> Tricomplex:
    """Lambda_3 modulo its top, generator at (-1,-1,-1): the 7-dimensional shift object."""
    L = free(F, (-1, -1, -1))
    top = F.array([[1]], shape=(1, 1))
    Qt, _, _ = quotient(L, {ORIGIN: top})
    return Qt


def tensor(M: Tricomplex, N: Tricomplex) -> Tricomplex:
    """Koszul tensor product: d_r(m (x) n) = d_r m (x) n + (-1)^|m| m (x) d_r n."""
    return _tensor(M, N, like=M)


def restrict_partial(M: Tricomplex, i: int, j: int) -> Tricomplex:
    """The column at (i, j) keeping only d3; it stays at its tridegrees."""
    dims = {d: m for d, m in M.space.items() if d[0] == i and d[1] == j}
    d3 = {d: M.op(3, d) for d in dims}
    return M.rebuild(dims, [{}, {}, d3])


def restrict_line(M: Tricomplex, r: int) -> Tricomplex:
    """Sum of the columns M_{i,j} with i - j = r, keeping only d3."""
    dims = {d: m for d, m in M.space.items() if d[0] - d[1] == r}
    d3 = {d: M.op(3, d) for d in dims}
    return M.rebuild(dims, [{}, {}, d3])


def permute_axes(M: Tricomplex, perm) -> Tricomplex:
    """Relabel the axes; new axis k is old axis perm[k] (0-based)."""
    return M.permute_axes(perm)


def koszul_shift(M: Tricomplex, s) -> Tricomplex:
    """k{s} (x) M: moved by s, and every differential negated when s is odd."""
    s = tuple(s)
    F = M.field
    odd = sum(s) % 2 == 1
    blocks = [{add_deg(d, s): (F.reduce(-b) if odd else b) for d, b in D.blocks()} for D in M.diffs]
    return M.rebuild(M.space.shift(s), blocks, check=False)


def direct_sum_tri(*mods) -> Tricomplex:
    mods = [m for m in mods]
    if not mods:
        raise ContractError("empty direct sum")
    return direct_sum(*mods)
