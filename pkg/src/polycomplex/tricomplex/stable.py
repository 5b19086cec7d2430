"""The stable category: free splitting, stable Homs, the isomorphism test,
shift and cone.

A map factors through a projective exactly when it is d1 d2 d3 applied (in
the inner-Hom action) to some linear map of degree -(1,1,1).  The inner Hom
action is  d_r f = d_r o f - (-1)^|f| f o d_r  with |f| the total degree.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import add_deg, rank_of
from ..core.maps import MapSpace
from ..exterior import (FreeSplit, IsoResult, Morphism, direct_sum, find_isomorphism, hom_basis,
                        presentation, quotient, split_free, tensor_layout, verify_iso)
from .base import ORIGIN, Q, Tricomplex, free, lambda_hat, tensor

E = {1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1)}


def strip_free(M: Tricomplex) -> FreeSplit:
    """Split off every free summand; .residue has none left, .counts says where they were."""
    return split_free(M)


def free_part_count(M: Tricomplex) -> int:
    return sum(split_free(M).counts.values())


def hom_dim(M, N) -> int:
    return len(hom_basis(M, N))


def _action_matrix(M, N, r, src: MapSpace, dst: MapSpace):
    """Matrix of f |-> d_r f from maps of offset src.offset to offset src.offset + e_r."""
    F = M.field
    sgn = -1 if sum(src.offset) % 2 else 1
    A = F.zeros(dst.size, src.size)
    for d, (o, t, m) in dst.slots.items():
        # (d_r f)_d = N.d_r(d + o_src) f_d  -  sgn * f_{d + e_r} M.d_r(d)
        rows = slice(o, o + t * m)
        if d in src.slots:
            so, st, sm = src.slots[d]
            B = N.op(r, add_deg(d, src.offset))
            if B.size and not F.is_zero(B):
                A[rows, so:so + st * sm] = F.add(A[rows, so:so + st * sm], F.reduce(np.kron(B, F.eye(sm))))
        dr = add_deg(d, E[r])
        if dr in src.slots:
            so, st, sm = src.slots[dr]
            B = M.op(r, d)
            if B.size and not F.is_zero(B):
                blk = F.reduce(np.kron(F.eye(st), B.T))
                A[rows, so:so + st * sm] = F.add(A[rows, so:so + st * sm], F.reduce(blk * (-sgn)))
    return A


def null_rank(M, N) -> int:
    """Dimension of the degree-0 maps M -> N that factor through a projective."""
    F = M.field
    o3 = (-1, -1, -1)
    s3 = MapSpace(F, M.space, N.space, o3)
    if s3.size == 0:
        return 0
    s2 = MapSpace(F, M.space, N.space, add_deg(o3, E[3]))
    s1 = MapSpace(F, M.space, N.space, add_deg(s2.offset, E[2]))
    s0 = MapSpace(F, M.space, N.space, ORIGIN)
    A3 = _action_matrix(M, N, 3, s3, s2)
    A2 = _action_matrix(M, N, 2, s2, s1)
    A1 = _action_matrix(M, N, 1, s1, s0)
    P = F.matmul(A1, F.matmul(A2, A3))
    return rank_of(F, P) if P.size else 0


def stable_hom(M: Tricomplex, N: Tricomplex, shift=ORIGIN) -> int:
    """dim Hom(M, N{shift}) in the stable category."""
    Ns = N.shift(tuple(shift))
    if M.is_zero() or Ns.is_zero():
        return 0
    return hom_dim(M, Ns) - null_rank(M, Ns)


def stable_hom_via_cover(M: Tricomplex, N: Tricomplex, shift=ORIGIN) -> int:
    """Same number, computed by composing with a projective cover of N{shift}."""
    F = M.field
    Ns = N.shift(tuple(shift))
    if M.is_zero() or Ns.is_zero():
        return 0
    pres = presentation(Ns)
    P = direct_sum(*[free(F, d) for d, _ in pres.gens])
    to_cover = hom_basis(M, P)
    n_maps = hom_dim(M, Ns)
    if not to_cover:
        return n_maps
    cols = []
    for g in to_cover:
        parts = []
        for d, m in M.space.items():
            if Ns.dim(d) == 0:
                continue
            parts.append(F.matmul(pres.phi[d], g.block(d)).reshape(-1))
        cols.append(np.concatenate(parts) if parts else F.zeros(0, 1).reshape(-1))
    mat = np.stack(cols, axis=1)
    return n_maps - (rank_of(F, mat) if mat.size else 0)


@dataclass
class StableIso:
    outcome: str
    result: IsoResult
    left: FreeSplit
    right: FreeSplit

    def __bool__(self):
        return self.outcome == "true"

    @property
    def witness(self):
        return self.result.witness

    @property
    def reason(self):
        return self.result.reason

    def verified(self) -> bool:
        return self.outcome == "true" and verify_iso(self.result)


def stable_iso(M: Tricomplex, N: Tricomplex, seed: int = 0, trials: int = 12, grid_budget: int = 4096) -> StableIso:
    """true / false / unknown; on true the witness is an isomorphism of the free-stripped residues."""
    a, b = split_free(M), split_free(N)
    res = find_isomorphism(a.residue, b.residue, seed=seed, trials=trials, grid_budget=grid_budget)
    return StableIso(res.outcome, res, a, b)


def module_iso(M, N, seed: int = 0, trials: int = 12, grid_budget: int = 4096) -> IsoResult:
    """Isomorphism in the module category itself (no stripping)."""
    return find_isomorphism(M, N, seed=seed, trials=trials, grid_budget=grid_budget)


def stable_shift(M: Tricomplex) -> Tricomplex:
    """Lambda-hat (x) M."""
    return tensor(lambda_hat(M.field), M)


def free_envelope(M: Tricomplex):
    """(Lambda_3{-1,-1,-1} (x) M, blocks of the embedding m |-> top (x) m)."""
    F = M.field
    L = free(F, (-1, -1, -1))
    T = tensor(L, M)
    lay = tensor_layout(L.space, M.space)
    emb = {}
    for d, m in M.space.items():
        B = F.zeros(T.dim(d), m)
        for dq, dn, o, sz in lay[d]:
            if dq == ORIGIN and dn == d:
                B[o:o + sz, :] = F.eye(m)
        emb[d] = B
    return T, emb


def stable_cone(f: Morphism) -> Tricomplex:
    """Cokernel of M -> N + (free envelope of M), m |-> (f(m), top (x) m)."""
    M, N = f.source, f.target
    T, emb = free_envelope(M)
    S = direct_sum(N, T)
    sub = {}
    for d, m in M.space.items():
        sub[d] = np.concatenate([f.block(d), emb[d]], axis=0)
    C, _, _ = quotient(S, sub)
    return C


def fingerprint(M: Tricomplex) -> dict:
    """Graded dims of the free-stripped residue and stable Homs from each Q{a} it could see."""
    R = split_free(M).residue
    probes = {}
    for a in R.degrees():
        n = stable_hom(Q(M.field, a), R)
        if n:
            probes[a] = n
    return {"dims": dict(sorted(R.space.dims.items())), "probes": dict(sorted(probes.items()))}
