"""The functors U_r, the maps in_r and out_r, d3-cones and the braid functors.

U_r(M) is Q (x) (columns of M on the line i - j = r, with only d3 kept),
computed with the Koszul tensor rule, so a summand q (x) m sits at
deg(q) + deg(m).  Inside a degree the summands are ordered by (deg q, deg m).
"""
from __future__ import annotations

from ..core import add_deg
from ..exterior import Morphism, direct_sum, tensor_layout
from .base import Q, Tricomplex, koszul_shift, restrict_line, tensor

Q_DEG = {(0, 0, 0): "w", (1, 0, 0): "d1w", (0, 1, 0): "d2w", (1, 1, 0): "top"}

# Signs of the four terms of out_r, in the order
#   w (x) d1d2 m,  d1d2 w (x) m,  d1 w (x) d2 m,  d2 w (x) d1 m.
# Kept as a module-level table so tests can corrupt one entry at a time.
OUT_SIGNS = [1, 1, 1, -1]


def functor_U(r: int, M: Tricomplex) -> Tricomplex:
    return tensor(Q(M.field), restrict_line(M, r))


def _layout(r, M):
    line = restrict_line(M, r)
    return tensor_layout(Q(M.field).space, line.space)


def _q_word(M, q, d):
    if q == (0, 0, 0):
        return M.field.eye(M.dim(d))
    if q == (1, 0, 0):
        return M.op(1, d)
    if q == (0, 1, 0):
        return M.op(2, d)
    return M.word((1, 2), d)


def nat_in(r: int, M: Tricomplex, U: Tricomplex | None = None) -> Morphism:
    """U_r(M) -> M, q (x) m |-> q.m."""
    F = M.field
    U = functor_U(r, M) if U is None else U
    lay = _layout(r, M)
    blocks = {}
    for D, parts in lay.items():
        B = F.zeros(M.dim(D), U.dim(D))
        for dq, dn, o, sz in parts:
            if M.dim(D):
                B[:, o:o + sz] = _q_word(M, dq, dn)
        blocks[D] = B
    return Morphism.from_blocks(U, M, blocks)


def nat_out(r: int, M: Tricomplex, U: Tricomplex | None = None) -> Morphism:
    """M -> U_r(M){-1,-1,0}; a vector at (i,j,k) lands in U_r(M) at (i+1,j+1,k)."""
    F = M.field
    U = functor_U(r, M) if U is None else U
    target = U.shift((-1, -1, 0))
    lay = _layout(r, M)
    s0, s1, s2, s3 = OUT_SIGNS
    blocks = {}
    for D, m in M.space.items():
        E = add_deg(D, (1, 1, 0))
        parts = {(dq, dn): (o, sz) for dq, dn, o, sz in lay.get(E, [])}
        if not parts:
            continue
        B = F.zeros(U.dim(E), m)
        i, j, _ = D
        sgn = -1 if (i + j) % 2 else 1

        def put(dq, dn, mat, c):
            o, sz = parts[(dq, dn)]
            B[o:o + sz, :] = F.add(B[o:o + sz, :], F.mul_scalar(mat, sgn * c))

        if i - j == r:
            if ((0, 0, 0), E) in parts:
                d12 = F.matmul(M.op(1, add_deg(D, (0, 1, 0))), M.op(2, D))
                put((0, 0, 0), E, d12, s0)
            put((1, 1, 0), D, F.eye(m), -s1)
        elif i - j == r + 1:
            dn = add_deg(D, (0, 1, 0))
            if ((1, 0, 0), dn) in parts:
                put((1, 0, 0), dn, M.op(2, D), s2)
        elif i - j == r - 1:
            dn = add_deg(D, (1, 0, 0))
            if ((0, 1, 0), dn) in parts:
                put((0, 1, 0), dn, M.op(1, D), s3)
        blocks[D] = B
    return Morphism.from_blocks(M, target, blocks)


def d3_cone(f: Morphism) -> Tricomplex:
    """C(f) = M{0,0,-1} + N with d3(m, n) = (-d3 m, f(m) + d3 n).

    The M part is the Koszul shift, so all three differentials change sign
    there; with only d3 negated the cone would fail d1 d3 + d3 d1 = 0.
    """
    M, N = f.source, f.target
    F = M.field
    Ms = koszul_shift(M, (0, 0, -1))
    C = direct_sum(Ms, N)
    d3 = dict(C.diffs[2].blocks())
    for D in C.degrees():
        E = add_deg(D, (0, 0, 1))
        nm, ne = Ms.dim(D), N.dim(E)
        if nm == 0 or ne == 0:
            continue
        B = d3.get(D)
        B = F.zeros(C.dim(E), C.dim(D)) if B is None else B.copy()
        off = Ms.dim(E)
        B[off:off + ne, :nm] = F.add(B[off:off + ne, :nm], f.block(E))
        d3[D] = B
    blocks = [dict(C.diffs[0].blocks()), dict(C.diffs[1].blocks()), d3]
    return C.rebuild(C.space, blocks)


def braid_R(r: int, M: Tricomplex) -> Tricomplex:
    return d3_cone(nat_in(r, M))


def braid_Rprime(r: int, M: Tricomplex) -> Tricomplex:
    return d3_cone(nat_out(r, M)).shift((0, 0, 1))


def apply_word(word, M: Tricomplex) -> Tricomplex:
    """Letters act left to right; a negative letter applies R'."""
    from ..zigzag import parse_word
    for r, sign in parse_word(word):
        M = braid_R(r, M) if sign > 0 else braid_Rprime(r, M)
    return M
