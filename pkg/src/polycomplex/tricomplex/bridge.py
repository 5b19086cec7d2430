"""Bridges: bicomplexes to zigzag modules, and zigzag complexes to tricomplexes.

Bicomplex side: the vertex-r, degree-j piece of F(M) is M^{r+j, j}; D1 = d1
and D2 = (-1)^r d2 on vertex r.

Complex side: G places vertex r, internal degree j, homological degree k at
tridegree (r+j, j, k); d1 = D1, d2 = (-1)^r D2 and d3 = (-1)^(r+k) d, r and k
read at the source.  The extra (-1)^r on d3 is what makes d1 and d3
anticommute.  With these choices G(P_r<j>[k]) is Q{r+j, j, -k} on the nose.
"""
from __future__ import annotations

from ..bicomplex import Bicomplex
from ..core import ContractError, GradedSpace
from ..zigzag import AComplex, AModule, ZigzagAlgebra
from .base import Tricomplex


def _neg_if(F, b, odd):
    return F.reduce(-b) if odd else b


def _window(vertices, field, pad=1):
    vs = list(vertices)
    if not vs:
        return ZigzagAlgebra(field, 0, 0)
    return ZigzagAlgebra(field, min(vs) - pad, max(vs) + pad)


def bicomplex_bridge(b: Bicomplex, alg: ZigzagAlgebra | None = None) -> AModule:
    F = b.field
    if b.convention != "anticommute":
        raise ContractError("the bridge expects the anticommuting convention")
    to = lambda d: (d[0] - d[1], d[1])
    alg = alg or _window((d[0] - d[1] for d in b.degrees()), F)
    dims = {to(d): m for d, m in b.space.items()}
    D1 = {to(d): blk for d, blk in b.d1.blocks()}
    D2 = {to(d): _neg_if(F, blk, (d[0] - d[1]) % 2) for d, blk in b.d2.blocks()}
    return AModule(alg, GradedSpace(2, dims), {"D1": D1, "D2": D2})


def bicomplex_bridge_inverse(M: AModule) -> Bicomplex:
    F = M.field
    back = lambda d: (d[0] + d[1], d[1])
    dims = {back(d): m for d, m in M.space.items()}
    d1 = {back(d): blk for d, blk in M.maps["D1"].blocks()}
    d2 = {back(d): _neg_if(F, blk, d[0] % 2) for d, blk in M.maps["D2"].blocks()}
    return Bicomplex.build(F, dims, [d1, d2])


def functor_G(M: AComplex) -> Tricomplex:
    F = M.field
    to = lambda d: (d[0] + d[1], d[1], d[2])
    dims = {to(d): m for d, m in M.space.items()}
    d1 = {to(d): blk for d, blk in M.maps["D1"].blocks()}
    d2 = {to(d): _neg_if(F, blk, d[0] % 2) for d, blk in M.maps["D2"].blocks()}
    d3 = {to(d): _neg_if(F, blk, (d[0] + d[2]) % 2) for d, blk in M.maps["d"].blocks()}
    return Tricomplex.build(F, dims, [d1, d2, d3])


def functor_G_inverse(T: Tricomplex, alg: ZigzagAlgebra | None = None) -> AComplex:
    """Read a tricomplex back as a complex over the zigzag algebra."""
    F = T.field
    back = lambda d: (d[0] - d[1], d[1], d[2])
    alg = alg or _window((d[0] - d[1] for d in T.degrees()), F)
    dims = {back(d): m for d, m in T.space.items()}
    maps = {"D1": {}, "D2": {}, "d": {}}
    for d, blk in T.d1.blocks():
        maps["D1"][back(d)] = blk
    for d, blk in T.d2.blocks():
        e = back(d)
        maps["D2"][e] = _neg_if(F, blk, e[0] % 2)
    for d, blk in T.d3.blocks():
        e = back(d)
        maps["d"][e] = _neg_if(F, blk, (e[0] + e[2]) % 2)
    return AComplex(alg, GradedSpace(3, dims), maps)
