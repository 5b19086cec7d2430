"""Seeded random modules over exterior algebras.

A random module is built as a quotient of a free module: pick generators in
a support box, kill a few random elements, kill everything that leaves the
box, then kill more random elements until every degree has dimension at most
max_dim.  Finally each degree gets a random change of basis.  Every output
satisfies the relations by construction, and nothing here shares code with
the decomposition or the oracles.
"""
from __future__ import annotations

import numpy as np

from .core import Field, add_deg, inverse_of
from .exterior import direct_sum, e_of, free_module, quotient, subsets, zero_module


def _in_box(d, lo, hi):
    return all(l <= x <= h for x, l, h in zip(d, lo, hi))


def _random_invertible(F: Field, rng, n):
    while True:
        A = F.random(rng, n, n)
        if inverse_of(F, A) is not None:
            return A


def conjugate(M, rng):
    """Random change of basis in every degree."""
    F = M.field
    P = {d: _random_invertible(F, rng, m) for d, m in M.space.items()}
    Pinv = {d: inverse_of(F, A) for d, A in P.items()}
    blocks = []
    for r in range(1, M.arity + 1):
        br = {}
        for d, B in M.diffs[r - 1].blocks():
            e = add_deg(d, e_of(M.arity, (r,)))
            br[d] = F.matmul(Pinv[e], F.matmul(B, P[d]))
        blocks.append(br)
    return M.rebuild(M.space, blocks)


def random_module(cls, F: Field, rng, lo, hi, max_dim=3, n_gens=None, n_rels=None, conj=True, **kw):
    n = len(lo)
    box = [d for d in np.ndindex(*[h - l + 1 for l, h in zip(lo, hi)])]
    box = [tuple(int(x) + l for x, l in zip(d, lo)) for d in box]
    if n_gens is None:
        n_gens = int(rng.integers(1, 4))
    if n_gens == 0:
        return zero_module(cls, F, n, **kw)
    gdeg = [box[int(rng.integers(len(box)))] for _ in range(n_gens)]
    Fr = direct_sum(*[free_module(cls, F, g, **kw) for g in gdeg])
    kill = {}

    def add_kill(d, v):
        # v in Fr_d; add the span of all words applied to v
        for T in subsets(n):
            e = add_deg(d, e_of(n, T))
            if Fr.dim(e) == 0:
                continue
            w = F.matmul(Fr.word(T, d), v)
            kill[e] = w if e not in kill else np.concatenate([kill[e], w], axis=1)

    for d, m in Fr.space.items():
        if not _in_box(d, lo, hi):
            kill[d] = F.eye(m)
    if n_rels is None:
        n_rels = int(rng.integers(0, n_gens + 2))
    inside = [d for d in Fr.degrees() if _in_box(d, lo, hi)]
    for _ in range(n_rels):
        d = inside[int(rng.integers(len(inside)))]
        add_kill(d, F.random(rng, Fr.dim(d), 1))
    while True:
        Q, reps, _ = quotient(Fr, kill)
        big = [d for d, m in Q.space.items() if m > max_dim]
        if not big:
            break
        d = big[0]
        v = F.matmul(reps[d], F.random(rng, Q.dim(d), 1))
        add_kill(d, v)
    return conjugate(Q, rng) if conj else Q


def random_projective_complex(alg, rng, n_terms=3, r_range=(-1, 1), j_range=(-1, 1), k_range=(-1, 1)):
    """Bounded complex of projectives over the zigzag window ``alg``.

    Built as iterated cones: each step picks a shifted P_r and a random chain
    map from it into the complex so far, then takes the cone.
    """
    from .zigzag import AComplex, chain_maps, cone, projective

    def pick(lo_hi):
        return int(rng.integers(lo_hi[0], lo_hi[1] + 1))

    def term():
        P = projective(alg, pick(r_range), 0)
        return AComplex.from_module(P).shift(pick(j_range), pick(k_range))

    F = alg.field
    Y = term()
    for _ in range(n_terms - 1):
        X = term()
        basis = chain_maps(X, Y)
        f = {}
        for b in basis:
            c = F.random_scalar(rng)
            for d, blk in b.items():
                f[d] = F.add(f.get(d, F.zeros(*blk.shape)), F.mul_scalar(blk, c))
        Y = cone(X, Y, f)
    return Y
