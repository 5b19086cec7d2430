"""Graded modules over an exterior algebra on generators d_1..d_n.

A bicomplex is the case n = 2 and a tricomplex the case n = 3.  The
generator d_r has degree e_r.  Everything here is generic in n: relation
checks, free modules, direct sums, the Koszul tensor product, sub and
quotient modules, splitting of free summands, Hom spaces and the
isomorphism search.

Words in the generators: for a subset T (a sorted tuple) ``d_T`` means
"apply the generators in T in increasing order", so for T = (1, 2) it is
d_2 d_1.  This matches the stored top vector d_2 d_1 w of the square and Q.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .core import (ContractError, Field, GradedMap, GradedSpace, add_deg, block_diag,
                   complement_of, image_of, inverse_of, kernel_of, left_inverse, rank_of,
                   solve_of, sub_deg, unit)


class RelationError(ContractError):
    """A module relation fails; ``degree`` names where."""

    def __init__(self, message, degree=None):
        super().__init__(message if degree is None else f"{message} at {degree}")
        self.degree = degree


def application_sign(seq) -> int:
    """Sign relating the composite applying seq in order to the sorted word.

    Returns 0 when an index repeats (the composite vanishes).
    """
    if len(set(seq)) != len(seq):
        return 0
    inv = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return -1 if inv % 2 else 1


def subsets(n: int):
    for k in range(n + 1):
        yield from itertools.combinations(range(1, n + 1), k)


def e_of(n: int, T) -> tuple:
    d = [0] * n
    for t in T:
        d[t - 1] += 1
    return tuple(d)


def parity(d) -> int:
    return sum(d) % 2


class ExtModule:
    """Finite-dimensional graded module over the exterior algebra on n generators."""

    n = 0
    kind = "module"

    def __init__(self, field: Field, space: GradedSpace, diffs, check: bool = True):
        diffs = tuple(diffs)
        if space.arity != len(diffs):
            raise ContractError(f"{len(diffs)} differentials for arity {space.arity}")
        for r, D in enumerate(diffs, start=1):
            if D.source != space or D.target != space:
                raise ContractError(f"d{r} is not an endomorphism of the space")
            if D.offset != unit(space.arity, r):
                raise ContractError(f"d{r} has offset {D.offset}, expected {unit(space.arity, r)}")
            if D.field != field:
                raise ContractError("mixed fields")
        self.field = field
        self.space = space
        self.diffs = diffs
        self._words = {}
        if check:
            self.validate()

    # construction

    @classmethod
    def build(cls, field: Field, dims, blocks, check: bool = True, **kw):
        """dims: degree -> dim; blocks: list (one per generator) of degree -> matrix."""
        n = len(blocks)
        space = dims if isinstance(dims, GradedSpace) else GradedSpace(n, dims)
        diffs = [GradedMap(field, space, space, unit(n, r + 1), b) for r, b in enumerate(blocks)]
        return cls(field, space, diffs, check=check, **kw)

    def rebuild(self, dims, blocks, check: bool = True):
        """Same class (and options) with new data."""
        return type(self).build(self.field, dims, blocks, check=check, **self._options())

    def _options(self) -> dict:
        return {}

    # access

    @property
    def arity(self) -> int:
        return self.space.arity

    def dim(self, d) -> int:
        return self.space.dim(d)

    def degrees(self):
        return self.space.degrees()

    @property
    def total_dim(self) -> int:
        return self.space.total

    def is_zero(self) -> bool:
        return self.space.is_zero()

    def op(self, r: int, d) -> np.ndarray:
        return self.diffs[r - 1].block(d)

    def word(self, T, d) -> np.ndarray:
        """Matrix of d_T on degree d (generators applied in increasing order)."""
        key = (tuple(T), tuple(d))
        w = self._words.get(key)
        if w is None:
            F = self.field
            d = tuple(d)
            w = F.eye(self.dim(d))
            for t in T:
                w = F.matmul(self.op(t, d), w)
                d = add_deg(d, unit(self.arity, t))
            self._words[key] = w
        return w

    def blocks_list(self):
        return [dict(D.blocks()) for D in self.diffs]

    # relations

    def validate(self):
        F = self.field
        n = self.arity
        for d in self.degrees():
            for r in range(1, n + 1):
                e = add_deg(d, unit(n, r))
                sq = F.matmul(self.op(r, e), self.op(r, d))
                if not F.is_zero(sq):
                    raise RelationError(f"d{r}^2 != 0", d)
                for s in range(r + 1, n + 1):
                    f = add_deg(d, unit(n, s))
                    a = F.matmul(self.op(s, e), self.op(r, d))
                    b = F.matmul(self.op(r, f), self.op(s, d))
                    if not F.is_zero(self._combine(a, b, d, r, s)):
                        raise RelationError(f"{self._relation_name(r, s)} fails", d)
        return self

    def _combine(self, a, b, d, r, s):
        return self.field.add(a, b)

    def _relation_name(self, r, s):
        return f"d{r}d{s} + d{s}d{r} = 0"

    # comparison

    def __eq__(self, other):
        if not isinstance(other, ExtModule):
            return NotImplemented
        return (type(self) is type(other) and self.field == other.field and self.space == other.space
                and all(a == b for a, b in zip(self.diffs, other.diffs)) and self._options() == other._options())

    def __hash__(self):
        return hash(self.space)

    def __repr__(self):
        return f"{type(self).__name__}(dims={self.space.dims})"

    # simple constructions

    def shift(self, s):
        s = tuple(s)
        dims = self.space.shift(s)
        blocks = [{add_deg(d, s): b for d, b in D.blocks()} for D in self.diffs]
        return self.rebuild(dims, blocks, check=False)

    def permute_axes(self, perm):
        """Relabel axes: new axis k is old axis perm[k] (0-based)."""
        perm = tuple(perm)
        if sorted(perm) != list(range(self.arity)):
            raise ContractError(f"{perm} is not a permutation")
        def mv(d):
            return tuple(d[perm[k]] for k in range(self.arity))
        dims = {mv(d): m for d, m in self.space.items()}
        blocks = [{mv(d): b for d, b in self.diffs[perm[k]].blocks()} for k in range(self.arity)]
        return self.rebuild(dims, blocks)


def zero_module(cls, field: Field, n: int, **kw):
    return cls.build(field, GradedSpace(n, {}), [{} for _ in range(n)], **kw)


def simple_module(cls, field: Field, at, **kw):
    n = len(at)
    return cls.build(field, {tuple(at): 1}, [{} for _ in range(n)], **kw)


def free_module(cls, field: Field, at, **kw):
    """The free rank one module with generator g at degree ``at``.

    Basis: one vector d_T g per subset T, sitting at at + e_T.
    """
    n = len(at)
    at = tuple(at)
    dims = {add_deg(at, e_of(n, T)): 1 for T in subsets(n)}
    blocks = [dict() for _ in range(n)]
    for T in subsets(n):
        for r in range(1, n + 1):
            if r in T:
                continue
            sgn = application_sign(T + (r,))
            blocks[r - 1][add_deg(at, e_of(n, T))] = field.array([[sgn]], shape=(1, 1))
    return cls.build(field, dims, blocks, **kw)


# direct sums and tensor products

def sum_offsets(modules, d):
    """Offsets of each summand inside the direct sum at degree d."""
    out, acc = [], 0
    for M in modules:
        out.append(acc)
        acc += M.dim(d)
    return out


def direct_sum(*modules):
    M0 = modules[0]
    F = M0.field
    n = M0.arity
    dims = {}
    for M in modules:
        for d, m in M.space.items():
            dims[d] = dims.get(d, 0) + m
    blocks = [dict() for _ in range(n)]
    for d in dims:
        for r in range(1, n + 1):
            blocks[r - 1][d] = block_diag(F, [M.op(r, d) for M in modules])
    return M0.rebuild(dims, blocks, check=False)


def tensor_layout(VM: GradedSpace, VN: GradedSpace):
    """degree -> list of (dm, dn, offset, size); blocks ordered by (dm, dn)."""
    lay = {}
    for dm, a in VM.items():
        for dn, b in VN.items():
            e = add_deg(dm, dn)
            lay.setdefault(e, []).append((dm, dn, a * b))
    out = {}
    for e, parts in lay.items():
        parts.sort()
        off, acc = [], 0
        for dm, dn, sz in parts:
            off.append((dm, dn, acc, sz))
            acc += sz
        out[e] = off
    return dict(sorted(out.items()))


def tensor(M, N, like=None):
    """Graded tensor product with the Koszul sign.

    d_r(m (x) n) = d_r m (x) n + (-1)^{|m|} m (x) d_r n, where |m| is the total
    degree of m.  Basis vector m_a (x) n_b has index a * dim + b in its block.
    """
    F = M.field
    if F != N.field or M.arity != N.arity:
        raise ContractError("tensor: incompatible modules")
    n = M.arity
    lay = tensor_layout(M.space, N.space)
    dims = {e: sum(p[3] for p in parts) for e, parts in lay.items()}
    index = {e: {(dm, dn): (o, sz) for dm, dn, o, sz in parts} for e, parts in lay.items()}
    blocks = [dict() for _ in range(n)]
    for e, parts in lay.items():
        for r in range(1, n + 1):
            er = unit(n, r)
            tgt = add_deg(e, er)
            if tgt not in dims:
                continue
            B = F.zeros(dims[tgt], dims[e])
            for dm, dn, o, sz in parts:
                a, b = M.dim(dm), N.dim(dn)
                key = (add_deg(dm, er), dn)
                if key in index[tgt]:
                    to, tsz = index[tgt][key]
                    B[to:to + tsz, o:o + sz] = F.add(B[to:to + tsz, o:o + sz], _kron(F, M.op(r, dm), F.eye(b)))
                key = (dm, add_deg(dn, er))
                if key in index[tgt]:
                    to, tsz = index[tgt][key]
                    blk = _kron(F, F.eye(a), N.op(r, dn))
                    if parity(dm):
                        blk = F.reduce(-blk)
                    B[to:to + tsz, o:o + sz] = F.add(B[to:to + tsz, o:o + sz], blk)
            blocks[r - 1][e] = B
    base = like if like is not None else M
    return base.rebuild(dims, blocks)


def _kron(F: Field, A, B):
    if A.size == 0 or B.size == 0:
        return F.zeros(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])
    return F.reduce(np.kron(A, B))


# sub and quotient modules

def submodule(M, basis: dict):
    """Module on the spans of basis[d] (columns in M_d); must be d-stable.

    Returns the module; its basis at d is basis[d] in the given order.
    """
    F = M.field
    n = M.arity
    dims = {d: B.shape[1] for d, B in basis.items() if B.shape[1]}
    linv = {d: left_inverse(F, basis[d]) for d in dims}
    blocks = [dict() for _ in range(n)]
    for d in dims:
        for r in range(1, n + 1):
            e = add_deg(d, unit(n, r))
            img = F.matmul(M.op(r, d), basis[d])
            if e not in dims:
                if not F.is_zero(img):
                    raise RelationError("span is not stable under the differentials", d)
                continue
            X = F.matmul(linv[e], img)
            if not F.equal(F.matmul(basis[e], X), img):
                raise RelationError("span is not stable under the differentials", d)
            blocks[r - 1][d] = X
    return M.rebuild(dims, blocks, check=False)


def quotient(M, sub: dict):
    """M / span(sub).  Returns (module, reps, proj) with reps[d] the chosen
    complement columns and proj[d] the coordinate map M_d -> quotient_d."""
    F = M.field
    n = M.arity
    reps, proj, dims = {}, {}, {}
    for d in M.degrees():
        m = M.dim(d)
        S = sub.get(d)
        S = image_of(F, S) if S is not None and S.shape[1] else F.zeros(m, 0)
        R = complement_of(F, S, m)
        basis = np.concatenate([S, R], axis=1)
        inv = inverse_of(F, basis)
        reps[d] = R
        proj[d] = inv[S.shape[1]:]
        if R.shape[1]:
            dims[d] = R.shape[1]
    blocks = [dict() for _ in range(n)]
    for d in dims:
        for r in range(1, n + 1):
            e = add_deg(d, unit(n, r))
            if e in dims:
                blocks[r - 1][d] = F.matmul(proj[e], F.matmul(M.op(r, d), reps[d]))
    Q = M.rebuild(dims, blocks)
    return Q, reps, proj


# free summands

def _frobenius_constants(n: int) -> dict:
    full = tuple(range(1, n + 1))
    c = {full: 1}
    for k in range(n - 1, -1, -1):
        for T in itertools.combinations(full, k):
            r = min(set(full) - set(T))
            U = tuple(sorted(T + (r,)))
            rest = tuple(x for x in full if x not in U)
            sigma = application_sign(T + (r,))
            tau = application_sign((r,) + rest)
            c[T] = sigma * tau * c[U]
    return c


def complement_set(n, T):
    return tuple(x for x in range(1, n + 1) if x not in T)


@dataclass
class FreeSplit:
    """Result of splitting off all free summands."""

    residue: object
    residue_basis: dict
    generators: dict          # degree -> columns m_i in M_d
    counts: dict              # degree -> number of free summands generated there
    free_basis: dict = dc_field(default_factory=dict)   # degree -> columns d_T m_i


def split_free(M) -> FreeSplit:
    """Split M = (free part) + residue with the residue a submodule.

    The number of free summands generated in degree d is the rank of the top
    word on M_d.  A projection onto the free part is built from left inverses
    of those top vectors through the Frobenius pairing, and the residue is
    its kernel.
    """
    F = M.field
    n = M.arity
    full = tuple(range(1, n + 1))
    c = _frobenius_constants(n)
    gens, lams, counts = {}, {}, {}
    for d in M.degrees():
        W = M.word(full, d)
        if W.size == 0 or F.is_zero(W):
            continue
        _, piv = _pivots(F, W)
        Y = W[:, piv]
        gens[d] = F.eye(M.dim(d))[:, piv].copy()
        lams[d] = F.reduce(left_inverse(F, Y) * c[()])
        counts[d] = len(piv)
    if not gens:
        basis = {d: F.eye(m) for d, m in M.space.items()}
        return FreeSplit(M, basis, {}, {}, {})
    # pi_e stacks, for each generator degree d with e = d + e_T, rows c_T * lam * d_{T^c}
    pi_rows = {}
    free_basis = {}
    for d, lam in lams.items():
        for T in subsets(n):
            e = add_deg(d, e_of(n, T))
            if M.dim(e) == 0:
                continue
            Tc = complement_set(n, T)
            rows = F.reduce(F.matmul(lam, M.word(Tc, e)) * c[T])
            pi_rows.setdefault(e, []).append(rows)
            free_basis.setdefault(e, []).append(F.matmul(M.word(T, d), gens[d]))
    res_basis = {}
    for e, m in M.space.items():
        if e in pi_rows:
            P = np.concatenate(pi_rows[e], axis=0)
            K = kernel_of(F, P)
        else:
            K = F.eye(m)
        res_basis[e] = K
    R = submodule(M, res_basis)
    fb = {e: np.concatenate(v, axis=1) for e, v in free_basis.items()}
    return FreeSplit(R, {e: K for e, K in res_basis.items() if K.shape[1]}, gens, counts, fb)


def _pivots(F, W):
    from .core import rref
    return rref(F, W)


def free_rank_profile(M) -> dict:
    """degree -> number of free summands generated there."""
    F = M.field
    full = tuple(range(1, M.arity + 1))
    out = {}
    for d in M.degrees():
        k = rank_of(F, M.word(full, d))
        if k:
            out[d] = k
    return out


# morphisms

class Morphism:
    """Degree-preserving map of modules commuting with all differentials."""

    def __init__(self, source, target, gmap: GradedMap, check: bool = True):
        if gmap.source != source.space or gmap.target != target.space:
            raise ContractError("morphism map does not match source/target spaces")
        if any(x != 0 for x in gmap.offset):
            raise ContractError("morphisms preserve degree")
        self.source = source
        self.target = target
        self.map = gmap
        if check:
            bad = commutation_failure(source, target, gmap)
            if bad is not None:
                raise RelationError(f"map does not commute with d{bad[0]}", bad[1])

    @property
    def field(self):
        return self.source.field

    def block(self, d):
        return self.map.block(d)

    @classmethod
    def from_blocks(cls, source, target, blocks, check: bool = True):
        g = GradedMap(source.field, source.space, target.space, (0,) * source.arity, blocks)
        return cls(source, target, g, check=check)


def commutation_failure(M, N, g: GradedMap):
    F = M.field
    for d in M.degrees():
        for r in range(1, M.arity + 1):
            e = add_deg(d, unit(M.arity, r))
            lhs = F.matmul(N.op(r, d), g.block(d))
            rhs = F.matmul(g.block(e), M.op(r, d))
            if not F.equal(lhs, rhs):
                return r, d
    return None


def identity_morphism(M):
    F = M.field
    return Morphism.from_blocks(M, M, {d: F.eye(m) for d, m in M.space.items()})


def compose_morphisms(f: Morphism, g: Morphism) -> Morphism:
    """f after g."""
    F = f.field
    blocks = {d: F.matmul(f.block(d), g.block(d)) for d in g.source.degrees()}
    return Morphism.from_blocks(g.source, f.target, blocks, check=False)


def morphism_combination(M, N, basis, coeffs):
    F = M.field
    blocks = {}
    for d, m in M.space.items():
        acc = F.zeros(N.dim(d), m)
        for f, c in zip(basis, coeffs):
            acc = F.add(acc, F.mul_scalar(f.block(d), c))
        blocks[d] = acc
    return Morphism.from_blocks(M, N, blocks, check=False)


# Hom spaces through a presentation

@dataclass
class Presentation:
    gens: list          # list of (degree, column vector in M_degree)
    cover: dict         # degree -> list of (gen index, T)
    phi: dict           # degree -> matrix F0_d -> M_d
    kernel: dict        # degree -> kernel columns in F0_d coordinates
    right_inv: dict     # degree -> right inverse of phi


def generators(M):
    """Minimal homogeneous generators: complements of the radical."""
    F = M.field
    n = M.arity
    out = []
    for d, m in M.space.items():
        parts = [F.matmul(M.op(r, sub_deg(d, unit(n, r))), F.eye(M.dim(sub_deg(d, unit(n, r)))))
                 for r in range(1, n + 1) if M.dim(sub_deg(d, unit(n, r)))]
        rad = image_of(F, np.concatenate(parts, axis=1)) if parts else F.zeros(m, 0)
        G = complement_of(F, rad, m)
        for t in range(G.shape[1]):
            out.append((d, G[:, t:t + 1]))
    return out


def presentation(M) -> Presentation:
    F = M.field
    n = M.arity
    gens = generators(M)
    cover, cols = {}, {}
    for i, (d, v) in enumerate(gens):
        for T in subsets(n):
            e = add_deg(d, e_of(n, T))
            cover.setdefault(e, []).append((i, T))
            if M.dim(e):
                cols.setdefault(e, []).append(F.matmul(M.word(T, d), v))
    phi, ker, rinv = {}, {}, {}
    # in degrees where M vanishes every cover vector is a relation
    for e, cov in cover.items():
        if M.dim(e) == 0:
            ker[e] = F.eye(len(cov))
    for e in M.degrees():
        P = np.concatenate(cols[e], axis=1)
        phi[e] = P
        ker[e] = kernel_of(F, P)
        x = solve_of(F, P, F.eye(M.dim(e)))
        if x is None:
            raise ContractError("generators do not span")
        rinv[e] = x
    return Presentation(gens, cover, phi, ker, rinv)


def hom_basis(M, N, pres: Presentation | None = None):
    """Basis of degree-preserving module maps M -> N (as Morphisms)."""
    F = M.field
    if M.arity != N.arity or F != N.field:
        raise ContractError("hom: incompatible modules")
    if M.is_zero() or N.is_zero():
        return []
    pres = pres or presentation(M)
    offs, tot = [], 0
    for d, _ in pres.gens:
        offs.append(tot)
        tot += N.dim(d)
    if tot == 0:
        return []
    rows = []
    for e, K in pres.kernel.items():
        if K.shape[1] == 0 or N.dim(e) == 0:
            continue
        cov = pres.cover[e]
        for t in range(K.shape[1]):
            row = F.zeros(N.dim(e), tot)
            for (i, T), k in zip(cov, K[:, t]):
                if k == 0:
                    continue
                d = pres.gens[i][0]
                if N.dim(d) == 0:
                    continue
                row[:, offs[i]:offs[i] + N.dim(d)] = F.add(row[:, offs[i]:offs[i] + N.dim(d)],
                                                          F.mul_scalar(N.word(T, d), k))
            rows.append(row)
    E = np.concatenate(rows, axis=0) if rows else F.zeros(0, tot)
    sols = kernel_of(F, E)
    out = []
    for s in range(sols.shape[1]):
        x = sols[:, s]
        blocks = {}
        for e, cov in pres.cover.items():
            if N.dim(e) == 0 or M.dim(e) == 0:
                continue
            cols = []
            for i, T in cov:
                d = pres.gens[i][0]
                ni = x[offs[i]:offs[i] + N.dim(d)].reshape(-1, 1)
                cols.append(F.matmul(N.word(T, d), ni) if N.dim(d) else F.zeros(N.dim(e), 1))
            Ft = np.concatenate(cols, axis=1)
            blocks[e] = F.matmul(Ft, pres.right_inv[e])
        out.append(Morphism.from_blocks(M, N, blocks, check=False))
    return out


# isomorphism search

@dataclass
class IsoResult:
    outcome: str                  # "true", "false" or "unknown"
    witness: Morphism | None = None
    inverse: Morphism | None = None
    reason: str = ""

    def __bool__(self):
        return self.outcome == "true"


def find_isomorphism(M, N, seed: int = 0, trials: int = 12, grid_budget: int = 4096) -> IsoResult:
    """Search the degree-0 Hom space for an invertible element."""
    F = M.field
    if M.space != N.space:
        return IsoResult("false", reason="graded dimensions differ")
    if M.is_zero():
        z = Morphism.from_blocks(M, N, {})
        return IsoResult("true", z, Morphism.from_blocks(N, M, {}), "both zero")
    basis = hom_basis(M, N)
    if not basis:
        return IsoResult("false", reason="no nonzero module maps")
    rng = np.random.default_rng(seed)
    degrees = M.degrees()
    seen_nonsingular = set()
    for t in range(trials):
        coeffs = [F.random_scalar(rng) for _ in basis]
        f = morphism_combination(M, N, basis, coeffs)
        inv = {}
        for d in degrees:
            b = inverse_of(F, f.block(d))
            if b is not None:
                seen_nonsingular.add(d)
                inv[d] = b
        if len(inv) == len(degrees):
            g = Morphism.from_blocks(N, M, inv, check=False)
            return IsoResult("true", f, g, f"random combination, trial {t}")
    # certify: a block whose determinant vanishes identically rules out any iso
    for d in degrees:
        if d in seen_nonsingular:
            continue
        mats = [b.block(d) for b in basis]
        span = image_of(F, np.stack([m.reshape(-1) for m in mats], axis=1))
        s, size = span.shape[1], M.dim(d)
        if s == 0:
            return IsoResult("false", reason=f"no map is nonzero in degree {d}")
        if (size + 1) ** s > grid_budget:
            return IsoResult("unknown", reason=f"determinant test at {d} exceeds budget")
        found = False
        for pt in itertools.product(range(size + 1), repeat=s):
            m = F.matmul(span, F.array(list(pt), shape=(s, 1)))
            if inverse_of(F, m.reshape(size, size)) is not None:
                found = True
                break
        if not found:
            return IsoResult("false", reason=f"determinant vanishes identically in degree {d}")
    return IsoResult("unknown", reason="no invertible combination found within the trial budget")


def verify_iso(res: IsoResult) -> bool:
    """Check a witness: both maps commute with the differentials and compose to identities."""
    if res.outcome != "true":
        return False
    f, g = res.witness, res.inverse
    M, N = f.source, f.target
    F = M.field
    if commutation_failure(M, N, f.map) or commutation_failure(N, M, g.map):
        return False
    for d, m in M.space.items():
        if not F.equal(F.matmul(g.block(d), f.block(d)), F.eye(m)):
            return False
        if not F.equal(F.matmul(f.block(d), g.block(d)), F.eye(m)):
            return False
    return True
