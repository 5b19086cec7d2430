"""The zigzag algebra, graded modules and complexes over it, and the braid
generator as a cone.

Conventions.  Paths compose by concatenation, (a|b)(b|c) = (a|b|c), and
modules are right modules: a path acts as a map from its first vertex to its
last.  The arrow (r|r+1) has degree 0 and acts on a module as D1; the arrow
(r|r-1) has degree 1 and acts as D2.  With this reading the grading rule
deg(r|r+1) = 0, deg(r|r-1) = 1 agrees with the regrouping of a bicomplex
(vertex r = i - j, internal degree j).

A module is stored on the grading (vertex, internal degree); a complex on
(vertex, internal degree, homological degree).  Homological shift:
(M[1])_k = M_{k+1} with differential -d; internal shift: (M<1>)^j = M^{j-1}.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ContractError, Field, GradedMap, GradedSpace, add_deg, rank_of, solve_of
from .core.maps import MapSpace, commuting_system, solve_commuting
from .exterior import RelationError


class WindowError(ContractError):
    pass


@dataclass(frozen=True)
class ZigzagAlgebra:
    field: Field
    lo: int
    hi: int
    truncated: bool = False

    def __post_init__(self):
        if self.hi < self.lo:
            raise ContractError("empty vertex window")

    def vertices(self):
        return range(self.lo, self.hi + 1)

    def has(self, r) -> bool:
        return self.lo <= r <= self.hi

    def loop(self, r):
        if self.has(r + 1):
            return (r, r + 1, r)
        if self.has(r - 1):
            return (r, r - 1, r)
        return None

    @property
    def basis(self):
        out = []
        for r in self.vertices():
            out.append((r,))
            for s in (r + 1, r - 1):
                if self.has(s):
                    out.append((r, s))
            lp = self.loop(r)
            if lp is not None:
                out.append(lp)
        return out

    @staticmethod
    def degree(path) -> int:
        return sum(1 for a, b in zip(path, path[1:]) if b == a - 1)

    def reduce_path(self, path):
        """Canonical representative of a path, or None when it is zero."""
        if len(path) <= 2:
            return path
        if len(path) == 3 and path[0] == path[2]:
            return self.loop(path[0])
        return None

    def product(self, x, y):
        """x . y (concatenation) as a canonical path, or None."""
        if x[-1] != y[0]:
            return None
        return self.reduce_path(tuple(x) + tuple(y[1:]))

    def table(self) -> dict:
        B = self.basis
        return {(x, y): self.product(x, y) for x in B for y in B}

    def neighbours_ok(self, r) -> bool:
        return self.has(r - 1) and self.has(r + 1)


def build_algebra(field: Field, lo: int, hi: int, truncated: bool = False) -> ZigzagAlgebra:
    return ZigzagAlgebra(field, lo, hi, truncated)


# modules and complexes

class _ARep:
    """Shared storage: a graded space with named action maps."""

    OFFSETS = {}

    def __init__(self, alg: ZigzagAlgebra, space: GradedSpace, maps: dict, check=True):
        self.alg = alg
        self.field = alg.field
        self.space = space
        self.maps = {}
        for name, off in self.OFFSETS.items():
            g = maps.get(name)
            if g is None:
                g = GradedMap(self.field, space, space, off, {})
            elif not isinstance(g, GradedMap):
                g = GradedMap(self.field, space, space, off, g)
            if g.offset != off or g.source != space or g.target != space:
                raise ContractError(f"map {name} is misshapen")
            self.maps[name] = g
        if check:
            self.validate()

    def op(self, name, d):
        return self.maps[name].block(d)

    def dim(self, d):
        return self.space.dim(d)

    def degrees(self):
        return self.space.degrees()

    def is_zero(self):
        return self.space.is_zero()

    def __eq__(self, other):
        return (type(self) is type(other) and self.alg == other.alg and self.space == other.space
                and all(self.maps[k] == other.maps[k] for k in self.OFFSETS))

    def __hash__(self):
        return hash(self.space)

    def __repr__(self):
        return f"{type(self).__name__}({self.space.dims})"

    def _check_relations(self):
        F = self.field
        alg = self.alg
        for d in self.degrees():
            r = d[0]
            if not alg.has(r):
                raise WindowError(f"support at vertex {r} outside window [{alg.lo},{alg.hi}]")
            for name in ("D1", "D2"):
                off = self.OFFSETS[name]
                sq = F.matmul(self.op(name, add_deg(d, off)), self.op(name, d))
                if not F.is_zero(sq):
                    raise RelationError(f"{name}^2 != 0", d)
            if alg.truncated and not alg.neighbours_ok(r):
                continue
            a = F.matmul(self.op("D1", add_deg(d, self.OFFSETS["D2"])), self.op("D2", d))
            b = F.matmul(self.op("D2", add_deg(d, self.OFFSETS["D1"])), self.op("D1", d))
            if not F.equal(a, b):
                raise RelationError("D1D2 != D2D1", d)

    def validate(self):
        self._check_relations()
        return self


class AModule(_ARep):
    """Graded right module; grading (vertex, internal degree)."""

    OFFSETS = {"D1": (1, 0), "D2": (-1, 1)}

    def graded_dims(self) -> dict:
        out = {}
        for (r, j), n in self.space.items():
            out[j] = out.get(j, 0) + n
        return dict(sorted(out.items()))

    def shift(self, j: int) -> "AModule":
        s = (0, j)
        return AModule(self.alg, self.space.shift(s),
                       {k: {add_deg(d, s): b for d, b in g.blocks()} for k, g in self.maps.items()}, check=False)

    def translate(self) -> "AModule":
        """Vertices move up by one, D2 negated (see AComplex.translate)."""
        F = self.field
        s = (1, 0)
        alg = ZigzagAlgebra(self.alg.field, self.alg.lo + 1, self.alg.hi + 1, self.alg.truncated)
        maps = {name: {add_deg(d, s): (b if name == "D1" else F.reduce(-b)) for d, b in g.blocks()}
                for name, g in self.maps.items()}
        return AModule(alg, self.space.shift(s), maps)


class AComplex(_ARep):
    """Bounded complex of graded modules; grading (vertex, internal, homological)."""

    OFFSETS = {"D1": (1, 0, 0), "D2": (-1, 1, 0), "d": (0, 0, 1)}

    def validate(self):
        self._check_relations()
        F = self.field
        for d in self.degrees():
            e = add_deg(d, self.OFFSETS["d"])
            if not F.is_zero(F.matmul(self.op("d", e), self.op("d", d))):
                raise RelationError("d^2 != 0", d)
            for name in ("D1", "D2"):
                off = self.OFFSETS[name]
                a = F.matmul(self.op("d", add_deg(d, off)), self.op(name, d))
                b = F.matmul(self.op(name, e), self.op("d", d))
                if not F.equal(a, b):
                    raise RelationError(f"d does not commute with {name}", d)
        return self

    @classmethod
    def from_module(cls, M: AModule, k: int = 0) -> "AComplex":
        sp = GradedSpace(3, {(r, j, k): n for (r, j), n in M.space.items()})
        maps = {name: {(d[0], d[1], k): b for d, b in M.maps[name].blocks()} for name in ("D1", "D2")}
        return cls(M.alg, sp, maps)

    def term(self, k: int) -> AModule:
        sp = GradedSpace(2, {(r, j): n for (r, j, kk), n in self.space.items() if kk == k})
        maps = {name: {(d[0], d[1]): b for d, b in self.maps[name].blocks() if d[2] == k} for name in ("D1", "D2")}
        return AModule(self.alg, sp, maps)

    def shift(self, j: int = 0, k: int = 0) -> "AComplex":
        """M<j>[k]."""
        F = self.field
        s = (0, j, -k)
        maps = {}
        for name, g in self.maps.items():
            neg = name == "d" and k % 2
            maps[name] = {add_deg(d, s): (F.reduce(-b) if neg else b) for d, b in g.blocks()}
        return AComplex(self.alg, self.space.shift(s), maps, check=False)

    def translate(self) -> "AComplex":
        """Move every vertex up by one.

        Composed with the grading-sign automorphism (D2 and d negated) so that
        the bridge functors intertwine it with the first-axis shift on the nose.
        """
        F = self.field
        s = (1, 0, 0)
        alg = ZigzagAlgebra(self.alg.field, self.alg.lo + 1, self.alg.hi + 1, self.alg.truncated)
        maps = {name: {add_deg(d, s): (F.reduce(-b) if name != "D1" else b) for d, b in g.blocks()}
                for name, g in self.maps.items()}
        return AComplex(alg, self.space.shift(s), maps)

    def homology_dims(self) -> dict:
        F = self.field
        out = {}
        for d, n in self.space.items():
            p = add_deg(d, (0, 0, -1))
            h = n - rank_of(F, self.op("d", d)) - rank_of(F, self.op("d", p))
            if h:
                out[d] = h
        return out


def zero_complex(alg) -> AComplex:
    return AComplex(alg, GradedSpace(3, {}), {})


def simple(alg: ZigzagAlgebra, r: int, j: int = 0) -> AModule:
    return AModule(alg, GradedSpace(2, {(r, j): 1}), {})


def projective(alg: ZigzagAlgebra, r: int, j: int = 0) -> AModule:
    """P_r<j>, the right ideal of paths starting at r, generator in degree j.

    Basis (one vector per degree): g = (r) at (r, j), x = (r|r+1) at (r+1, j),
    y = (-1)^r (r|r-1) at (r-1, j+1), z = (-1)^(r+1) (r|r+1|r) at (r, j+1).
    The signs make the bridge to tricomplexes send P_r<j> to Q{r+j, j, 0}
    on the nose.
    """
    F = alg.field
    if not alg.has(r):
        raise WindowError(f"vertex {r} outside window [{alg.lo},{alg.hi}]")
    if not alg.truncated and not alg.neighbours_ok(r):
        raise WindowError(f"P_{r} needs both neighbours in the window (use truncated=True for the finite algebra)")
    up, down = alg.has(r + 1), alg.has(r - 1)
    dims = {(r, j): 1, (r, j + 1): 1}
    if up:
        dims[(r + 1, j)] = 1
    if down:
        dims[(r - 1, j + 1)] = 1
    one = F.eye(1)
    sgn = F.array([[(-1) ** (r % 2)]], shape=(1, 1))
    D1, D2 = {}, {}
    if up:
        D1[(r, j)] = one
        D2[(r + 1, j)] = F.reduce(-sgn)
    if down:
        D2[(r, j)] = sgn
        D1[(r - 1, j + 1)] = F.reduce(-one)
    return AModule(alg, GradedSpace(2, dims), {"D1": D1, "D2": D2})


# Hom spaces, chain maps and homotopies

@dataclass
class AMap:
    """Degree-preserving map of complexes (or modules) given blockwise."""

    source: object
    target: object
    blocks: dict


def hom_modules(M: AModule, N: AModule, j: int = 0) -> list:
    """Basis of A-module maps M -> N raising internal degree by j."""
    if M.alg != N.alg:
        raise ContractError("modules over different algebras")
    sp = MapSpace(M.field, M.space, N.space, (0, j))
    cons = [(M.maps[k], N.maps[k], 1) for k in ("D1", "D2")]
    return [AMap(M, N, b) for b in solve_commuting(sp, cons)]


def _chain_space(M: AComplex, N: AComplex, hdeg: int = 0):
    return MapSpace(M.field, M.space, N.space, (0, 0, hdeg))


def chain_maps(M: AComplex, N: AComplex) -> list:
    sp = _chain_space(M, N)
    cons = [(M.maps[k], N.maps[k], 1) for k in ("D1", "D2", "d")]
    return solve_commuting(sp, cons)


def _homotopy_images(M: AComplex, N: AComplex):
    """Matrix whose columns are d h + h d for a basis of A-linear h of degree -1."""
    F = M.field
    hsp = _chain_space(M, N, -1)
    hs = solve_commuting(hsp, [(M.maps[k], N.maps[k], 1) for k in ("D1", "D2")])
    fsp = _chain_space(M, N)
    cols = []
    for h in hs:
        img = {}
        for d in M.degrees():
            if d not in fsp.slots:
                continue
            acc = F.zeros(N.dim(d), M.dim(d))
            hd = h.get(add_deg(d, (0, 0, 1)))
            if hd is not None:
                acc = F.add(acc, F.matmul(hd, M.op("d", d)))
            dm = add_deg(d, (0, 0, -1))
            hm = h.get(d)
            if hm is not None:
                acc = F.add(acc, F.matmul(N.op("d", dm), hm))
            img[d] = acc
        cols.append(fsp.vector(img))
    mat = np.concatenate(cols, axis=1) if cols else F.zeros(fsp.size, 0)
    return fsp, hsp, hs, mat


def is_chain_map(f: AMap) -> bool:
    M, N = f.source, f.target
    F = M.field
    sp = _chain_space(M, N)
    v = sp.vector(f.blocks)
    A = commuting_system(sp, [(M.maps[k], N.maps[k], 1) for k in ("D1", "D2", "d")])
    return F.is_zero(F.matmul(A, v)) if A.shape[0] else True


def is_null_homotopic(f: AMap):
    """(True, h) when f = d h + h d for an A-linear h of degree -1, else (False, None)."""
    if not is_chain_map(f):
        raise ContractError("not a chain map")
    M, N = f.source, f.target
    F = M.field
    fsp, hsp, hs, mat = _homotopy_images(M, N)
    target = fsp.vector(f.blocks)
    if F.is_zero(target):
        return True, {}
    if mat.shape[1] == 0:
        return False, None
    x = solve_of(F, mat, target)
    if x is None:
        return False, None
    h = {}
    for c, hb in enumerate(hs):
        for d, b in hb.items():
            h[d] = F.add(h.get(d, F.zeros(*b.shape)), F.mul_scalar(b, x[c, 0]))
    return True, h


def hom_homotopy(M: AComplex, N: AComplex, j: int = 0, k: int = 0) -> int:
    """dim Hom_K(M, N<j>[k])."""
    N2 = N.shift(j, k)
    F = M.field
    n_chain = len(chain_maps(M, N2))
    _, _, _, mat = _homotopy_images(M, N2)
    return n_chain - (rank_of(F, mat) if mat.size else 0)


# the braid generator

def _projective_action(alg, r):
    """For P_r<0>: list of (vertex, internal degree) per basis element and the
    map m -> m . b expressed through M's action, as a tag."""
    items = [((r, 0), "g")]
    if alg.has(r + 1):
        items.append(((r + 1, 0), "x"))
    if alg.has(r - 1):
        items.append(((r - 1, 1), "y"))
    items.append(((r, 1), "z"))
    return items


def khse_generator(r: int, M: AComplex, with_map: bool = False):
    """Cone of P_r (x) (r)M -> M, (r) (x) m |-> m.

    Cone convention: C_k = X_{k+1} + M_k with d(x, m) = (-d x, f(x) + d m).
    """
    alg = M.alg
    F = M.field
    if not alg.has(r) or (not alg.truncated and not alg.neighbours_ok(r)):
        raise WindowError(f"vertex {r} needs both neighbours inside the window")
    P = projective(alg, r, 0)
    items = _projective_action(alg, r)
    # X = P_r (x) (r)M, blocks ordered by P basis element then M basis
    rdeg = [d for d in M.degrees() if d[0] == r]
    xparts = {}
    for (v, jb), tag in items:
        for d in rdeg:
            D = (v, d[1] + jb, d[2])
            xparts.setdefault(D, []).append((tag, (v, jb), d))
    xlay = {}
    for D, parts in xparts.items():
        acc, lay = 0, []
        for tag, pv, d in parts:
            lay.append((tag, pv, d, acc, M.dim(d)))
            acc += M.dim(d)
        xlay[D] = (acc, lay)
    Xspace = GradedSpace(3, {D: n for D, (n, _) in xlay.items()})

    def locate(D, pv, d):
        n, lay = xlay.get(D, (0, []))
        for tag, pv2, d2, o, sz in lay:
            if pv2 == pv and d2 == d:
                return o, sz
        return None

    Xmaps = {"D1": {}, "D2": {}, "d": {}}
    for D, (n, lay) in xlay.items():
        for name, off in AComplex.OFFSETS.items():
            E = add_deg(D, off)
            if E not in xlay:
                continue
            B = F.zeros(xlay[E][0], n)
            for tag, pv, d, o, sz in lay:
                if name == "d":
                    loc = locate(E, pv, add_deg(d, off))
                    if loc is not None:
                        B[loc[0]:loc[0] + loc[1], o:o + sz] = M.op("d", d)
                else:
                    pblk = P.op(name, pv)
                    if pblk.size == 0 or F.is_zero(pblk):
                        continue
                    pv2 = add_deg(pv, AModule.OFFSETS[name])
                    loc = locate(E, pv2, d)
                    if loc is not None:
                        B[loc[0]:loc[0] + loc[1], o:o + sz] = F.mul_scalar(F.eye(sz), pblk[0, 0])
            Xmaps[name][D] = B
    X = AComplex(alg, Xspace, Xmaps)
    # f : X -> M
    sgn_r = (-1) ** (r % 2)
    fblocks = {}
    for D, (n, lay) in xlay.items():
        B = F.zeros(M.dim(D), n)
        for tag, pv, d, o, sz in lay:
            if tag == "g":
                blk = F.eye(sz)
            elif tag == "x":
                blk = M.op("D1", d)
            elif tag == "y":
                blk = F.mul_scalar(M.op("D2", d), sgn_r)
            else:
                blk = F.mul_scalar(F.matmul(M.op("D2", add_deg(d, (1, 0, 0))), M.op("D1", d)), -sgn_r)
            B[:, o:o + sz] = blk
        fblocks[D] = B
    C = cone(X, M, fblocks)
    return (C, X, fblocks) if with_map else C


def cone(X: AComplex, M: AComplex, f: dict) -> AComplex:
    """C_k = X_{k+1} + M_k, d(x, m) = (-d x, f(x) + d m); X-part first."""
    F = M.field
    sh = (0, 0, -1)
    Xs = {add_deg(D, sh): n for D, n in X.space.items()}
    dims = {}
    for D in set(Xs) | set(M.space.dims):
        dims[D] = Xs.get(D, 0) + M.dim(D)
    space = GradedSpace(3, dims)
    maps = {"D1": {}, "D2": {}, "d": {}}
    for D in space.degrees():
        xd = add_deg(D, (0, 0, 1))    # X degree sitting at D
        nx = X.dim(xd)
        for name, off in AComplex.OFFSETS.items():
            E = add_deg(D, off)
            if space.dim(E) == 0:
                continue
            ex = add_deg(E, (0, 0, 1))
            nxe = X.dim(ex)
            B = F.zeros(space.dim(E), space.dim(D))
            if name == "d":
                if nx and nxe:
                    B[:nxe, :nx] = F.reduce(-X.op("d", xd))
                if nx and M.dim(E):
                    B[nxe:, :nx] = f.get(xd, F.zeros(M.dim(xd), nx)) if xd == E else F.zeros(M.dim(E), nx)
                if M.dim(D) and M.dim(E):
                    B[nxe:, nx:] = M.op("d", D)
            else:
                if nx and nxe:
                    B[:nxe, :nx] = X.op(name, xd)
                if M.dim(D) and M.dim(E):
                    B[nxe:, nx:] = M.op(name, D)
            maps[name][D] = B
    return AComplex(M.alg, space, maps)


def parse_word(word):
    """Accepts "0,1,-0" or a sequence of ints or (index, sign) pairs."""
    if isinstance(word, str):
        out = []
        for tok in word.replace(" ", "").split(","):
            if not tok:
                continue
            sign = -1 if tok.startswith("-") else 1
            try:
                out.append((int(tok.lstrip("+-")), sign))
            except ValueError as exc:
                raise ContractError(f"bad braid letter {tok!r}") from exc
        return out
    out = []
    for x in word:
        out.append((int(x[0]), int(x[1])) if isinstance(x, tuple) else (int(x), 1))
    return out


def braid_apply(word, M: AComplex) -> AComplex:
    """Apply the letters left to right: the first letter acts first."""
    for r, sign in parse_word(word):
        if sign < 0:
            raise ContractError("inverse letters are only available on tricomplexes (use the R' functors there)")
        M = khse_generator(r, M)
    return M


# the dg isomorphism phi_M : M (x) k[d]/(d^2)[1] -> cone of id_M, used as a test oracle

def tensor_dual_numbers(M: AComplex) -> AComplex:
    """M (x) k[d]/(d^2)[1]: basis m (x) 1 in degree k-1 and m (x) d in degree k.

    Differential: d(m (x) 1) = dm (x) 1 + (-1)^|m| m (x) d, then shifted by [1].
    Stored with the m (x) 1 part first in each degree.
    """
    F = M.field
    sh = (0, 0, -1)
    dims = {}
    for D, n in M.space.items():
        dims[add_deg(D, sh)] = dims.get(add_deg(D, sh), 0) + n
        dims[D] = dims.get(D, 0) + n
    space = GradedSpace(3, dims)
    maps = {"D1": {}, "D2": {}, "d": {}}
    for D in space.degrees():
        one = add_deg(D, (0, 0, 1))   # m (x) 1 with m in degree k+1 sits at D
        n1, nd = M.dim(one), M.dim(D)
        for name, off in AComplex.OFFSETS.items():
            E = add_deg(D, off)
            if space.dim(E) == 0:
                continue
            e1 = add_deg(E, (0, 0, 1))
            m1 = M.dim(e1)
            B = F.zeros(space.dim(E), space.dim(D))
            if name == "d":
                # shifted differential is minus the unshifted one
                if n1 and m1:
                    B[:m1, :n1] = F.reduce(-M.op("d", one))
                if n1 and M.dim(E) and E == one:
                    sgn = -((-1) ** (one[2] % 2))
                    B[m1:, :n1] = F.mul_scalar(F.eye(n1), sgn)
                if nd and M.dim(E):
                    B[m1:, n1:] = F.reduce(-M.op("d", D))
            else:
                if n1 and m1:
                    B[:m1, :n1] = M.op(name, one)
                if nd and M.dim(E):
                    B[m1:, n1:] = M.op(name, D)
            maps[name][D] = B
    return AComplex(M.alg, space, maps)
