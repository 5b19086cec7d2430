"""Bicomplexes: validation, decomposition into indecomposables, cohomology,
total cohomology and spectral-sequence pages.

Indecomposable summands and their anchors (vertex positions n = 0..l):

* Dot@(i,j): one vector at (i,j).
* Square@(i,j): the free module with generator at (i,j).
* ZRight@(i,j), l: v_2m at (i+m, j-m) and v_2m+1 at (i+m+1, j-m); d1 takes
  v_2m to v_2m+1 and d2 takes v_2m+2 to v_2m+1.  Anchored at its top left term.
* ZUp@(i,j), l: v_2m at (i+m, j-m) and v_2m+1 at (i+m, j-m-1); d2 takes
  v_2m+1 to v_2m and d1 takes v_2m+1 to v_2m+2.  Anchored at its top term.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .core import (ContractError, Field, GradedMap, GradedSpace, add_deg, complement_of,
                   image_of, inverse_of, kernel_of, rank_of, solve_of, unit)
from .exterior import ExtModule, direct_sum, free_module, simple_module, split_free

ANTICOMMUTE = "anticommute"
COMMUTE = "commute"


class UnsupportedInput(ContractError):
    pass


class Bicomplex(ExtModule):
    """Bigraded space with d1 of degree (1,0) and d2 of degree (0,1)."""

    kind = "bicomplex"

    def __init__(self, field, space, diffs, check=True, convention=ANTICOMMUTE):
        if convention not in (ANTICOMMUTE, COMMUTE):
            raise ContractError(f"unknown convention {convention!r}")
        if space.arity != 2:
            raise ContractError("a bicomplex has arity 2")
        self.convention = convention
        super().__init__(field, space, diffs, check=check)

    def _options(self):
        return {"convention": self.convention}

    def _combine(self, a, b, d, r, s):
        if self.convention == COMMUTE:
            return self.field.sub(a, b)
        return self.field.add(a, b)

    def _relation_name(self, r, s):
        return "d1d2 = d2d1" if self.convention == COMMUTE else "d1d2 + d2d1 = 0"

    @property
    def d1(self) -> GradedMap:
        return self.diffs[0]

    @property
    def d2(self) -> GradedMap:
        return self.diffs[1]


def make_bicomplex(space: GradedSpace, d1: GradedMap, d2: GradedMap, convention: str = ANTICOMMUTE) -> Bicomplex:
    return Bicomplex(d1.field, space, (d1, d2), convention=convention)


def bicomplex_from_blocks(F: Field, dims, d1, d2, convention=ANTICOMMUTE, check=True) -> Bicomplex:
    blocks = [{k: F.array(v) if not isinstance(v, np.ndarray) else v for k, v in b.items()} for b in (d1, d2)]
    return Bicomplex.build(F, dims, blocks, check=check, convention=convention)


def convert_convention(b: Bicomplex) -> Bicomplex:
    """Switch conventions by scaling the d2 block at (i,j) by (-1)^(i-j)."""
    F = b.field
    d2 = {d: (F.reduce(-blk) if (d[0] - d[1]) % 2 else blk) for d, blk in b.d2.blocks()}
    other = COMMUTE if b.convention == ANTICOMMUTE else ANTICOMMUTE
    return Bicomplex.build(F, b.space, [dict(b.d1.blocks()), d2], convention=other)


def complex_as_bicomplex(F: Field, dims: dict, d: dict) -> Bicomplex:
    """A single cochain complex (degree -> dim, degree -> matrix) placed on row 0."""
    return Bicomplex.build(F, {(i, 0): n for i, n in dims.items()},
                           [{(i, 0): m for i, m in d.items()}, {}])


# summand labels

@dataclass(frozen=True, order=True)
class SummandLabel:
    kind: str
    position: tuple
    length: int | None = None

    def __post_init__(self):
        if self.kind not in ("Dot", "Square", "ZRight", "ZUp"):
            raise ContractError(f"unknown summand kind {self.kind}")
        if self.kind in ("ZRight", "ZUp"):
            if self.length is None or self.length < 1:
                raise ContractError("zigzags need a length l >= 1")
        elif self.length is not None:
            raise ContractError(f"{self.kind} carries no length")

    def __str__(self):
        i, j = self.position
        base = f"{self.kind}@({i},{j})"
        return base if self.length is None else f"{base},l={self.length}"

    @classmethod
    def parse(cls, text: str) -> "SummandLabel":
        kind, rest = text.split("@", 1)
        pos, _, ln = rest.partition(",l=")
        i, j = pos.strip("()").split(",")
        return cls(kind, (int(i), int(j)), int(ln) if ln else None)

    def vertices(self):
        """Bidegrees of the standard basis, in basis order."""
        i, j = self.position
        if self.kind == "Dot":
            return [(i, j)]
        if self.kind == "Square":
            return [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)]
        out = []
        for n in range(self.length + 1):
            m, odd = divmod(n, 2)
            if self.kind == "ZRight":
                out.append((i + m + odd, j - m))
            else:
                out.append((i + m, j - m - odd))
        return out


def Dot(i, j):
    return SummandLabel("Dot", (i, j))


def Square(i, j):
    return SummandLabel("Square", (i, j))


def ZRight(i, j, l):
    return SummandLabel("ZRight", (i, j), l)


def ZUp(i, j, l):
    return SummandLabel("ZUp", (i, j), l)


def standard_summand(label: SummandLabel, F: Field) -> Bicomplex:
    if label.kind == "Dot":
        return simple_module(Bicomplex, F, label.position)
    if label.kind == "Square":
        return free_module(Bicomplex, F, label.position)
    verts = label.vertices()
    one = F.eye(1)
    d1, d2 = {}, {}
    for n in range(len(verts) - 1):
        a, b = verts[n], verts[n + 1]
        # the edge between consecutive vertices points from the C-vertex to the D-vertex
        src, tgt = (a, b) if (n % 2 == 0) == (label.kind == "ZRight") else (b, a)
        if tgt == add_deg(src, (1, 0)):
            d1[src] = one
        elif tgt == add_deg(src, (0, 1)):
            d2[src] = one
        else:
            raise AssertionError("malformed zigzag")
    return Bicomplex.build(F, {v: 1 for v in verts}, [d1, d2])


def reassemble(labels, F: Field) -> Bicomplex:
    if not labels:
        return Bicomplex.build(F, {}, [{}, {}])
    return direct_sum(*[standard_summand(lb, F) for lb in labels])


@dataclass
class Decomposition:
    summands: list
    change_of_basis: dict      # bidegree -> invertible matrix, columns = new basis in old coordinates
    source: Bicomplex

    @property
    def census(self) -> Counter:
        return Counter(self.summands)

    def reassembled(self) -> Bicomplex:
        return reassemble(self.summands, self.source.field)

    def verify(self) -> bool:
        """Conjugating the standard differentials by the change of basis gives the input."""
        F = self.source.field
        S = self.reassembled()
        if S.space != self.source.space:
            return False
        for d in S.degrees():
            B = self.change_of_basis[d]
            if B.shape[0] != B.shape[1] or inverse_of(F, B) is None:
                return False
            for r in (1, 2):
                e = add_deg(d, unit(2, r))
                if S.dim(e) == 0:
                    if not F.is_zero(self.source.op(r, d)):
                        return False
                    continue
                lhs = F.matmul(self.change_of_basis[e], S.op(r, d))
                rhs = F.matmul(self.source.op(r, d), B)
                if not F.equal(lhs, rhs):
                    return False
        return True


# decomposition

class _Bar:
    __slots__ = ("birth", "rho", "vecs")

    def __init__(self, birth, rho, vecs):
        self.birth = birth
        self.rho = rho
        self.vecs = vecs        # chain position -> ambient column vector


def _absorb(F, bars, i, j, c, upto):
    """bar i += c * bar j on positions max(births)..upto."""
    bi, bj = bars[i], bars[j]
    for m in range(max(bi.birth, bj.birth), upto + 1):
        bi.vecs[m] = F.add(bi.vecs[m], F.mul_scalar(bj.vecs[m], c))


def _sweep_line(F, M, verts):
    """Interval decomposition of one anti-diagonal line.

    verts: list of (position, bidegree, kind, basis) in chain order, where kind
    is "D" or "C" and basis holds ambient column vectors.  Returns a list of
    (start, end, {position: vector}).
    """
    bars = []
    alive = []           # indices of bars alive at the current vertex
    done = []
    p0 = verts[0][0]
    for idx, (pos, deg, kind, basis) in enumerate(verts):
        t = pos - p0
        if idx == 0:
            for c in range(basis.shape[1]):
                bars.append(_Bar(pos, 0, {pos: basis[:, c:c + 1]}))
                alive.append(len(bars) - 1)
            continue
        prev_pos, prev_deg, prev_kind, _ = verts[idx - 1]
        new_alive = []
        if prev_kind == "C":
            # forward arrow C(prev) -> D(cur) by d1
            order = sorted(alive, key=lambda b: (bars[b].rho, b))
            kept, imgs = [], F.zeros(M.dim(deg), 0)
            for b in order:
                v = F.matmul(M.op(1, prev_deg), bars[b].vecs[prev_pos])
                x = solve_of(F, imgs, v) if imgs.shape[1] else (None if not F.is_zero(v) else F.zeros(0, 1))
                if x is None:
                    kept.append(b)
                    imgs = np.concatenate([imgs, v], axis=1)
                    bars[b].vecs[pos] = v
                    new_alive.append(b)
                else:
                    for k, bj in enumerate(kept):
                        if x[k, 0] != 0:
                            _absorb(F, bars, b, bj, F.reduce(-x[k, 0]) if not F.is_rational else -x[k, 0], prev_pos)
                    done.append(b)
            # complement of the images inside D(cur)
            if basis.shape[1]:
                coords = solve_of(F, basis, imgs) if imgs.shape[1] else F.zeros(basis.shape[1], 0)
                comp = complement_of(F, coords, basis.shape[1])
                for c in range(comp.shape[1]):
                    bars.append(_Bar(pos, t, {pos: F.matmul(basis, comp[:, c:c + 1])}))
                    new_alive.append(len(bars) - 1)
        else:
            # backward arrow C(cur) -> D(prev) by d2
            rows = sorted(alive, key=lambda b: (-bars[b].rho, b))
            ncols = basis.shape[1]
            cvecs = basis.copy()
            if rows and ncols:
                Bprev = np.concatenate([bars[b].vecs[prev_pos] for b in rows], axis=1)
                G = solve_of(F, Bprev, F.matmul(M.op(2, deg), basis))
                if G is None:
                    raise AssertionError("d2 image leaves the D-space")
            else:
                G = F.zeros(len(rows), ncols)
            used = [False] * ncols
            pivot_of_row = {}
            for ri in range(len(rows)):
                cands = [c for c in range(ncols) if not used[c] and G[ri, c] != 0]
                if not cands:
                    continue
                c = cands[0]
                used[c] = True
                inv = F.inv(G[ri, c])
                G[:, c] = F.reduce(G[:, c] * inv)
                cvecs[:, c] = F.reduce(cvecs[:, c] * inv)
                for x in range(ncols):
                    if x != c and G[ri, x] != 0:
                        k = G[ri, x]
                        G[:, x] = F.reduce(G[:, x] - k * G[:, c])
                        cvecs[:, x] = F.reduce(cvecs[:, x] - k * cvecs[:, c])
                for rj in range(ri + 1, len(rows)):
                    k = G[rj, c]
                    if k != 0:
                        G[rj] = F.reduce(G[rj] - k * G[ri])
                        # row rj -= k row ri  <=>  bar ri absorbs k * bar rj
                        _absorb(F, bars, rows[ri], rows[rj], k, prev_pos)
                pivot_of_row[ri] = c
            for ri, b in enumerate(rows):
                if ri in pivot_of_row:
                    c = pivot_of_row[ri]
                    bars[b].vecs[pos] = cvecs[:, c:c + 1]
                    new_alive.append(b)
                else:
                    done.append(b)
            for c in range(ncols):
                if not used[c]:
                    bars.append(_Bar(pos, -t, {pos: cvecs[:, c:c + 1]}))
                    new_alive.append(len(bars) - 1)
        alive = new_alive
    done.extend(alive)
    out = []
    for b in sorted(done, key=lambda b: (bars[b].birth, min(bars[b].vecs), b)):
        ps = sorted(bars[b].vecs)
        out.append((ps[0], ps[-1], bars[b].vecs))
    return out


def decompose(b: Bicomplex) -> Decomposition:
    """Split b into Dots, Squares and zigzags with an explicit change of basis."""
    if b.convention != ANTICOMMUTE:
        raise UnsupportedInput("decompose expects the anticommute convention; convert first")
    F = b.field
    split = split_free(b)
    labels, columns = [], []     # columns: list of {bidegree: vector}
    for d, G in sorted(split.generators.items()):
        for c in range(G.shape[1]):
            m = G[:, c:c + 1]
            labels.append(Square(*d))
            lab = labels[-1]
            cols = {}
            for T, v in zip([(), (1,), (2,), (1, 2)], lab.vertices()):
                cols[v] = F.matmul(b.word(T, d), m)
            columns.append(cols)
    # phase 2 on the residue, in ambient coordinates
    K = split.residue_basis
    Dsp, Csp = {}, {}
    for d, Kd in K.items():
        A = np.concatenate([F.matmul(b.op(1, d), Kd), F.matmul(b.op(2, d), Kd)], axis=0)
        y = kernel_of(F, A)
        Dsp[d] = F.matmul(Kd, y)
        Csp[d] = F.matmul(Kd, complement_of(F, y, Kd.shape[1]))
    lines = sorted({d[0] + d[1] for d in Dsp if Dsp[d].shape[1]} | {d[0] + d[1] - 1 for d in Dsp if Dsp[d].shape[1]}
                   | {d[0] + d[1] for d in Csp if Csp[d].shape[1]})
    for s in lines:
        # D(a) at (a, s+1-a), position 2a; C(a) at (a, s-a), position 2a+1
        avals = [d[0] for d in Dsp if Dsp[d].shape[1] and d[0] + d[1] == s + 1]
        avals += [d[0] for d in Csp if Csp[d].shape[1] and d[0] + d[1] == s]
        if not avals:
            continue
        verts = []
        for a in range(min(avals), max(avals) + 1):
            dD, dC = (a, s + 1 - a), (a, s - a)
            verts.append((2 * a, dD, "D", Dsp.get(dD, F.zeros(b.dim(dD), 0))))
            verts.append((2 * a + 1, dC, "C", Csp.get(dC, F.zeros(b.dim(dC), 0))))
        # trim empty ends so the first vertex is nonzero
        while verts and verts[0][3].shape[1] == 0:
            verts.pop(0)
        if not verts:
            continue
        pos_deg = {p: dg for p, dg, _, _ in verts}
        for start, end, vecs in _sweep_line(F, b, verts):
            length = end - start
            anchor = pos_deg[start]
            if start % 2 == 0:
                lab = Dot(*anchor) if length == 0 else ZUp(anchor[0], anchor[1], length)
            else:
                if length == 0:
                    raise AssertionError("isolated C vertex")
                lab = ZRight(anchor[0], anchor[1], length)
            labels.append(lab)
            columns.append({pos_deg[p]: v for p, v in vecs.items()})
    # assemble the change of basis, summand by summand
    cob = {d: [] for d in b.degrees()}
    for lab, cols in zip(labels, columns):
        for v in lab.vertices():
            cob[v].append(cols[v])
    change = {d: np.concatenate(v, axis=1) for d, v in cob.items()}
    return Decomposition(labels, change, b)


# cohomology

def cohomology(b: Bicomplex, direction: int) -> Bicomplex:
    """H(b, d_direction) with the induced other differential.

    Returned as a bicomplex whose d_direction is zero.
    """
    if direction not in (1, 2):
        raise ContractError("direction must be 1 or 2")
    F = b.field
    other = 3 - direction
    er = unit(2, direction)
    reps, zbases = {}, {}
    for d, m in b.space.items():
        Z = kernel_of(F, b.op(direction, d)) if b.dim(add_deg(d, er)) else F.eye(m)
        prev = tuple(x - y for x, y in zip(d, er))
        B = image_of(F, b.op(direction, prev)) if b.dim(prev) else F.zeros(m, 0)
        coords = solve_of(F, Z, B) if B.shape[1] else F.zeros(Z.shape[1], 0)
        R = F.matmul(Z, complement_of(F, image_of(F, coords) if coords.shape[1] else coords, Z.shape[1]))
        if R.shape[1]:
            reps[d] = R
            zbases[d] = np.concatenate([B, R], axis=1)
    dims = {d: R.shape[1] for d, R in reps.items()}
    eo = unit(2, other)
    induced = {}
    for d, R in reps.items():
        e = add_deg(d, eo)
        if e not in reps:
            continue
        img = F.matmul(b.op(other, d), R)
        x = solve_of(F, zbases[e], img)
        nb = zbases[e].shape[1] - reps[e].shape[1]
        induced[d] = x[nb:]
    blocks = [{}, {}]
    blocks[other - 1] = induced
    return Bicomplex.build(F, dims, blocks, convention=b.convention)


def total_cohomology(b: Bicomplex) -> dict:
    """Cohomology dims of Tot with d = d1 + d2."""
    if b.convention != ANTICOMMUTE:
        raise UnsupportedInput("total cohomology expects the anticommute convention")
    F = b.field
    degs = b.degrees()
    by_k = {}
    for d in degs:
        by_k.setdefault(d[0] + d[1], []).append(d)
    ranks = {}
    for k, ds in by_k.items():
        tgt = [e for e in by_k.get(k + 1, [])]
        if not tgt:
            ranks[k] = 0
            continue
        rows = []
        for e in tgt:
            row = [F.add(_blk(b, 1, d, e), _blk(b, 2, d, e)) for d in ds]
            rows.append(np.concatenate(row, axis=1))
        ranks[k] = rank_of(F, np.concatenate(rows, axis=0))
    out = {}
    for k, ds in by_k.items():
        dim = sum(b.dim(d) for d in ds)
        h = dim - ranks[k] - ranks.get(k - 1, 0)
        if h:
            out[k] = h
    return dict(sorted(out.items()))


def _blk(b, r, d, e):
    F = b.field
    if add_deg(d, unit(2, r)) == e:
        return b.op(r, d)
    return F.zeros(b.dim(e), b.dim(d))


# spectral sequence pages

def page_contribution(label: SummandLabel, page: int) -> dict:
    """Contribution of one indecomposable to E_page (starting with H(., d2))."""
    i, j = label.position
    if label.kind == "Dot":
        return {(i, j): 1}
    if label.kind == "Square":
        return {}
    l = label.length
    if label.kind == "ZUp":
        if l % 2:
            return {}
        r = l // 2
        return {(i + r, j - r): 1}
    if l % 2 == 0:
        return {(i, j): 1}
    k = (l - 1) // 2
    if page <= k + 1:
        return {(i, j): 1, (i + k + 1, j - k): 1}
    return {}


def page_census(labels, page: int) -> dict:
    acc = Counter()
    for lab in labels:
        for d, n in page_contribution(lab, page).items():
            acc[d] += n
    return dict(sorted((d, n) for d, n in acc.items() if n))


def spectral_page(b: Bicomplex, page: int, start_direction: int = 2) -> dict:
    """E_page of the spectral sequence starting with H(b, d2), by census."""
    if page < 1:
        raise ContractError("pages start at 1")
    if start_direction != 2:
        raise UnsupportedInput("only the spectral sequence starting with H(., d2) is supported")
    return page_census(decompose(b).summands, page)


def stable_page_index(labels) -> int:
    top = 1
    for lab in labels:
        if lab.kind == "ZRight" and lab.length % 2:
            top = max(top, (lab.length - 1) // 2 + 2)
    return top


# rank census oracle

def rank_census(b: Bicomplex) -> dict:
    """Graded dims and ranks of d1, d2, d1 d2 at every bidegree."""
    F = b.field
    out = {}
    for d, m in b.space.items():
        out[d] = (m, rank_of(F, b.op(1, d)), rank_of(F, b.op(2, d)),
                  rank_of(F, F.matmul(b.op(1, add_deg(d, (0, 1))), b.op(2, d))))
    return out
