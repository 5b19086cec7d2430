"""Executable checks of the functor relations, shared by the CLI and the tests.

Every check returns a ``Check``; an exception inside a trial (for instance a
map that fails to commute with a differential) is recorded as a failure with
the error message, never swallowed.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from ..core import ContractError, Field
from ..exterior import direct_sum, verify_iso
from ..sampling import random_module, random_projective_complex
from ..zigzag import AComplex, build_algebra, hom_homotopy, khse_generator, projective
from .base import Q, Tricomplex
from .bridge import functor_G
from .functors import apply_word, braid_R, braid_Rprime, functor_U
from .stable import module_iso, stable_hom, stable_iso

BOX = ((-2, -2, -2), (2, 2, 2))


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: dict = dc_field(default_factory=dict)

    def as_dict(self):
        return {"suite": self.suite, "name": self.name, "passed": self.passed, "detail": self.detail}


def trial_rng(seed: int, trial: int):
    return np.random.default_rng([seed, trial])


def random_tricomplex(F: Field, seed: int, trial: int, max_dim: int = 3, box=BOX) -> Tricomplex:
    return random_module(Tricomplex, F, trial_rng(seed, trial), box[0], box[1], max_dim=max_dim)


def _guard(suite, name, fn):
    try:
        return fn()
    except ContractError as exc:
        return Check(suite, name, False, {"error": str(exc)})


# single relations

def verify_TL(r: int, s: int, M: Tricomplex, seed: int = 0) -> Check:
    """U_r U_s relations, as isomorphisms of modules (not only stably)."""
    name = f"U{r}U{s}"
    if s == r:
        U = functor_U(r, M)
        lhs, rhs = functor_U(r, U), direct_sum(U.shift((1, 1, 0)), U)
    elif abs(r - s) == 1:
        U = functor_U(r, M)
        lhs, rhs = functor_U(r, functor_U(s, U)), U.shift((1, 1, 0))
        name = f"U{r}U{s}U{r}"
    else:
        lhs = functor_U(r, functor_U(s, M))
        return Check("tl", name, lhs.is_zero(), {"kind": "vanishing", "dim": lhs.total_dim})
    res = module_iso(lhs, rhs, seed=seed)
    ok = res.outcome == "true" and verify_iso(res)
    return Check("tl", name, ok, {"kind": "iso", "outcome": res.outcome, "dim": lhs.total_dim,
                                  "reason": res.reason})


def verify_braid(r: int, M: Tricomplex, s: int | None = None, seed: int = 0) -> Check:
    """Braid relation for s = r+1 (default), distant commutation for |r-s| > 1."""
    s = r + 1 if s is None else s
    if abs(r - s) == 1:
        lhs, rhs = apply_word([r, s, r], M), apply_word([s, r, s], M)
        name = f"R{r}R{s}R{r}"
    elif abs(r - s) > 1:
        lhs, rhs = apply_word([r, s], M), apply_word([s, r], M)
        name = f"R{r}R{s}"
    else:
        raise ContractError("verify_braid needs r != s")
    res = stable_iso(lhs, rhs, seed=seed)
    return Check("braid", name, res.verified(), {"outcome": res.outcome, "reason": res.reason,
                                                 "dims": [lhs.total_dim, rhs.total_dim]})


def verify_inverse(r: int, M: Tricomplex, seed: int = 0) -> list:
    out = []
    for label, X in ((f"R'{r}R{r}", braid_Rprime(r, braid_R(r, M))), (f"R{r}R'{r}", braid_R(r, braid_Rprime(r, M)))):
        res = stable_iso(X, M, seed=seed)
        out.append(Check("inverse", label, res.verified(), {"outcome": res.outcome, "reason": res.reason}))
    return out


# suites

def suite_tl(F: Field, seed: int = 0, trials: int = 25, rs=(-1, 0, 1), max_dim: int = 3) -> list:
    out = []
    for t in range(trials):
        M = random_tricomplex(F, seed, t, max_dim)
        for r in rs:
            for s in (r, r - 1, r + 1, r + 2, r - 2):
                c = _guard("tl", f"U{r}U{s}", lambda: verify_TL(r, s, M, seed))
                c.detail["trial"] = t
                out.append(c)
    return out


def suite_inverse(F: Field, seed: int = 0, trials: int = 25, rs=(-1, 0, 1), max_dim: int = 3) -> list:
    out = []
    for t in range(trials):
        M = random_tricomplex(F, seed, t, max_dim)
        for r in rs:
            cs = _guard("inverse", f"R{r}", lambda: verify_inverse(r, M, seed))
            for c in (cs if isinstance(cs, list) else [cs]):
                c.detail["trial"] = t
                out.append(c)
    return out


def suite_braid(F: Field, seed: int = 0, trials: int = 10, rs=(-1, 0, 1), max_dim: int = 3) -> list:
    out = []
    for t in range(trials):
        M = random_tricomplex(F, seed, t, max_dim)
        for r in rs:
            for s in (r + 1, r + 2):
                c = _guard("braid", f"R{r},R{s}", lambda: verify_braid(r, M, s, seed))
                c.detail["trial"] = t
                out.append(c)
    return out


def suite_bridge(F: Field, seed: int = 0, trials: int = 10, window=(-4, 4), span: int = 2) -> list:
    """G on shifted projectives as data, shift intertwining, and G vs the braid generator."""
    alg = build_algebra(F, window[0], window[1])
    out = []
    rng_r = range(max(-span, alg.lo + 1), min(span, alg.hi - 1) + 1)
    exact = True
    bad = None
    for r in rng_r:
        for j in range(-span, span + 1):
            for k in range(-span, span + 1):
                P = AComplex.from_module(projective(alg, r, 0)).shift(j, k)
                if functor_G(P) != Q(F, (r + j, j, -k)):
                    exact, bad = False, [r, j, k]
    out.append(Check("bridge", "G(P_r<j>[k]) = Q{r+j,j,-k}", exact, {"first_failure": bad}))
    for t in range(trials):
        rng = trial_rng(seed, t)
        try:
            M = random_projective_complex(alg, rng, 3)
            G = functor_G(M)
            ok = functor_G(M.shift(1, 0)) == G.shift((1, 1, 0)) and functor_G(M.shift(0, 1)) == G.shift((0, 0, -1))
            out.append(Check("bridge", "shift intertwining", ok, {"trial": t}))
            for r in (-1, 0, 1):
                res = stable_iso(functor_G(khse_generator(r, M)), braid_R(r, G), seed=seed)
                out.append(Check("bridge", f"G R{r} = R{r} G", res.verified(),
                                 {"trial": t, "outcome": res.outcome, "reason": res.reason}))
        except ContractError as exc:
            out.append(Check("bridge", "trial", False, {"trial": t, "error": str(exc)}))
    return out


def expected_hom(r1, j1, k1, r2, j2, k2) -> int:
    """Hom in the homotopy category between shifted projectives (corrected table)."""
    if k1 != k2:
        return 0
    return int((r1, j1) in {(r2, j2), (r2 + 1, j2), (r2, j2 + 1), (r2 - 1, j2 + 1)})


def suite_homtable(F: Field, window=(-2, 2), span: int = 2) -> list:
    """Every pair of projectives indexed by the window (the algebra is padded by one
    vertex on each side so all of them are interior), j1 = k1 = 0, |dj|, |dk| <= span."""
    alg = build_algebra(F, window[0] - 1, window[1] + 1)
    out = []
    P = {r: AComplex.from_module(projective(alg, r, 0)) for r in range(window[0], window[1] + 1)}
    for r1 in P:
        for r2 in P:
            if abs(r1 - r2) > span:
                continue
            for j2 in range(-span, span + 1):
                for k2 in range(-span, span + 1):
                    hh = hom_homotopy(P[r1], P[r2], j2, k2)
                    sh = stable_hom(functor_G(P[r1]), functor_G(P[r2].shift(j2, k2)))
                    want = expected_hom(r1, 0, 0, r2, j2, k2)
                    out.append(Check("homtable", f"P{r1} -> P{r2}<{j2}>[{k2}]", hh == sh == want,
                                     {"homotopy": hh, "stable": sh, "expected": want}))
    return out


SUITES = {"tl": suite_tl, "inverse": suite_inverse, "braid": suite_braid,
          "bridge": suite_bridge, "homtable": suite_homtable}
