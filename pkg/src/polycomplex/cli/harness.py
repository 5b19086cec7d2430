"""Commands behind the CLI.  Each returns a Report; nothing here prints.

Reports hold no timing so that the same inputs and seed give the same bytes.
"""
from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field as dc_field

from ..bicomplex import (Bicomplex, cohomology, decompose, page_census, rank_census,
                         spectral_page, stable_page_index, total_cohomology)
from ..core import ContractError, Field, GradedMap
from ..sampling import random_module, random_projective_complex
from ..tricomplex import SUITES, Tricomplex, apply_word, fingerprint, functor_G
from ..tricomplex.verify import trial_rng
from ..zigzag import AComplex, braid_apply, build_algebra, parse_word
from . import fileformat

PASS, FAIL, INPUT_ERROR = 0, 1, 2


@dataclass
class Report:
    command: str
    inputs: dict
    seed: int | None = None
    findings: list = dc_field(default_factory=list)
    result: dict = dc_field(default_factory=dict)
    digest_extra: str = ""

    @property
    def passed(self) -> bool:
        return all(f["passed"] for f in self.findings)

    @property
    def exit_code(self) -> int:
        return PASS if self.passed else FAIL

    def digest(self) -> str:
        h = hashlib.sha256(json.dumps(self.inputs, sort_keys=True).encode())
        h.update(self.digest_extra.encode())
        return h.hexdigest()[:16]

    def to_json(self) -> str:
        body = {"command": self.command, "inputs": self.inputs, "inputs_digest": self.digest(),
                "seed": self.seed, "passed": self.passed, "findings": self.findings,
                "result": self.result}
        return json.dumps(body, sort_keys=True, indent=2) + "\n"


def _key(d) -> str:
    return fileformat.fmt_deg(d)


def _table(dct) -> dict:
    return {_key(d): n for d, n in sorted(dct.items())}


def _finding(name, ok, **detail):
    return {"name": name, "passed": bool(ok), "detail": detail}


def _read(path, kinds):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    kind, obj = fileformat.parse(text)
    if kind not in kinds:
        raise ContractError(f"expected one of {', '.join(kinds)}, got {kind}")
    return kind, obj, text


def _fingerprint_json(fp) -> dict:
    return {"dims": _table(fp["dims"]), "probes": _table(fp["probes"])}


# bicomplex commands

def cmd_decompose(path, out=None) -> Report:
    _, b, text = _read(path, ("bicomplex",))
    dec = decompose(b)
    census = Counter(str(lb) for lb in dec.summands)
    rep = Report("decompose", {"file": str(path)}, digest_extra=text)
    rep.findings.append(_finding("reassembly through the change of basis", dec.verify()))
    rep.findings.append(_finding("rank census", rank_census(b) == rank_census(dec.reassembled())))
    rep.result = {"summands": [f"{lb} x{n}" for lb, n in sorted(census.items())],
                  "count": len(dec.summands)}
    if out:
        P = GradedMap(b.field, b.space, b.space, (0, 0), dec.change_of_basis)
        fileformat.save(P, out)
        rep.result["change_of_basis"] = str(out)
    return rep


def cmd_espage(path, page: int) -> Report:
    _, b, text = _read(path, ("bicomplex",))
    rep = Report("espage", {"file": str(path), "page": page}, digest_extra=text)
    E = spectral_page(b, page)
    rep.result = {"page": page, "dims": _table(E)}
    if page == 1:
        direct = cohomology(b, 2).space.dims
        rep.findings.append(_finding("page 1 equals H(d2)", E == dict(sorted(direct.items()))))
    elif page == 2:
        direct = cohomology(cohomology(b, 2), 1).space.dims
        rep.findings.append(_finding("page 2 equals H(H(d2), d1)", E == dict(sorted(direct.items()))))
    return rep


def cmd_tot(path) -> Report:
    _, b, text = _read(path, ("bicomplex",))
    rep = Report("tot", {"file": str(path)}, digest_extra=text)
    tot = total_cohomology(b)
    labels = decompose(b).summands
    stable = page_census(labels, stable_page_index(labels))
    collapsed = Counter()
    for (i, j), n in stable.items():
        collapsed[i + j] += n
    rep.findings.append(_finding("collapsed stable page equals total cohomology",
                                 dict(sorted(collapsed.items())) == tot))
    rep.result = {"dims": {str(k): n for k, n in tot.items()}}
    return rep


# braid commands

def cmd_braid(word, path, side="tricomplex", out=None) -> Report:
    letters = parse_word(word)
    if side == "complex":
        kind, M, text = _read(path, ("acomplex", "amodule"))
        if kind == "amodule":
            M = AComplex.from_module(M)
        if any(s < 0 for _, s in letters):
            raise ContractError("inverse letters need --side tricomplex (R' is only defined there)")
        X = braid_apply(letters, M)
        fp = fingerprint(functor_G(X))
    elif side == "tricomplex":
        kind, M, text = _read(path, ("tricomplex", "acomplex"))
        if kind == "acomplex":
            M = functor_G(M)
        X = apply_word(letters, M)
        fp = fingerprint(X)
    else:
        raise ContractError(f"unknown side {side!r}")
    rep = Report("braid", {"file": str(path), "word": word, "side": side}, digest_extra=text)
    rep.result = {"fingerprint": _fingerprint_json(fp), "dim": X.space.total}
    if out:
        fileformat.save(X, out)
        rep.result["output"] = str(out)
    return rep


# verification and sampling

def cmd_verify(suite, trials=None, seed=0, window=None, max_dim=3, field: Field | None = None) -> Report:
    if suite not in SUITES:
        raise ContractError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    F = field or Field(32003)
    inputs = {"suite": suite, "field": str(F), "max_dim": max_dim}
    if suite == "homtable":
        window = window or (-2, 2)
        checks = SUITES[suite](F, window=window)
    elif suite == "bridge":
        window = window or (-4, 4)
        trials = 10 if trials is None else trials
        checks = SUITES[suite](F, seed=seed, trials=trials, window=window)
    else:
        trials = (10 if suite == "braid" else 25) if trials is None else trials
        checks = SUITES[suite](F, seed=seed, trials=trials, max_dim=max_dim)
    inputs.update({"trials": trials, "window": list(window) if window else None})
    rep = Report("verify", inputs, seed=seed)
    for c in checks:
        rep.findings.append({"name": c.name, "passed": c.passed, "detail": c.detail})
    failed = [f for f in rep.findings if not f["passed"]]
    rep.result = {"checks": len(checks), "failed": len(failed)}
    return rep


def cmd_random(kind, seed=0, max_dim=3, field: Field | None = None, out=None, window=(-4, 4)) -> Report:
    F = field or Field(32003)
    rng = trial_rng(seed, 0)
    if kind == "bicomplex":
        obj = random_module(Bicomplex, F, rng, (-2, -2), (2, 2), max_dim=max_dim)
    elif kind == "tricomplex":
        obj = random_module(Tricomplex, F, rng, (-2, -2, -2), (2, 2, 2), max_dim=max_dim)
    elif kind == "acomplex":
        obj = random_projective_complex(build_algebra(F, window[0], window[1]), rng, 3)
    else:
        raise ContractError(f"cannot sample kind {kind!r}")
    rep = Report("random", {"kind": kind, "field": str(F), "max_dim": max_dim}, seed=seed)
    text = fileformat.serialize(obj)
    rep.result = {"dims": _table(obj.space.dims)}
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        rep.result["output"] = str(out)
    else:
        rep.result["module"] = text
    return rep
