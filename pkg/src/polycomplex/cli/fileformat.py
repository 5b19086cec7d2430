"""Line-oriented text format for graded modules, complexes and graded maps.

    gradedmod v1
    field p:32003
    kind tricomplex
    arity 3
    dim 0,0,0 1
    dim 1,0,0 1
    map d1 0,0,0 1x1
    1
    end

``kind`` is one of bicomplex, tricomplex, amodule, acomplex or gradedmap.
Zigzag kinds add ``option window LO HI`` and optionally ``option truncated
1``; a bicomplex may carry ``option convention commute``; a graded map
carries ``option offset ...`` and maps its space to itself.  Each
``map NAME DEGREE RxC`` line is followed by R rows of C scalars (integers
mod p, or fractions over q).  Lines starting with ``#`` are comments.
"""
from __future__ import annotations

from ..bicomplex import ANTICOMMUTE, Bicomplex
from ..core import ContractError, Field, GradedMap, GradedSpace
from ..tricomplex import Tricomplex
from ..zigzag import AComplex, AModule, ZigzagAlgebra

HEADER = "gradedmod v1"
MAP_NAMES = {
    "bicomplex": ("d1", "d2"),
    "tricomplex": ("d1", "d2", "d3"),
    "amodule": ("D1", "D2"),
    "acomplex": ("D1", "D2", "d"),
    "gradedmap": ("P",),
}
ARITY = {"bicomplex": 2, "tricomplex": 3, "amodule": 2, "acomplex": 3}


class FormatError(ContractError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


def fmt_deg(d) -> str:
    return ",".join(str(x) for x in d)


def _int(text, what, line):
    try:
        return int(text)
    except ValueError as exc:
        raise FormatError(f"bad {what} {text!r}", line) from exc


def parse_deg(text, arity=None, line=None) -> tuple:
    try:
        d = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise FormatError(f"bad degree {text!r}", line) from exc
    if arity is not None and len(d) != arity:
        raise FormatError(f"degree {text!r} should have {arity} entries", line)
    return d


# reading

def parse(text: str):
    """Text -> (kind, object).  Objects are validated on construction."""
    lines = [(n + 1, ln.strip()) for n, ln in enumerate(text.splitlines())]
    lines = [(n, ln) for n, ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0][1] != HEADER:
        raise FormatError(f"missing header {HEADER!r}", lines[0][0] if lines else None)
    field = kind = arity = None
    options, dims, maps = {}, {}, {}
    pos = 1
    ended = False
    while pos < len(lines):
        n, ln = lines[pos]
        pos += 1
        word, _, rest = ln.partition(" ")
        if word == "end":
            ended = True
            break
        if word == "field":
            field = Field.parse(rest.strip())
        elif word == "kind":
            kind = rest.strip()
            if kind not in MAP_NAMES:
                raise FormatError(f"unknown kind {kind!r}", n)
        elif word == "arity":
            arity = _int(rest.strip(), "arity", n)
        elif word == "option":
            key, _, val = rest.partition(" ")
            options[key] = val.strip()
        elif word == "dim":
            parts = rest.split()
            if len(parts) != 2:
                raise FormatError("dim needs a degree and a dimension", n)
            d = parse_deg(parts[0], arity, n)
            if d in dims:
                raise FormatError(f"duplicate dim for {parts[0]}", n)
            m = _int(parts[1], "dimension", n)
            if m < 0:
                raise FormatError("negative dimension", n)
            dims[d] = m
        elif word == "map":
            if field is None:
                raise FormatError("field must come before maps", n)
            parts = rest.split()
            if len(parts) != 3:
                raise FormatError("map needs a name, a degree and RxC", n)
            name, d, shape = parts[0], parse_deg(parts[1], arity, n), parts[2]
            try:
                rows, cols = (int(x) for x in shape.split("x"))
            except ValueError as exc:
                raise FormatError(f"bad shape {shape!r}", n) from exc
            data = []
            for _ in range(rows):
                if pos >= len(lines):
                    raise FormatError("matrix rows run past the end of the file", n)
                rn, row = lines[pos]
                pos += 1
                vals = row.split()
                if len(vals) != cols:
                    raise FormatError(f"expected {cols} entries", rn)
                try:
                    data.append([field.parse_scalar(v) for v in vals])
                except (ValueError, ZeroDivisionError) as exc:
                    raise FormatError(f"bad scalar in {row!r}", rn) from exc
            maps.setdefault(name, {})
            if d in maps[name]:
                raise FormatError(f"duplicate block {name} at {parts[1]}", n)
            maps[name][d] = field.array(data, shape=(rows, cols))
        else:
            raise FormatError(f"unknown directive {word!r}", n)
    if not ended:
        raise FormatError("missing end")
    if field is None or kind is None or arity is None:
        raise FormatError("field, kind and arity are required")
    if kind in ARITY and ARITY[kind] != arity:
        raise FormatError(f"{kind} has arity {ARITY[kind]}")
    for name in maps:
        if name not in MAP_NAMES[kind]:
            raise FormatError(f"map {name!r} does not belong to a {kind}")
    return kind, _assemble(field, kind, arity, options, dims, maps)


def _assemble(F, kind, arity, options, dims, maps):
    space = GradedSpace(arity, dims)
    names = MAP_NAMES[kind]
    if kind == "gradedmap":
        off = parse_deg(options.get("offset", fmt_deg((0,) * arity)), arity)
        return GradedMap(F, space, space, off, maps.get("P", {}))
    if kind in ("bicomplex", "tricomplex"):
        blocks = [maps.get(nm, {}) for nm in names]
        if kind == "bicomplex":
            return Bicomplex.build(F, space, blocks, convention=options.get("convention", ANTICOMMUTE))
        return Tricomplex.build(F, space, blocks)
    if "window" not in options:
        raise FormatError(f"{kind} needs 'option window LO HI'")
    try:
        lo, hi = (int(x) for x in options["window"].split())
    except ValueError as exc:
        raise FormatError("bad window option") from exc
    alg = ZigzagAlgebra(F, lo, hi, options.get("truncated", "0") in ("1", "true"))
    cls = AModule if kind == "amodule" else AComplex
    return cls(alg, space, maps)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# writing

def kind_of(obj) -> str:
    if isinstance(obj, Bicomplex):
        return "bicomplex"
    if isinstance(obj, Tricomplex):
        return "tricomplex"
    if isinstance(obj, AComplex):
        return "acomplex"
    if isinstance(obj, AModule):
        return "amodule"
    if isinstance(obj, GradedMap):
        return "gradedmap"
    raise ContractError(f"cannot serialize {type(obj).__name__}")


def _named_maps(obj, kind):
    if kind in ("bicomplex", "tricomplex"):
        return list(zip(MAP_NAMES[kind], obj.diffs))
    if kind == "gradedmap":
        return [("P", obj)]
    return [(nm, obj.maps[nm]) for nm in MAP_NAMES[kind]]


def serialize(obj) -> str:
    kind = kind_of(obj)
    F = obj.field
    space = obj.source if kind == "gradedmap" else obj.space
    out = [HEADER, f"field {F}", f"kind {kind}", f"arity {space.arity}"]
    if kind == "bicomplex" and obj.convention != ANTICOMMUTE:
        out.append(f"option convention {obj.convention}")
    if kind in ("amodule", "acomplex"):
        out.append(f"option window {obj.alg.lo} {obj.alg.hi}")
        if obj.alg.truncated:
            out.append("option truncated 1")
    if kind == "gradedmap":
        out.append(f"option offset {fmt_deg(obj.offset)}")
    for d, m in sorted(space.items()):
        out.append(f"dim {fmt_deg(d)} {m}")
    for name, g in _named_maps(obj, kind):
        for d, B in sorted(g.blocks()):
            out.append(f"map {name} {fmt_deg(d)} {B.shape[0]}x{B.shape[1]}")
            for row in B:
                out.append(" ".join(F.format_scalar(x) for x in row))
    out.append("end")
    return "\n".join(out) + "\n"


def save(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(obj))
