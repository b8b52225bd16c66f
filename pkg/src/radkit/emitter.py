"""LP and MPS writers for :class:`~radkit.formulation.ModelIR`.

Both writers are pure functions of the model and options, so output is
byte-identical across runs. Numbers use ``format(v, ".{precision}g")`` with
negative zero folded to zero; lines end in LF and text is ASCII.

Rotated cones ``u*v >= p**2 + q**2`` become quadratic rows
``p^2 + q^2 - u*v <= 0``: bracketed terms in LP, ``QCMATRIX`` blocks in MPS.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

from .formulation import BINARY, ModelIR, ModelStats

SIGNATURE = "Generator: radkit"
MAX_NAME = 255
_LP_OK = re.compile(r"^[A-Za-z!\"#$%&()/,.;?@_`'{}|~][A-Za-z0-9!\"#$%&()/,.;?@_`'{}|~]*$")
_MPS_OK = re.compile(r"[!-~]+")
_TERMS_PER_LINE = 8


@dataclass(frozen=True)
class EmitOptions:
    format: str = "lp"
    precision: int = 12
    objective_name: str = "obj"

    def __post_init__(self) -> None:
        if self.format not in ("lp", "mps"):
            raise ValueError(f"format must be 'lp' or 'mps', got {self.format!r}")
        if not 6 <= self.precision <= 17:
            raise ValueError(f"precision must lie in [6, 17], got {self.precision}")


class EmitError(ValueError):
    pass


@lru_cache(maxsize=65536)
def fmt_number(value: float, precision: int) -> str:
    if value == 0.0:
        return "0"
    if math.isinf(value):
        return "+inf" if value > 0 else "-inf"
    return format(value, f".{precision}g")


def lp_name(name: str) -> str:
    """Map an IR name onto the LP character set."""
    out = name.replace("[", "(").replace("]", ")").replace("->", "~")
    if len(out) > MAX_NAME:
        raise EmitError(f"name longer than {MAX_NAME} characters: {name[:40]}...")
    if not _LP_OK.match(out):
        raise EmitError(f"name {name!r} contains characters not allowed in LP files")
    return out


def _mps_name(name: str) -> str:
    if len(name) > MAX_NAME:
        raise EmitError(f"name longer than {MAX_NAME} characters: {name[:40]}...")
    if not _MPS_OK.fullmatch(name):
        raise EmitError(f"name {name!r} is not a valid MPS name")
    return name


# --------------------------------------------------------------------------
# LP


def _lp_terms(pairs, names: list[str], prec: int) -> list[str]:
    tokens = []
    for idx, c in pairs:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = names[idx] if mag == 1.0 else f"{fmt_number(mag, prec)} {names[idx]}"
        tokens.append(f"{sign} {body}")
    if tokens and tokens[0].startswith("+ "):
        tokens[0] = tokens[0][2:]
    return tokens


def _wrap(head: str, tokens: list[str], tail: str) -> list[str]:
    if not tokens:
        tokens = ["0"]
    lines = []
    for start in range(0, len(tokens), _TERMS_PER_LINE):
        chunk = " ".join(tokens[start : start + _TERMS_PER_LINE])
        lines.append((head if start == 0 else "   ") + chunk)
    lines[-1] += tail
    return lines


def write_lp(model: ModelIR, opts: EmitOptions | None = None) -> str:
    opts = opts or EmitOptions("lp")
    prec = opts.precision
    names = [lp_name(v.name) for v in model.variables]
    obj = lp_name(opts.objective_name)
    out = [f"\\ {SIGNATURE}", "Minimize"]
    out += _wrap(f" {obj}: ", _lp_terms(model.objective, names, prec), "")
    out.append("Subject To")
    for row in model.linear:
        tokens = _lp_terms(zip(row.vars, row.coefs), names, prec)
        out += _wrap(f" {lp_name(row.name)}: ", tokens, f" {row.sense} {fmt_number(row.rhs, prec)}")
    for cone in model.cones:
        p, q, u, v = names[cone.p], names[cone.q], names[cone.u], names[cone.v]
        out.append(f" {lp_name(cone.name)}: [ {p} ^2 + {q} ^2 - {u} * {v} ] <= 0")
    bounds, binaries = [], []
    for name, var in zip(names, model.variables):
        if var.kind == BINARY:
            binaries.append(f" {name}")
        elif var.lb == var.ub:
            bounds.append(f" {name} = {fmt_number(var.lb, prec)}")
        elif math.isinf(var.lb) and math.isinf(var.ub):
            bounds.append(f" {name} free")
        else:
            bounds.append(f" {fmt_number(var.lb, prec)} <= {name} <= {fmt_number(var.ub, prec)}")
    if bounds:
        out.append("Bounds")
        out += bounds
    if binaries:
        out.append("Binaries")
        out += binaries
    out.append("End")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# MPS


def _pad(name: str) -> str:
    """Name field of the fixed-section layout, padded to 8 columns plus gap."""
    return f"{name:<8}  "


def write_mps(model: ModelIR, opts: EmitOptions | None = None) -> str:
    opts = opts or EmitOptions("mps")
    prec = opts.precision
    names = [_pad(_mps_name(v.name)) for v in model.variables]
    obj = _mps_name(opts.objective_name)
    row_names = [_mps_name(r.name) for r in model.linear]
    cone_names = [_mps_name(c.name) for c in model.cones]
    out = [f"* {SIGNATURE}", "NAME          radkit", "ROWS", f" N  {obj}"]
    code = {"<=": "L", "=": "E", ">=": "G"}
    for name, row in zip(row_names, model.linear):
        out.append(f" {code[row.sense]}  {name}")
    for name in cone_names:
        out.append(f" L  {name}")

    columns: list[list[tuple[str, float]]] = [[] for _ in model.variables]
    pobj = _pad(obj)
    for idx, c in model.objective:
        columns[idx].append((pobj, c))
    for name, row in zip(row_names, model.linear):
        prow = _pad(name)
        for idx, c in zip(row.vars, row.coefs):
            columns[idx].append((prow, c))
    out.append("COLUMNS")
    for name, entries in zip(names, columns):
        if not entries:
            entries = [(pobj, 0.0)]
        for prow, c in entries:
            out.append(f"    {name}{prow}{fmt_number(c, prec)}")

    out.append("RHS")
    for name, row in zip(row_names, model.linear):
        if row.rhs != 0.0:
            out.append(f"    RHS       {_pad(name)}{fmt_number(row.rhs, prec)}")

    out.append("BOUNDS")
    for name, var in zip(names, model.variables):
        bare = name.rstrip()
        if var.kind == BINARY:
            out.append(f" BV BND       {bare}")
        elif var.lb == var.ub:
            out.append(f" FX BND       {name}{fmt_number(var.lb, prec)}")
        elif math.isinf(var.lb) and math.isinf(var.ub):
            out.append(f" FR BND       {bare}")
        else:
            if math.isinf(var.lb):
                out.append(f" MI BND       {bare}")
            else:
                out.append(f" LO BND       {name}{fmt_number(var.lb, prec)}")
            if math.isinf(var.ub):
                out.append(f" PL BND       {bare}")
            else:
                out.append(f" UP BND       {name}{fmt_number(var.ub, prec)}")

    for name, cone in zip(cone_names, model.cones):
        p, q, u, v = names[cone.p], names[cone.q], names[cone.u], names[cone.v]
        out.append(f"QCMATRIX   {name}")
        out.append(f"    {p}{p}1")
        out.append(f"    {q}{q}1")
        out.append(f"    {u}{v}-0.5")
        out.append(f"    {v}{u}-0.5")
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def write_model(model: ModelIR, opts: EmitOptions) -> str:
    return write_lp(model, opts) if opts.format == "lp" else write_mps(model, opts)


# --------------------------------------------------------------------------
# round-trip counts


_NOT_NAME_START = frozenset("+-0123456789.<>=")


def _read_lp(lines: list[str]) -> ModelStats:
    sections = ("Minimize", "Subject To", "Bounds", "Binaries", "End")
    section = None
    n_lin = n_cone = nnz = n_bounds = n_bin = 0
    current_linear = False
    for line in lines[1:]:
        if line in sections:
            section = line
            continue
        if section is None or section == "End":
            raise ValueError(f"unexpected text outside sections: {line[:40]!r}")
        if section == "Subject To":
            if line[:3] == "   " and current_linear:
                body = line
            elif line[:1] == " " and line[1:2] != " ":
                _, _, body = line.partition(": ")
                if not body:
                    raise ValueError(f"malformed row: {line[:40]!r}")
                if body[0] == "[":
                    n_cone += 1
                    current_linear = False
                    continue
                n_lin += 1
                current_linear = True
            else:
                raise ValueError(f"malformed row: {line[:40]!r}")
            nnz += sum(1 for tok in body.split() if tok[0] not in _NOT_NAME_START)
        elif section == "Bounds":
            n_bounds += 1
        elif section == "Binaries":
            n_bin += 1
    if section != "End":
        raise ValueError("missing End")
    return ModelStats(n_bin, n_bounds, n_lin, n_cone, nnz)


def _split_sections(lines: list[str]) -> dict[str, list[str]]:
    heads = {"NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"}
    blocks: dict[str, list[str]] = {}
    current: list[str] | None = None
    for line in lines[1:]:
        if line[:1] != " ":
            word = line.split(maxsplit=1)[0] if line else ""
            if word == "QCMATRIX":
                current = blocks.setdefault("QCMATRIX", [])
                current.append(line)
                continue
            if word not in heads or word in blocks:
                raise ValueError(f"unexpected text: {line[:40]!r}")
            current = blocks.setdefault(word, [])
            continue
        if current is None:
            raise ValueError(f"unexpected text: {line[:40]!r}")
        current.append(line)
    if "ENDATA" not in blocks or blocks["ENDATA"]:
        raise ValueError("missing ENDATA")
    return blocks


def _read_mps(lines: list[str]) -> ModelStats:
    blocks = _split_sections(lines)
    objective = None
    rows: set[str] = set()
    for line in blocks.get("ROWS", []):
        kind, name = line.split()
        if kind == "N":
            objective = name
        elif kind in ("L", "E", "G"):
            rows.add(name)
        else:
            raise ValueError(f"unknown row type {kind!r}")
    cones = {line.split()[1] for line in blocks.get("QCMATRIX", []) if line[:1] != " "}
    columns: set[str] = set()
    nnz = 0
    for line in blocks.get("COLUMNS", []):
        col, row, _ = line.split()
        columns.add(col)
        if row != objective:
            if row not in rows or row in cones:
                raise ValueError(f"column entry for unknown row {row!r}")
            nnz += 1
    binaries = {line.split()[2] for line in blocks.get("BOUNDS", []) if line[1:3] == "BV"}
    return ModelStats(
        n_binary=len(binaries),
        n_continuous=len(columns - binaries),
        n_linear_constraints=len(rows - cones),
        n_cone_constraints=len(cones),
        nonzeros=nnz,
    )


def read_back_stats(text: str, fmt: str) -> ModelStats:
    """Recount a model from text written by :func:`write_lp` / :func:`write_mps`.

    Raises ValueError on text not produced by these writers.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    marker = {"lp": "\\ ", "mps": "* "}.get(fmt)
    if marker is None:
        raise ValueError(f"unknown format {fmt!r}")
    if not lines or lines[0] != marker + SIGNATURE:
        raise ValueError("text was not written by this emitter")
    return _read_lp(lines) if fmt == "lp" else _read_mps(lines)
