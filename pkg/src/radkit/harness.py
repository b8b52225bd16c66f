"""Benchmark matrix: systems x formulations -> model sizes, emission time, native losses."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from .emitter import EmitOptions, write_lp, write_mps
from .formulation import FormulationKind, ModelStats, add_radiality, build_core_model, model_stats
from .netmodel import Network, load_network, parse_network, to_per_unit
from .search import BudgetExceeded, SearchReport, fixed_branches, enumerate_radial, local_search_branch_exchange, multistart
from .topology import count_spanning_trees

log = logging.getLogger(__name__)

REFERENCE_LOSSES_KW = {
    "14bus": 605.92,
    "33bus": 139.55,
    "84bus": 469.87,
    "136bus": 280.14,
}
BUNDLED_SYSTEMS = ("14bus", "33bus", "84bus", "136bus", "417bus_synthetic")
CSV_HEADER = (
    "system,formulation,n_binary,n_continuous,n_linear,n_cone,nonzeros,"
    "emit_s,mode,losses_kw,target_kw,deviation_pct,solve_s,trees"
).split(",")
NATIVE_MODES = ("none", "auto", "exact", "local", "multistart")


def load_system(spec: str | Path) -> Network:
    """Load a network from a path, or from the bundled data by name (``33bus`` or ``33bus.net``)."""
    path = Path(spec)
    if path.exists():
        return load_network(path)
    name = path.name if path.suffix == ".net" else f"{path.name}.net"
    bundled = resources.files("radkit") / "data" / name
    if bundled.is_file():
        return parse_network(bundled.read_text(encoding="utf-8"))
    raise FileNotFoundError(f"no network file {spec!r} and no bundled system of that name")


@dataclass
class NativeResult:
    mode: str
    losses_kw: float
    seconds: float
    trees: int | None


@dataclass
class BenchRow:
    system: str
    formulation: FormulationKind
    stats: ModelStats | None = None
    emit_seconds: float | None = None
    native: NativeResult | None = None
    target_losses_kw: float | None = None
    deviation_pct: float | None = None
    error: str | None = None
    # filled by users running emitted files through an external solver
    solver_gap_pct: float | None = None
    solver_ram_mb: float | None = None


@dataclass
class ManifestEntry:
    system: str
    formulations: list[FormulationKind] = field(default_factory=lambda: list(FormulationKind))
    mode: str = "none"
    seed: int = 0
    starts: int = 20
    max_trees: int = 10**7
    emit_dir: Path | None = None

    def __post_init__(self) -> None:
        if self.mode not in NATIVE_MODES:
            raise ValueError(f"mode must be one of {', '.join(NATIVE_MODES)}")


def thread_count() -> int:
    raw = os.environ.get("RADKIT_THREADS", "")
    if raw.strip():
        value = int(raw)
        if value < 1:
            raise ValueError("RADKIT_THREADS must be a positive integer")
        return value
    return min(8, os.cpu_count() or 1)


def run_native(net: Network, mode: str, seed: int = 0, starts: int = 20, max_trees: int = 10**7) -> SearchReport:
    """Run one native search; ``auto`` enumerates when the tree count fits ``max_trees``."""
    if mode == "auto":
        count = count_spanning_trees(to_per_unit(net), *fixed_branches(net))
        mode = "exact" if count <= max_trees else "multistart"
    if mode == "exact":
        return enumerate_radial(net, max_trees=max_trees)
    if mode == "local":
        return local_search_branch_exchange(net)
    if mode == "multistart":
        return multistart(net, n_starts=starts, seed=seed)
    raise ValueError(f"unknown native mode {mode!r}")


def _emit_task(net: Network, pu: Network, kind: FormulationKind, emit_dir: Path | None):
    t0 = time.perf_counter()
    model = add_radiality(build_core_model(pu), kind, pu)
    lp = write_lp(model, EmitOptions("lp"))
    mps = write_mps(model, EmitOptions("mps"))
    seconds = time.perf_counter() - t0
    if emit_dir is not None:
        emit_dir.mkdir(parents=True, exist_ok=True)
        stem = f"{net.name}_{kind.value}"
        (emit_dir / f"{stem}.lp").write_text(lp, encoding="ascii", newline="\n")
        (emit_dir / f"{stem}.mps").write_text(mps, encoding="ascii", newline="\n")
    return model_stats(model), seconds


def run_bench(manifest: list[ManifestEntry], threads: int | None = None) -> list[BenchRow]:
    """Evaluate every (system, formulation) pair; failures land in the row's ``error``."""
    threads = threads or thread_count()
    rows: list[BenchRow] = []
    jobs = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for entry in manifest:
            try:
                net = load_system(entry.system)
                pu = to_per_unit(net)
                name = net.name
            except Exception as exc:  # recorded per row, never aborts the matrix
                for kind in entry.formulations:
                    rows.append(BenchRow(Path(entry.system).stem, kind, error=f"{type(exc).__name__}: {exc}"))
                    jobs.append(None)
                continue
            native = None
            if entry.mode != "none":
                native = pool.submit(run_native, net, entry.mode, entry.seed, entry.starts, entry.max_trees)
            for kind in entry.formulations:
                rows.append(BenchRow(name, kind, target_losses_kw=REFERENCE_LOSSES_KW.get(name)))
                jobs.append((pool.submit(_emit_task, net, pu, kind, entry.emit_dir), native))
        for row, job in zip(rows, jobs):
            if job is None:
                continue
            emit, native = job
            try:
                row.stats, row.emit_seconds = emit.result()
            except Exception as exc:
                row.error = f"{type(exc).__name__}: {exc}"
            if native is not None:
                try:
                    report = native.result()
                    row.native = NativeResult(
                        report.mode, report.best_losses_kw, report.wall_time, report.trees_enumerated
                    )
                except BudgetExceeded as exc:
                    row.error = str(exc)
                except Exception as exc:
                    row.error = f"{type(exc).__name__}: {exc}"
            if row.native is not None and row.target_losses_kw is not None:
                row.deviation_pct = 100.0 * abs(row.native.losses_kw - row.target_losses_kw) / row.target_losses_kw
    return rows


def _num(value: float | None, digits: int) -> str:
    if value is None:
        return ""
    if math.isinf(value):
        return "inf"
    return f"{value:.{digits}f}"


def _csv_record(row: BenchRow) -> list[str]:
    s, nat = row.stats, row.native
    return [
        row.system,
        row.formulation.value,
        "" if s is None else str(s.n_binary),
        "" if s is None else str(s.n_continuous),
        "" if s is None else str(s.n_linear_constraints),
        "" if s is None else str(s.n_cone_constraints),
        "" if s is None else str(s.nonzeros),
        _num(row.emit_seconds, 4),
        "" if nat is None else nat.mode,
        _num(None if nat is None else nat.losses_kw, 4),
        _num(row.target_losses_kw, 2),
        _num(row.deviation_pct, 4),
        _num(None if nat is None else nat.seconds, 4),
        "" if nat is None or nat.trees is None else str(nat.trees),
    ]


def _finite(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    return value


def _json_record(row: BenchRow) -> dict:
    rec = _finite(asdict(row))
    rec["formulation"] = row.formulation.value
    return rec


def _markdown(rows: list[BenchRow]) -> str:
    systems = list(dict.fromkeys(r.system for r in rows))
    kinds = list(dict.fromkeys(r.formulation for r in rows))
    cell = {}
    for r in rows:
        if r.native is not None and math.isfinite(r.native.losses_kw):
            cell[(r.formulation, r.system)] = f"{r.native.losses_kw:.2f}"
    lines = ["| formulation | " + " | ".join(systems) + " |", "|---|" + "---|" * len(systems)]
    for kind in kinds:
        values = [cell.get((kind, s), "*") for s in systems]
        lines.append(f"| {kind.value} | " + " | ".join(values) + " |")
    return "\n".join(lines) + "\n"


def render_report(rows: list[BenchRow], fmt: str) -> str:
    """Serialise rows as ``csv``, ``json`` or ``markdown`` (formulations x systems)."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(_csv_record(row))
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([_json_record(r) for r in rows], indent=2, allow_nan=False, default=_json_default) + "\n"
    if fmt in ("markdown", "markdown-table", "md"):
        return _markdown(rows)
    raise ValueError(f"unknown report format {fmt!r}")


def _json_default(value):
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"not JSON serialisable: {type(value).__name__}")
