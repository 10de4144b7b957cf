"""Benchmark suites: each model under each engine configuration, as TSV."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor

from .builtins import GAME_PROFILE, builtin
from .incr import DisjunctiveCertificate, IncrementalError, solve_incremental
from .mono import Certificate, EngineOptions, Exhausted, Timeout, solve_monolithic

COLUMNS = ("model", "mode", "result", "rounds", "shapes", "wall-time")
MODES = ("mono", "incr", "incr+inv", "incr+symm", "incr+inv+symm")
SYMMETRIC = {"israeli-jalfon", "lehmann-rabin"}

SUITES = {
    "default": [(m, mode) for m in ("flip", "israeli-jalfon", "herman-line", "take-away", "nim")
                for mode in ("mono", "incr", "incr+inv")] + [("israeli-jalfon", "incr+symm")],
}
SUITES["full"] = SUITES["default"] + [("lehmann-rabin", "incr+inv+symm")]
CELL_TIMEOUT = {"default": 600.0, "full": 7200.0}


def applicable(model: str, mode: str) -> bool:
    """Inapplicable cells are printed as ``---``."""
    if model in GAME_PROFILE and mode != "mono":
        return False
    if "symm" in mode and model not in SYMMETRIC:
        return False
    return True


def _shape(s) -> str:
    return "x".join(map(str, s)) if s else "-"


def run_cell(model: str, mode: str, timeout: float, seed: int = 0) -> tuple:
    if not applicable(model, mode):
        return (model, mode, "---", "---", "---", "---")
    g = builtin(model)
    opts = EngineOptions(timeout=timeout, seed=seed, game_profile=model in GAME_PROFILE,
                         with_invariant="inv" in mode, with_symmetry="symm" in mode)
    start = time.monotonic()
    try:
        if mode == "mono":
            r = solve_monolithic(g, opts)
        else:
            r = solve_incremental(g, opts)
    except IncrementalError as e:
        return (model, mode, "error", "-", type(e).__name__, f"{time.monotonic() - start:.2f}")
    wall = f"{time.monotonic() - start:.2f}"
    if isinstance(r, Certificate):
        return (model, mode, "proved", str(r.rounds), _shape(r.shape), wall)
    if isinstance(r, DisjunctiveCertificate):
        shapes = ";".join(_shape(p.shape) for p in r.pieces)
        if r.invariants:
            shapes += "|" + ";".join(_shape(i.shape) for i in r.invariants)
        return (model, mode, "proved", str(r.rounds), shapes or "-", wall)
    if isinstance(r, Timeout):
        return (model, mode, "timeout", str(r.rounds), _shape(r.shape), wall)
    assert isinstance(r, Exhausted)
    return (model, mode, "exhausted", str(r.rounds), _shape(r.shape), wall)


def _cell(args):
    return run_cell(*args)


def bench(suite: str, timeout: float | None = None, seed: int = 0, jobs: int = 1):
    """Rows of the suite, in suite order."""
    if suite not in SUITES:
        raise KeyError(suite)
    timeout = CELL_TIMEOUT[suite] if timeout is None else timeout
    cells = [(m, mode, timeout, seed) for m, mode in SUITES[suite]]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            return list(ex.map(_cell, cells))
    return [run_cell(*c) for c in cells]


def to_tsv(rows) -> str:
    return "\n".join("\t".join(r) for r in [COLUMNS, *rows]) + "\n"
