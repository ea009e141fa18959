"""Experiment drivers: refinement studies, penalty sweeps, single solves.

Every driver writes a CSV with a fixed column order and the literal marker
"NA" for cells that could not be computed; a level that fails to solve is
recorded and the remaining levels still run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .analysis import convergence_rate, error_report
from .mesh import unit_square_mesh
from .problem import quartic_example
from .solver import solve_problem
from .vtk_io import write_vtk

#: penalty defaults per polynomial degree
DEFAULT_GAMMA = {1: 0.01, 2: 0.001}
DEFAULT_LEVELS = (8, 16, 32, 64)
DEFAULT_SWEEP_GAMMAS = tuple(np.logspace(-4.0, 0.0, 9))

CONVERGENCE_COLUMNS = ("level", "n", "h", "dofs_V", "dofs_W", "global_l2",
                       "local_l2", "h1_semi", "stab_u", "stab_z", "eta",
                       "rate_local_l2", "rate_stab")
SWEEP_COLUMNS = ("gamma", "n", "h", "dofs_V", "dofs_W", "global_l2",
                 "local_l2", "h1_semi", "stab_u", "stab_z", "eta")

NA = "NA"


@dataclass(frozen=True)
class RunConfig:
    degree: int = 1
    sw_variant: str = "jump"
    gamma_v: Optional[float] = None
    gamma_w: Optional[float] = None
    levels: tuple = DEFAULT_LEVELS
    jitter: float = 0.0
    seed: int = 0
    output_path: Optional[str] = None
    emit_fields: bool = False

    def __post_init__(self):
        if self.degree not in (1, 2):
            raise ValueError("degree must be 1 or 2")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("levels must be strictly increasing")
        for g in (self.gamma_v, self.gamma_w):
            if g is not None and g <= 0:
                raise ValueError("penalty parameters must be positive")

    @property
    def resolved_gamma_v(self):
        return DEFAULT_GAMMA[self.degree] if self.gamma_v is None else self.gamma_v

    @property
    def resolved_gamma_w(self):
        return DEFAULT_GAMMA[self.degree] if self.gamma_w is None else self.gamma_w


@dataclass
class LevelResult:
    level: int
    n: int
    report: object = None          # ErrorReport or None on failure
    error: Optional[str] = None
    rate_local_l2: Optional[float] = None
    rate_stab: Optional[float] = None


def solve_level(config, n, gamma_v=None, gamma_w=None):
    """One full pipeline run on an n-level mesh.  Returns (solution, report)."""
    mesh = unit_square_mesh(n, config.jitter, config.seed)
    problem = quartic_example()
    gv = config.resolved_gamma_v if gamma_v is None else gamma_v
    gw = config.resolved_gamma_w if gamma_w is None else gamma_w
    solution, trial, test, blocks = solve_problem(
        mesh, config.degree, problem, gv, gw, config.sw_variant)
    report = error_report(solution, trial, test, blocks, problem)
    return solution, trial, report


def run_convergence(config):
    """Refinement study over config.levels; returns per-level results."""
    results = []
    for idx, n in enumerate(config.levels):
        row = LevelResult(level=idx, n=n)
        try:
            _, _, row.report = solve_level(config, n)
        except Exception as err:  # keep remaining levels running
            row.error = f"{type(err).__name__}: {err}"
        results.append(row)

    for prev, cur in zip(results, results[1:]):
        if prev.report is None or cur.report is None:
            continue
        hs = (prev.report.h, cur.report.h)
        cur.rate_local_l2 = convergence_rate(
            (prev.report.local_l2, cur.report.local_l2), hs)[0]
        cur.rate_stab = convergence_rate(
            (prev.report.stab_u + prev.report.stab_z,
             cur.report.stab_u + cur.report.stab_z), hs)[0]

    if config.output_path:
        write_convergence_csv(config.output_path, results)
    return results


def run_sweep(config, gammas=DEFAULT_SWEEP_GAMMAS, n=64):
    """One solve per penalty value with gamma_v = gamma_w = gamma, fixed mesh."""
    results = []
    for gamma in gammas:
        row = {"gamma": float(gamma), "n": n, "report": None, "error": None}
        try:
            _, _, row["report"] = solve_level(config, n, gamma_v=float(gamma),
                                              gamma_w=float(gamma))
        except Exception as err:
            row["error"] = f"{type(err).__name__}: {err}"
        results.append(row)
    if config.output_path:
        write_sweep_csv(config.output_path, results)
    return results


def run_single(config, n):
    """Single solve; optionally dumps vertex fields as legacy VTK."""
    solution, trial, report = solve_level(config, n)
    if config.emit_fields and config.output_path:
        mesh = trial.mesh
        problem = quartic_example()
        nv = mesh.num_vertices
        exact = problem.exact_u(mesh.vertices[:, 0], mesh.vertices[:, 1])
        write_vtk(config.output_path, mesh, {
            "u_h": solution.u[:nv],
            "z_h": solution.z[:nv],
            "error": exact - solution.u[:nv],
        })
    return solution, report


# ---------------------------------------------------------------------------
# CSV output

def _fmt(value):
    if value is None:
        return NA
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{value:.12e}"


def _report_cells(report):
    if report is None:
        return [NA] * 9
    return [_fmt(report.h), _fmt(report.dofs_v), _fmt(report.dofs_w),
            _fmt(report.global_l2), _fmt(report.local_l2), _fmt(report.h1_semi),
            _fmt(report.stab_u), _fmt(report.stab_z), _fmt(report.eta)]


def write_convergence_csv(path, results):
    lines = [",".join(CONVERGENCE_COLUMNS)]
    for row in results:
        cells = [str(row.level), str(row.n)] + _report_cells(row.report)
        cells += [_fmt(row.rate_local_l2), _fmt(row.rate_stab)]
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_sweep_csv(path, results):
    lines = [",".join(SWEEP_COLUMNS)]
    for row in results:
        cells = [_fmt(row["gamma"]), str(row["n"])] + _report_cells(row["report"])
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
