"""Frozen figure recipes, one CSV per panel.

Recipe parameters that are free choices (grid windows, the drive strength of
the derivative-surface maps, the fluctuation-map window) are frozen here and
recorded in a sidecar <id>_meta.json for transparency.  All outputs are
deterministic for a given sample count, independent of the worker count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path

import numpy as np

from gpdiag.cascade import DEFAULT_GAMMA2, DEFAULT_GAMMA3_REAL, SystemParams
from gpdiag.gp import (
    PathSpec,
    UndefinedPhaseError,
    fix_global_phase,
    gp_curve,
    gp_derivative,
    pancharatnam_phase,
    sample_path,
    unwrap_phases,
)
from gpdiag.ideal import taylor_gp
from gpdiag.linops import DegenerateSteadyStateError, NoSteadyStateError, hermitian_eig
from gpdiag.photons import atomic_to_photon, concurrence, embed_two_qubit
from gpdiag.sweep import write_csv

RECIPE_IDS = ("fig2", "fig3a", "fig3b", "fig4", "fig5", "fig6")

# eigenvalue curves: (scheme tag, omega1, omega2)
_FIG2_COMBOS = (("ii", 6.0, 6.0), ("i", 6.0, 6.0), ("ii", 3.0, 6.0), ("i", 3.0, 6.0))
_FIG2_DELTA = (-6.0, 6.0)

_FIG3_DELTA = (-6.0, 6.0)
_FIG3_DOMEGA = (-4.0, 4.0)
_FIG3_OMEGA2 = 6.0

# derivative-surface windows around (delta_bar = 0, X0); the drive strength is
# chosen so the closed-form slope contrast between the windows is resolved
_FIG4_OMEGA2 = 2.0
_FIG4_DELTA = (-0.5, 0.5)
_FIG4_DX = (-0.3, 0.3)
_FIG4_DX_SAMPLES = 13
_FIG4_WINDOWS = (("separable", 0.0), ("bell", math.pi / 4.0))

# gamma_g(delta1) sweeps: (panel tag, omega1, omega2, delta2)
_FIG5_SETS = (
    ("ab", 6.0, 6.0, 0.0),
    ("cd", 3.0, 6.0, 0.0),
    ("ef", 6.0, 3.0, 0.0),
    ("gh", 6.0, 6.0, 3.0),
    ("ij", 1.5, 6.0, 0.0),
)
_FIG5_DELTA1 = (-3.0, 3.0)

# stability map: fluctuations applied to the (6, 6) sweep of fig5 panel a
_FIG6_DFLUCT = (-2.0, 2.0)
_FIG6_OMFLUCT = (-1.0, 1.0)
_FIG6_GRID = 21
_FIG6_OMEGA2 = 6.0


@dataclass
class RecipeResult:
    files: list = field(default_factory=list)
    undefined_points: int = 0


def _pmap(fn, payloads, jobs):
    if jobs > 1 and len(payloads) > 1:
        with Pool(processes=jobs) as pool:
            return pool.map(fn, payloads, chunksize=1)
    return [fn(p) for p in payloads]


def _write_meta(out_dir: Path, recipe_id: str, meta: dict) -> Path:
    path = out_dir / f"{recipe_id}_meta.json"
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(meta, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path


def _photon_steady(p: SystemParams):
    from gpdiag.cascade import steady_state

    return atomic_to_photon(steady_state(p))


# ---------------------------------------------------------------------------
# fig2: steady-state eigenvalues vs two-photon detuning


def _fig2_column(payload):
    tag, o1, o2, gamma2, gamma3, deltas = payload
    rows = []
    for d in deltas:
        g3 = 0.0 if tag == "ii" else gamma3
        p = SystemParams(o1, o2, d, 0.0, gamma2, g3)
        try:
            lam = hermitian_eig(_photon_steady(p)).eigenvalues[::-1]
            rows.append([d, float(lam[0]), float(lam[1]), float(lam[2])])
        except (DegenerateSteadyStateError, NoSteadyStateError):
            rows.append([d, None, None, None])
    return rows


def _run_fig2(out_dir, samples, jobs, gamma2, gamma3):
    deltas = np.linspace(*_FIG2_DELTA, samples)
    payloads = [(tag, o1, o2, gamma2, gamma3, deltas) for tag, o1, o2 in _FIG2_COMBOS]
    results = _pmap(_fig2_column, payloads, jobs)
    result = RecipeResult()
    for (tag, o1, o2), rows in zip(_FIG2_COMBOS, results):
        path = out_dir / f"fig2_{tag}_{o1:g}_{o2:g}.csv"
        write_csv(path, ["delta", "lambda1", "lambda2", "lambda3"], rows)
        result.files.append(path)
        result.undefined_points += sum(1 for r in rows if r[1] is None)
    meta = {
        "recipe": "fig2",
        "delta_range": list(_FIG2_DELTA),
        "delta_is": "delta1 (delta2 = 0)",
        "samples": samples,
        "combos": [{"scheme": t, "omega1": o1, "omega2": o2} for t, o1, o2 in _FIG2_COMBOS],
        "gamma2": gamma2,
        "gamma3_scheme_i": gamma3,
    }
    result.files.append(_write_meta(out_dir, "fig2", meta))
    return result


# ---------------------------------------------------------------------------
# fig3: concurrence over (two-photon detuning, omega1 - omega2)


def _fig3_column(payload):
    dom, scheme, gamma2, gamma3, deltas = payload
    o1 = _FIG3_OMEGA2 + dom
    g3 = 0.0 if scheme == "II" else gamma3
    out = []
    for d in deltas:
        p = SystemParams(o1, _FIG3_OMEGA2, d, 0.0, gamma2, g3)
        try:
            out.append(concurrence(embed_two_qubit(_photon_steady(p))))
        except (DegenerateSteadyStateError, NoSteadyStateError):
            out.append(None)
    return out


def _run_fig3(recipe_id, out_dir, samples, jobs, gamma2, gamma3):
    scheme = "II" if recipe_id == "fig3a" else "I"
    deltas = np.linspace(*_FIG3_DELTA, samples)
    doms = np.linspace(*_FIG3_DOMEGA, samples)
    payloads = [(dom, scheme, gamma2, gamma3, deltas) for dom in doms]
    columns = _pmap(_fig3_column, payloads, jobs)
    rows = []
    undefined = 0
    for i, d in enumerate(deltas):
        for j, dom in enumerate(doms):
            value = columns[j][i]
            undefined += value is None
            rows.append([float(d), float(dom), value])
    path = out_dir / f"{recipe_id}.csv"
    write_csv(path, ["delta", "omega1_minus_omega2", "concurrence"], rows)
    meta = {
        "recipe": recipe_id,
        "scheme": scheme,
        "delta_range": list(_FIG3_DELTA),
        "delta_is": "delta1 (delta2 = 0)",
        "omega1_minus_omega2_range": list(_FIG3_DOMEGA),
        "omega2": _FIG3_OMEGA2,
        "samples_per_axis": samples,
        "gamma2": gamma2,
        "gamma3": 0.0 if scheme == "II" else gamma3,
    }
    result = RecipeResult([path, _write_meta(out_dir, recipe_id, meta)], undefined)
    return result


# ---------------------------------------------------------------------------
# fig4: derivative of the near-resonance phase over (delta offset, dX offset)


def _fig4_ideal_column(payload):
    x0, dx, gamma2, deltas = payload
    g21 = gamma2 * math.cos(x0) / (2.0 * _FIG4_OMEGA2)
    gammas = unwrap_phases([taylor_gp(x0, d, dx, g21) for d in deltas])
    deriv = gp_derivative(list(zip(deltas.tolist(), gammas)))
    return [v for _, v in deriv]


def _fig4_numeric_column(payload):
    x0, dx, gamma2, gamma3, deltas, ref = payload
    x = x0 + dx
    if x < 0.0 or x >= math.pi / 2.0 - 1e-12:
        return [None] * len(deltas)
    o1 = math.tan(x) * _FIG4_OMEGA2
    w = math.hypot(o1, _FIG4_OMEGA2)
    gammas = []
    for d in deltas:
        p = SystemParams(o1, _FIG4_OMEGA2, d * w, 0.0, gamma2, gamma3)
        try:
            rho = _photon_steady(p)
            vec = hermitian_eig(rho).eigenvectors[:, -1]
            gammas.append(pancharatnam_phase(ref, fix_global_phase(vec, pivot=0)))
        except (DegenerateSteadyStateError, NoSteadyStateError, UndefinedPhaseError):
            gammas.append(None)
    if any(g is None for g in gammas):
        return [None] * len(deltas)
    gammas = unwrap_phases(gammas)
    deriv = gp_derivative(list(zip(deltas.tolist(), gammas)))
    return [v for _, v in deriv]


def _run_fig4(out_dir, samples, jobs, gamma2, gamma3):
    deltas = np.linspace(*_FIG4_DELTA, samples)
    dxs = np.linspace(*_FIG4_DX, _FIG4_DX_SAMPLES)
    result = RecipeResult()
    for window, x0 in _FIG4_WINDOWS:
        surfaces = {}
        payloads = [(x0, dx, gamma2, deltas) for dx in dxs]
        surfaces["ideal"] = _pmap(_fig4_ideal_column, payloads, jobs)
        for variant, g3 in (("scheme2", 0.0), ("scheme1", gamma3)):
            o1_base = math.tan(x0) * _FIG4_OMEGA2
            base = SystemParams(o1_base, _FIG4_OMEGA2, 0.0, 0.0, gamma2, g3)
            ref = fix_global_phase(
                hermitian_eig(_photon_steady(base)).eigenvectors[:, -1], pivot=0
            )
            payloads = [(x0, dx, gamma2, g3, deltas, ref) for dx in dxs]
            surfaces[variant] = _pmap(_fig4_numeric_column, payloads, jobs)
        for variant, columns in surfaces.items():
            rows = []
            for i, d in enumerate(deltas):
                for j, dx in enumerate(dxs):
                    value = columns[j][i]
                    result.undefined_points += value is None
                    rows.append([float(d), float(dx), value])
            path = out_dir / f"fig4_{window}_{variant}.csv"
            write_csv(path, ["delta_offset", "dX", "dgamma_dDelta"], rows)
            result.files.append(path)
    meta = {
        "recipe": "fig4",
        "windows": {w: x0 for w, x0 in _FIG4_WINDOWS},
        "delta_offset_range": list(_FIG4_DELTA),
        "dX_range": list(_FIG4_DX),
        "delta_samples": samples,
        "dX_samples": _FIG4_DX_SAMPLES,
        "omega2": _FIG4_OMEGA2,
        "gamma2": gamma2,
        "gamma3_scheme1": gamma3,
        "variants": {
            "ideal": "closed-form second-order expansion at the window base point",
            "scheme2": "two-point phase of the dominant eigenvector of the ideal-system "
                       "steady state vs the window base state, |00>-component gauge",
            "scheme1": "same construction for the real system (emitted for inspection)",
        },
        "note": "dgamma_dDelta is d(phase)/d(delta_bar) along the delta axis at fixed dX",
    }
    result.files.append(_write_meta(out_dir, "fig4", meta))
    return result


# ---------------------------------------------------------------------------
# fig5: gamma_g and its derivative along delta1


def _fig5_curve(payload):
    tag, o1, o2, d2, gamma2, gamma3, samples = payload
    base = SystemParams(o1, o2, 0.0, d2, gamma2, gamma3)
    spec = PathSpec(base, "delta1", *_FIG5_DELTA1, samples)
    curve = gp_curve(spec)
    if any(g is None for _, g in curve):
        deriv = [None] * len(curve)
    else:
        deriv = [v for _, v in gp_derivative(curve)]
    return [[s, g, dv] for (s, g), dv in zip(curve, deriv)]


def _run_fig5(out_dir, samples, jobs, gamma2, gamma3):
    payloads = [(tag, o1, o2, d2, gamma2, gamma3, samples) for tag, o1, o2, d2 in _FIG5_SETS]
    results = _pmap(_fig5_curve, payloads, jobs)
    result = RecipeResult()
    for (tag, o1, o2, d2), rows in zip(_FIG5_SETS, results):
        path = out_dir / f"fig5_{tag}.csv"
        write_csv(path, ["delta1", "gamma_g", "dgamma"], rows)
        result.files.append(path)
        result.undefined_points += sum(1 for r in rows if r[1] is None or r[2] is None)
    meta = {
        "recipe": "fig5",
        "scheme": "I",
        "delta1_range": list(_FIG5_DELTA1),
        "samples": samples,
        "panels": [{"file": f"fig5_{t}.csv", "omega1": o1, "omega2": o2, "delta2": d2}
                   for t, o1, o2, d2 in _FIG5_SETS],
        "gamma2": gamma2,
        "gamma3": gamma3,
        "anchor": "gamma_g = 0 at delta1 = -3",
    }
    result.files.append(_write_meta(out_dir, "fig5", meta))
    return result


# ---------------------------------------------------------------------------
# fig6: stability of the full-sweep gamma_g under parameter fluctuations


def _fig6_cell(payload):
    dom, dfl, gamma2, gamma3, samples = payload
    base = SystemParams(_FIG6_OMEGA2 + dom, _FIG6_OMEGA2, 0.0, dfl, gamma2, gamma3)
    spec = PathSpec(base, "delta1", *_FIG5_DELTA1, samples)
    try:
        curve = gp_curve(spec)
    except (DegenerateSteadyStateError, NoSteadyStateError, UndefinedPhaseError):
        return None
    g = curve[-1][1]
    return g


def _run_fig6(out_dir, samples, jobs, gamma2, gamma3):
    doms = np.linspace(*_FIG6_OMFLUCT, _FIG6_GRID)
    dfls = np.linspace(*_FIG6_DFLUCT, _FIG6_GRID)
    payloads = [(dom, dfl, gamma2, gamma3, samples) for dom in doms for dfl in dfls]
    cells = _pmap(_fig6_cell, payloads, jobs)
    grid = {}
    for (dom, dfl, *_), g in zip(payloads, cells):
        grid[(dom, dfl)] = g
    base = grid[(0.0, 0.0)]
    if base is None or abs(base) < 1e-12:
        raise NoSteadyStateError("fig6 reference sweep produced no usable gamma_g")
    rows = []
    undefined = 0
    for dfl in dfls:
        for dom in doms:
            g = grid[(dom, dfl)]
            pct = None if g is None else (g - base) / abs(base) * 100.0
            undefined += pct is None
            rows.append([float(dfl), float(dom), pct])
    path = out_dir / "fig6.csv"
    write_csv(path, ["delta", "omega1_minus_omega2", "gamma_g_change_percent"], rows)
    meta = {
        "recipe": "fig6",
        "cell": "percent change of the endpoint gamma_g of the delta1 in [-3, 3] sweep "
                "(omega1 = omega2 = 6 reference, scheme I) when omega1 -> 6 + x and "
                "the two-photon detuning is offset through delta2 = y",
        "delta_fluctuation_range": list(_FIG6_DFLUCT),
        "omega_fluctuation_range": list(_FIG6_OMFLUCT),
        "grid": [_FIG6_GRID, _FIG6_GRID],
        "path_samples": samples,
        "gamma2": gamma2,
        "gamma3": gamma3,
        "reference_gamma_g": base,
    }
    result = RecipeResult([path, _write_meta(out_dir, "fig6", meta)], undefined)
    return result


def run_recipe(recipe_id: str, out_dir, samples: int = 601, jobs: int = 1,
               gamma2: float = DEFAULT_GAMMA2, gamma3: float = DEFAULT_GAMMA3_REAL) -> RecipeResult:
    """Execute a figure recipe; returns the written files and undefined-point count."""
    if recipe_id not in RECIPE_IDS:
        raise ValueError(f"unknown recipe {recipe_id!r}; expected one of {RECIPE_IDS}")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if recipe_id == "fig2":
        return _run_fig2(out_dir, samples, jobs, gamma2, gamma3)
    if recipe_id in ("fig3a", "fig3b"):
        return _run_fig3(recipe_id, out_dir, samples, jobs, gamma2, gamma3)
    if recipe_id == "fig4":
        return _run_fig4(out_dir, samples, jobs, gamma2, gamma3)
    if recipe_id == "fig5":
        return _run_fig5(out_dir, samples, jobs, gamma2, gamma3)
    return _run_fig6(out_dir, samples, jobs, gamma2, gamma3)
