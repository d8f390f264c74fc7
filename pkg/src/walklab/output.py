"""Deterministic CSV / JSON / SVG emitters and the matching readers.

CSV schemas (one header line, numbers at 17 significant digits so every
file round-trips losslessly):

    spinor state       n,re_R,im_R,re_L,im_L
    scalar state       n,re,im
    probability state  n,p
    density surface    t,n,rho

JSON files carry {"config": ..., "results": ..., "metrics": ...} with
sorted keys.  SVG heatmaps are self-contained, one rect per (n, t) cell,
grayscale with lightness (rho / rho_max)^0.5 to match the visual dynamic
range of a density plot.  Nothing here depends on wall-clock state, so
repeated runs are byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .lattice import ProbabilityField, ScalarWaveField, SpinorField

SPINOR_HEADER = "n,re_R,im_R,re_L,im_L"
SCALAR_HEADER = "n,re,im"
PROBABILITY_HEADER = "n,p"
SURFACE_HEADER = "t,n,rho"

SVG_CELL_PX = 3


def fmt(value: float) -> str:
    """17 significant digits: enough for exact float round-trips."""
    return format(float(value), ".17g")


def write_state_csv(path, state) -> None:
    lines = []
    if isinstance(state, SpinorField):
        lines.append(SPINOR_HEADER)
        for n, zr, zl in zip(state.positions, state.psi_r, state.psi_l):
            lines.append(f"{n},{fmt(zr.real)},{fmt(zr.imag)},{fmt(zl.real)},{fmt(zl.imag)}")
    elif isinstance(state, ScalarWaveField):
        lines.append(SCALAR_HEADER)
        for n, z in zip(state.positions, state.amps):
            lines.append(f"{n},{fmt(z.real)},{fmt(z.imag)}")
    elif isinstance(state, ProbabilityField):
        lines.append(PROBABILITY_HEADER)
        for n, p in zip(state.positions, state.values):
            lines.append(f"{n},{fmt(p)}")
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_state_csv(path):
    """Parse a state file back into the field type its header names."""
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty state file")
    header = lines[0].strip()
    rows = [ln.split(",") for ln in lines[1:]]
    if header == SPINOR_HEADER:
        psi_r = np.array([complex(float(r[1]), float(r[2])) for r in rows])
        psi_l = np.array([complex(float(r[3]), float(r[4])) for r in rows])
        return SpinorField(psi_r, psi_l)
    if header == SCALAR_HEADER:
        amps = np.array([complex(float(r[1]), float(r[2])) for r in rows])
        return ScalarWaveField(amps)
    if header == PROBABILITY_HEADER:
        return ProbabilityField(np.array([float(r[1]) for r in rows]))
    raise ValueError(f"{path}: unrecognized state header {header!r}")


def write_surface_csv(path, times, positions, rho: np.ndarray) -> None:
    """rho[i, j] is the density at times[i], positions[j]."""
    lines = [SURFACE_HEADER]
    for i, t in enumerate(times):
        for j, n in enumerate(positions):
            lines.append(f"{fmt(t)},{n},{fmt(rho[i, j])}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_json(path, config: dict, results: dict, metrics: dict) -> None:
    payload = {"config": config, "results": results, "metrics": metrics}
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _gray(rho: float, rho_max: float) -> str:
    lightness = np.sqrt(rho / rho_max) if rho_max > 0 else 0.0
    level = int(round(255 * min(1.0, max(0.0, lightness))))
    return f"#{level:02x}{level:02x}{level:02x}"


def write_surface_svg(path, times, positions, rho: np.ndarray, meta: dict) -> None:
    """Self-contained heatmap: one rect per (n, t) cell, time running upward."""
    n_t, n_x = rho.shape
    width = n_x * SVG_CELL_PX
    height = n_t * SVG_CELL_PX
    rho_max = float(np.max(rho))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<desc>{json.dumps(meta, sort_keys=True)}</desc>",
    ]
    for i in range(n_t):
        y = (n_t - 1 - i) * SVG_CELL_PX
        for j in range(n_x):
            color = _gray(float(rho[i, j]), rho_max)
            x = j * SVG_CELL_PX
            parts.append(f'<rect x="{x}" y="{y}" width="{SVG_CELL_PX}" '
                         f'height="{SVG_CELL_PX}" fill="{color}"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
