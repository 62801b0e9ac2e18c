"""CSV and plot-script emission.

CSV files: comma separated, one header row, LF line endings, every number
written with 15 significant digits.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def _fmt(v) -> str:
    return f"{float(v):.15g}"


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"row of length {len(row)} does not match header of {len(header)}")
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def read_csv(path) -> dict[str, np.ndarray]:
    """Read a file written by :func:`write_csv` into named columns."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, i] for i, name in enumerate(header)}


RAY_COLUMNS = ("s", "t", "x", "y", "z", "px", "py", "pz", "W", "residual")
TRANSPORT_COLUMNS = ("s", "re_up", "im_up", "re_down", "im_down", "sx", "sy", "sz", "amp", "G")
OSCILLATOR_COLUMNS = ("s", "x", "y", "z", "gWx", "gWy", "gWz", "Lx", "Ly", "Lz", "lambda",
                      "re_up", "im_up", "re_down", "im_down", "residual")
EM_COLUMNS = ("s", "x", "y", "z", "qx", "qy", "qz", "re_ux", "im_ux", "re_uy", "im_uy",
              "re_uz", "im_uz", "transversality", "residual", "frenet_angle")


def write_ray_csv(path, ray) -> Path:
    rows = (
        (ray.s[i], ray.t[i], *ray.x[i], *ray.p[i], ray.W[i], ray.residual[i])
        for i in range(len(ray.s))
    )
    return write_csv(path, RAY_COLUMNS, rows)


def write_transport_csv(path, result) -> Path:
    gn = np.linalg.norm(result.G, axis=1)
    rows = (
        (result.s[i], result.u[i, 0].real, result.u[i, 0].imag, result.u[i, 1].real,
         result.u[i, 1].imag, *result.bloch[i], result.amp[i], gn[i])
        for i in range(len(result.s))
    )
    return write_csv(path, TRANSPORT_COLUMNS, rows)


def write_oscillator_csv(path, solutions) -> Path:
    rows = (
        (d.s, *d.x, *d.gradW, *d.L, d.lam, d.spin[0].real, d.spin[0].imag,
         d.spin[1].real, d.spin[1].imag, d.residual)
        for d in solutions
    )
    return write_csv(path, OSCILLATOR_COLUMNS, rows)


def write_em_csv(path, ray, frenet_angle=None) -> Path:
    if frenet_angle is None:
        frenet_angle = np.full(len(ray.s), np.nan)
    tr = ray.transversality()
    rows = []
    for i in range(len(ray.s)):
        u = ray.u[i]
        rows.append((ray.s[i], *ray.x[i], *ray.q[i], u[0].real, u[0].imag, u[1].real, u[1].imag,
                     u[2].real, u[2].imag, tr[i], ray.residual[i], frenet_angle[i]))
    return write_csv(path, EM_COLUMNS, rows)


_PLOT_TEMPLATE = '''"""Plot {title} from {csv}. Requires matplotlib."""
import csv
from pathlib import Path

import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
with open(here / "{csv}") as fh:
    rows = list(csv.DictReader(fh))
cols = {{k: [float(r[k]) for r in rows] for k in rows[0]}}

fig, ax = plt.subplots()
for name in {ycols!r}:
    ax.plot(cols["{xcol}"], cols[name], label=name)
ax.set_xlabel("{xcol}")
ax.legend()
ax.set_title("{title}")
fig.savefig(here / "{png}", dpi=120)
'''


def write_plot_script(path, csv_name: str, xcol: str, ycols: Sequence[str], title: str) -> Path:
    path = Path(path)
    png = Path(csv_name).with_suffix(".png").name
    text = _PLOT_TEMPLATE.format(csv=csv_name, xcol=xcol, ycols=tuple(ycols), title=title, png=png)
    path.write_text(text, encoding="utf-8", newline="\n")
    return path
