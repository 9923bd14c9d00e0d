"""Optional PNG output for quick looks; requires matplotlib."""

from __future__ import annotations

from pathlib import Path

import numpy as np


def emit(kind: str, out: Path, data) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    if kind == "stark_map":
        rows = data
        for m in sorted({r.m for r in rows}):
            levels = sorted({r.level_index for r in rows if r.m == m})
            for i in levels[:12]:
                pts = [(r.x, r.energy_over_B) for r in rows if r.m == m and r.level_index == i]
                xs, ys = zip(*pts)
                ax.plot(xs, ys, lw=0.8, color=f"C{m % 10}")
        ax.set_xlabel("x = d eps / B")
        ax.set_ylabel("E / B")
    elif kind == "couplings":
        arr = np.array([row[:8] for row in data], dtype=float)
        for r in np.unique(arr[:, 1]):
            sel = arr[:, 1] == r
            ax.plot(arr[sel, 0], arr[sel, 2], label=f"J_xy, r={r:g} nm")
            ax.plot(arr[sel, 0], arr[sel, 4], ls="--", label=f"J_z, r={r:g} nm")
        ax.set_xlabel("x")
        ax.set_ylabel("GHz")
        ax.legend(fontsize=7)
    elif kind == "phase":
        grid = data
        z = np.array([abs(p.h_ratio) for p in grid.points]).reshape(grid.nr, grid.nx)
        im = ax.pcolormesh(grid.xs, grid.rs, np.log10(z + 1e-12), shading="auto")
        ax.contour(grid.xs, grid.rs, z, levels=[1.0], colors="w")
        fig.colorbar(im, ax=ax, label="log10 |h / J_tilde|")
        ax.set_xlabel("x")
        ax.set_ylabel("r (nm)")
    elif kind == "chain":
        eff, lab, _ = data
        n = eff.N
        i0 = n // 2 - 1 if n > 2 else 0
        js = np.arange(i0 + 1, n)
        ax.plot(js - i0, np.abs(eff.values[i0, js]), "o-", label="|eff|")
        ax.plot(js - i0, lab.values[i0, js].real, "s--", label="Re lab")
        ax.set_xlabel("separation")
        ax.legend()
    else:
        raise ValueError(f"unknown plot kind {kind!r}")
    path = Path(out) / f"{kind}.png"
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
