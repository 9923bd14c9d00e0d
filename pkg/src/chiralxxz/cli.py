"""Command-line front end.

Exit codes: 0 success, 2 I/O failure, 3 configuration error, 4 numerical
contract violation (including size caps and tracking ambiguities).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .chain import (
    ChainSpec,
    chain_spectrum,
    correlations_ed,
    density_correlations_ed,
    density_correlations_free_fermion,
    ed_ground_state,
    lab_frame_transform,
    structure_factor,
    xx_correlations_free_fermion,
)
from .config import ConfigError, RunConfig, load_config
from .dipole_pair import EnantiomerPair
from .droplet_noise import DropletScenario, noise_report
from .errors import ChiralXXZError, ContractViolationError, InvalidArgumentError
from .phase import field_zero_crossings, phase_grid
from .rotor import BasisTruncation, MoleculeSpec, stark_map
from .spin_model import SpinCouplings
from .sweep import pair_sweep

__all__ = ["main", "cmd_stark_map", "cmd_couplings", "cmd_phase", "cmd_chain", "cmd_noise"]

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3, 4


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, str):
        return v
    return repr(float(v))


def _write_csv(path: Path, header: list[str], rows) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _molecule(cfg: RunConfig) -> MoleculeSpec:
    try:
        return MoleculeSpec.enantiomer(
            "L", A=cfg.A, B=cfg.B, C=cfg.C, d_a=cfg.d_a, d_b=cfg.d_b, d_c=cfg.d_c
        )
    except InvalidArgumentError as exc:
        raise ConfigError("A" if "rotational" in str(exc) else "d_c", str(exc)) from None


def _pair(cfg: RunConfig) -> EnantiomerPair:
    return EnantiomerPair.from_label(cfg.pair, _molecule(cfg))


def _maybe_plot(cfg: RunConfig, kind: str, out: Path, data) -> None:
    if not cfg.plot:
        return
    from . import plotting

    plotting.emit(kind, out, data)


def cmd_stark_map(cfg: RunConfig) -> list[Path]:
    """Write ``stark_map.csv`` (x, m, level_index, energy_over_B)."""
    spec = _molecule(cfg)
    if cfg.pair.upper()[0] == "R":
        spec = spec.mirror()
    rows = stark_map(spec, cfg.x_grid(), BasisTruncation(cfg.j_max), cfg.m_list, workers=cfg.workers)
    out = _out_dir(cfg)
    path = _write_csv(
        out / "stark_map.csv",
        ["x", "m", "level_index", "energy_over_B"],
        ((r.x, r.m, r.level_index, r.energy_over_B) for r in rows),
    )
    _maybe_plot(cfg, "stark_map", out, rows)
    return [path]


def cmd_couplings(cfg: RunConfig) -> list[Path]:
    """Write ``coefficients.csv`` and ``couplings.csv`` for every ``r`` in ``r_list``."""
    pair = _pair(cfg)
    sweep = pair_sweep(pair, cfg.x_grid(), BasisTruncation(cfg.j_max), workers=cfg.workers, max_step=cfg.max_step)
    out = _out_dir(cfg)
    coeff_rows = [
        (p.x, p.coeffs.C1, p.coeffs.C2, p.coeffs.C3, p.coeffs.C4, p.coeffs.Cd1.real, p.coeffs.Cd1.imag)
        for p in sweep
    ]
    p1 = _write_csv(out / "coefficients.csv", ["x", "C1", "C2", "C3", "C4", "Re_Cd1", "Im_Cd1"], coeff_rows)
    coup_rows = []
    for r in cfg.r_list:
        for p in sweep:
            c = p.couplings(r, pair.d_tot)
            coup_rows.append((p.x, r, c.J_xy, c.D, c.J_z, c.h_field, c.J_tilde, c.theta))
    p2 = _write_csv(
        out / "couplings.csv",
        ["x", "r_nm", "Jxy_GHz", "D_GHz", "Jz_GHz", "h_GHz", "Jtilde_GHz", "theta_rad"],
        coup_rows,
    )
    _maybe_plot(cfg, "couplings", out, coup_rows)
    return [p1, p2]


def cmd_phase(cfg: RunConfig) -> list[Path]:
    """Write ``phase_grid.csv``, ``boundary.csv`` and ``h_crossings.csv``.

    Zero-field grid points are dropped since the ratios are undefined there.
    """
    pair = _pair(cfg)
    trunc = BasisTruncation(cfg.j_max)
    xs = [x for x in cfg.x_grid() if x > 0]
    if len(xs) < 2:
        raise ConfigError("x_steps", "phase diagram needs at least two grid points with x > 0")
    sweep = pair_sweep(pair, xs, trunc, workers=cfg.workers, max_step=cfg.max_step)
    grid = phase_grid(
        (xs[0], xs[-1]), (cfg.r_min, cfg.r_max), len(xs), cfg.r_steps, pair, trunc,
        criterion=cfg.criterion, sweep=sweep,
    )
    out = _out_dir(cfg)
    p1 = _write_csv(
        out / "phase_grid.csv",
        ["x", "r_nm", "jz_ratio", "h_ratio", "label"],
        ((p.x, p.r, p.jz_ratio, p.h_ratio, p.label) for p in grid.points),
    )
    p2 = _write_csv(out / "boundary.csv", ["x", "r_nm"], grid.boundary())
    cross = []
    for r in cfg.r_list:
        for x in field_zero_crossings(r, pair, trunc, tol=cfg.crossing_tol, sweep=sweep):
            cross.append((r, x))
    p3 = _write_csv(out / "h_crossings.csv", ["r_nm", "x"], cross)
    _maybe_plot(cfg, "phase", out, grid)
    return [p1, p2, p3]


def _chain_couplings(cfg: RunConfig) -> SpinCouplings:
    if cfg.chain_x is None:
        return SpinCouplings(cfg.chain_jxy, cfg.chain_d, cfg.chain_jz, cfg.chain_h)
    pair = _pair(cfg)
    p = pair_sweep(pair, [cfg.chain_x], BasisTruncation(cfg.j_max), max_step=cfg.max_step)[0]
    return p.couplings(cfg.chain_r, pair.d_tot)


def cmd_chain(cfg: RunConfig) -> list[Path]:
    """Write ``correlations.csv``, ``structure_factor.csv`` and, for ED, ``chain_spectrum.csv``."""
    c = _chain_couplings(cfg)
    N = cfg.chain_N
    out_paths = []
    if cfg.chain_method == "free_fermion":
        if c.J_z != 0.0:
            raise ConfigError("chain_jz", "chain_method=free_fermion requires J_z = 0")
        if c.J_tilde == 0.0:
            raise ContractViolationError("free-fermion route needs J_tilde > 0")
        eff = xx_correlations_free_fermion(N, c.h_field / c.J_tilde, J_tilde=c.J_tilde)
        lab = lab_frame_transform(eff, c.theta)
        dens = density_correlations_free_fermion(N, c.h_field / c.J_tilde, c.J_tilde)
        spectrum = None
    else:
        spec = ChainSpec(N, c)
        g_eff = ed_ground_state(spec, include_dmi=False)
        eff = correlations_ed(spec, g_eff.state, include_dmi=False)
        g_lab = ed_ground_state(spec, include_dmi=True)
        if g_lab.degenerate or g_eff.degenerate:
            # representatives of a degenerate manifold need not map onto each other
            lab = lab_frame_transform(eff, c.theta)
        else:
            lab = correlations_ed(spec, g_lab.state, include_dmi=True)
        dens = density_correlations_ed(N, g_eff.state)
        spectrum = chain_spectrum(spec, include_dmi=True) if N <= 10 else np.array([g_lab.energy])
    out = _out_dir(cfg)
    rows = []
    for cs in (eff, lab):
        for i in range(N):
            for j in range(N):
                v = cs.value(i, j)
                rows.append((i, j, v.real, v.imag, cs.frame))
    out_paths.append(_write_csv(out / "correlations.csv", ["i", "j", "re", "im", "frame"], rows))
    sq = structure_factor(dens, cfg.chain_spacing)
    out_paths.append(_write_csv(out / "structure_factor.csv", ["q_inv_nm", "S"], sq))
    if spectrum is not None:
        out_paths.append(
            _write_csv(out / "chain_spectrum.csv", ["index", "energy_GHz"], enumerate(spectrum))
        )
    _maybe_plot(cfg, "chain", out, (eff, lab, sq))
    return out_paths


NEUTRAL_SENTINEL = "inf (neutral droplet, no surface-charge perturbation)"


def cmd_noise(cfg: RunConfig, as_json: bool = False) -> str:
    """Three-line report of V_dd, V_charge and their ratio (or a JSON object)."""
    rep = noise_report(DropletScenario(cfg.noise_mu, cfg.noise_r, cfg.noise_R, cfg.noise_q))
    if as_json:
        return json.dumps(rep, sort_keys=True)
    ratio = NEUTRAL_SENTINEL if rep["ratio"] is None else f"{rep['ratio']:.4g}"
    return "\n".join(
        [
            f"V_dd = {rep['V_dd_K']:.4g} K ({rep['V_dd_J']:.4g} J)",
            f"V_charge = {rep['V_charge_K']:.4g} K ({rep['V_charge_J']:.4g} J)",
            f"ratio = {ratio}",
        ]
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiralxxz",
        description="Stark-dressed chiral molecule chains: spectra, couplings, phases, correlations.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value configuration file")
    common.add_argument("--out", metavar="DIR", help="output directory (overrides out_dir)")
    common.add_argument("--workers", type=int, metavar="N", help="worker processes")
    common.add_argument("--j-max", type=int, metavar="K", dest="j_max", help="basis truncation")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override any config key")
    common.add_argument("--plot", action="store_true", help="also write PNG figures (needs matplotlib)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("stark-map", "Stark levels versus field"),
        ("couplings", "pair coefficients and spin couplings"),
        ("phase-diagram", "phase labels over (x, r)"),
        ("chain", "ground-state correlations of the chain"),
        ("noise", "droplet surface-charge estimate"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        if name == "noise":
            p.add_argument("--json", action="store_true", help="print a JSON object instead")
    return parser


def _overrides(args) -> dict[str, str]:
    items = {}
    for kv in args.set:
        if "=" not in kv:
            raise ConfigError(kv, "--set expects KEY=VALUE")
        k, v = kv.split("=", 1)
        items[k.strip()] = v.strip()
    if args.out is not None:
        items["out_dir"] = args.out
    if args.workers is not None:
        items["workers"] = str(args.workers)
    if args.j_max is not None:
        items["j_max"] = str(args.j_max)
    if args.plot:
        items["plot"] = "true"
    return items


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, _overrides(args))
        if args.command == "noise":
            print(cmd_noise(cfg, as_json=args.json))
            return EXIT_OK
        handler = {
            "stark-map": cmd_stark_map,
            "couplings": cmd_couplings,
            "phase-diagram": cmd_phase,
            "chain": cmd_chain,
        }[args.command]
        for path in handler(cfg):
            print(path)
        return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvalidArgumentError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ContractViolationError, ArithmeticError) as exc:
        print(f"error: numerical contract violated: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ChiralXXZError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
