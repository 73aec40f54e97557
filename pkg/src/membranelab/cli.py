"""membranelab command line: run experiment configs, list models, validate.

Outputs are CSV files with a `#` manifest block (version, config hash,
seed); identical config and seed give byte-identical files, including under
parallel execution (results merge in sweep order). Wall-clock timing goes
to stdout only, never into the output files.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .circuits import build_model, model_table
from .config import ConfigError, ExperimentConfig, load_config

MAX_SITES = 200_000

EXIT_OK, EXIT_CONFIG, EXIT_RESOURCE = 0, 2, 3


def _manifest(cfg: ExperimentConfig) -> list[str]:
    return [f"# membranelab {__version__}",
            f"# kind={cfg.kind}",
            f"# config_hash={cfg.digest()}"]


def _write_csv(path: str, manifest: list[str], header: str,
               rows: list[str]) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(manifest) + "\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _sweep_list(val) -> list:
    return list(val) if isinstance(val, tuple) else [val]


def _build(cfg: ExperimentConfig):
    name = cfg.require("circuit.model")
    bc = cfg.get("lattice.bc")
    if "lattice.Lx" in cfg.values:
        size = (cfg["lattice.Lx"], cfg["lattice.Ly"])
    elif "lattice.L1" in cfg.values:
        size = (cfg["lattice.L1"], cfg["lattice.L2"])
    else:
        size = cfg.require("lattice.L")
    circuit = build_model(name, size, bc)
    if circuit.n_sites > MAX_SITES:
        raise ResourceWarning(f"lattice of {circuit.n_sites} sites exceeds cap")
    return circuit


# -- one runner per experiment kind ------------------------------------------

def _run_page_curve(cfg):
    from .membrane import page_curve
    circuit = _build(cfg)
    grid = page_curve(circuit, int(cfg["time.t_max"]),
                      prep=cfg.get("prep.kind", "self_scrambled"),
                      t_prep=cfg.get("prep.t_prep"),
                      seed=int(cfg["seeds.seed"]))
    rows = []
    for ti, t in enumerate(grid.ts):
        for xi, x in enumerate(grid.xs):
            rows.append(f"{circuit.name},{circuit.n_sites},{circuit.bc},"
                        f"{cfg['seeds.seed']},{x},{t},{grid.S[ti, xi]}")
    return "circuit_id,L,bc,seed,x_or_param,t,S_bits", rows


def _run_spacelike(cfg):
    from .membrane import spacelike_tension
    circuit = _build(cfg)
    res = spacelike_tension(circuit, int(cfg["cut.x1"]), int(cfg["cut.t1"]),
                            int(cfg["cut.x2"]), int(cfg["cut.t2"]),
                            int(cfg["time.t_final"]), int(cfg["seeds.seed"]))
    return "S_bits,v,E", [f"{res['S_bits']},{res['v']},{res['E']}"]


def _run_mdyn(cfg):
    from .membrane import mdyn_plateau
    circuit = _build(cfg)
    res = mdyn_plateau(circuit, int(cfg["time.t_max"]))
    rows = [f"{t},{s}" for t, s in enumerate(res["entropy"])]
    header = f"# s_star={res['s_star']} t_star={res['t_star']} reached={res['reached']}"
    return header + "\nt,S_bits", rows


def _run_surface2d(cfg):
    from .surface2d import surface_entropy_2d
    circuit = _build(cfg)
    v = np.arange(cfg["sweep.v.min"], cfg["sweep.v.max"] + 1e-12,
                  cfg["sweep.v.step"])
    rows = []
    for m in _sweep_list(cfg["sweep.m"]):
        grid = surface_entropy_2d(circuit, float(m), v, int(cfg["time.t_max"]),
                                  seed=int(cfg["seeds.seed"]))
        for ti, t in enumerate(grid.ts):
            for vi, vv in enumerate(grid.xs):
                rows.append(f"{circuit.name},{m},{vv:.6g},{t},{grid.S[ti, vi]}")
    return "circuit_id,m,v,t,S_bits", rows


def _run_probe(cfg):
    from .probes import ancilla_probe
    circuit = _build(cfg)
    mode = cfg["probe.mode"]
    grid = {"t": int(cfg["time.t"]),
            "xp_list": _sweep_list(cfg.get("probe.xp", tuple(range(circuit.n_sites)))),
            "tp_list": _sweep_list(cfg.get("probe.tp", tuple(range(int(cfg["time.t"])))))}
    if mode == "timelike":
        grid["x"] = int(cfg.require("probe.x"))
    else:
        grid["t_cut"] = int(cfg.require("probe.t_cut"))
        grid["L_cut"] = int(cfg.require("probe.L_cut"))
    ds = ancilla_probe(circuit, cfg["probe.kind"], mode, grid,
                       seed=int(cfg["seeds.seed"]))
    rows = []
    for ti, tp in enumerate(grid["tp_list"]):
        for xi, xp in enumerate(grid["xp_list"]):
            rows.append(f"{xp},{tp},{ds[ti, xi]}")
    return "x_p,t_p,delta_S", rows


def _run_unbinding(cfg):
    from .membrane import unbinding_experiment
    circuit = _build(cfg)
    res = unbinding_experiment(circuit, _sweep_list(cfg["sweep.p"]),
                               circuit.n_sites, int(cfg["time.t_max"]),
                               int(cfg["runs.n"]), int(cfg["seeds.seed"]),
                               random_gates=bool(cfg.get("gates.random", 0)))
    rows = [f"{p},{ve:.6f}" for p, ve in zip(res["p"], res["v_e"])]
    return "p,v_e", rows


def _run_plateau(cfg):
    from .plateau import purification_trace
    circuit = _build(cfg)
    tr = purification_trace(circuit, int(cfg["time.t_max"]),
                            seed=int(cfg["seeds.seed"]))
    rows = [f"{t},{s}" for t, s in enumerate(tr.entropy)]
    head = f"# t_star={tr.t_star} s_star={tr.s_star} tau={tr.tau}"
    return head + "\nt,S_bits", rows


def _run_classify(cfg):
    from .circuits import random_sttib_cell
    from .plateau import classify_circuit
    from .rng import stream
    cell = random_sttib_cell(stream(int(cfg["cell.seed"])))
    res = classify_circuit(cell, [int(m) for m in _sweep_list(cfg["sweep.sizes"])],
                           seed=int(cfg["seeds.seed"]))
    rows = []
    for r in res["records"]:
        rows.append(f"{cfg['cell.seed']},{r['m']},{r['t_star']},{r['s_star']:.6f},"
                    f"{r['tau']},{r['max_I']:.4f},{r['d1']},"
                    f"{res['labels']['gap']},{res['labels']['mi']},"
                    f"{res['labels']['state']}")
    return "cell_seed,m,t_star,s_star,tau,max_I,d1,gap,mi,state", rows


def _run_spreading(cfg):
    from .spreading import butterfly_velocities, footprint
    circuit = _build(cfg)
    f = footprint(circuit, str(cfg["pauli.letter"]), int(cfg["pauli.site"]),
                  int(cfg["time.t_max"]))
    left, right = f.support_edges()
    vl, vr = butterfly_velocities(f)
    rows = [f"{t},{left[t]:.0f},{right[t]:.0f}" for t in range(len(left))
            if not np.isnan(left[t])]
    return f"# v_L={vl:.4f} v_R={vr:.4f}\nt,left_edge,right_edge", rows


def _purity_item(args):
    circuit, x, t = args
    from .replica import average_purity
    res = average_purity(circuit, x, t)
    return f"{circuit.n_sites},{x},{t},{res['neg_log2']:.6f}"


def _run_purity(cfg, workers: int = 1):
    circuit = _build(cfg)
    items = [(circuit, int(x), int(t))
             for x in _sweep_list(cfg["sweep.x"]) for t in _sweep_list(cfg["sweep.t"])]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_purity_item, items))
    else:
        rows = [_purity_item(it) for it in items]
    return "L,x,t,neg_log2_avg_purity", rows


def _run_random_hybrid(cfg):
    from .plateau import random_hybrid_trace
    tr = random_hybrid_trace(int(cfg["lattice.L"]), float(cfg["rate.p"]),
                             int(cfg["time.t_max"]), seed=int(cfg["seeds.seed"]))
    rows = [f"{t},{s}" for t, s in enumerate(tr.entropy)]
    return f"# t_star={tr.t_star} s_star={tr.s_star:.6f}\nt,S_bits", rows


_RUNNERS = {
    "page-curve": _run_page_curve,
    "spacelike": _run_spacelike,
    "mdyn": _run_mdyn,
    "surface2d": _run_surface2d,
    "probe": _run_probe,
    "unbinding": _run_unbinding,
    "plateau": _run_plateau,
    "classify": _run_classify,
    "spreading": _run_spreading,
    "purity": _run_purity,
    "random-hybrid": _run_random_hybrid,
}


def run_config(cfg: ExperimentConfig, out_dir: str, workers: int = 1) -> str:
    runner = _RUNNERS[cfg.kind]
    t0 = time.time()
    if cfg.kind == "purity":
        header, rows = runner(cfg, workers=workers)
    else:
        header, rows = runner(cfg)
    os.makedirs(out_dir, exist_ok=True)
    out_path = os.path.join(out_dir, f"{cfg.kind}-{cfg.digest()}.csv")
    _write_csv(out_path, _manifest(cfg), header, rows)
    print(f"wrote {out_path} ({len(rows)} rows) in {time.time() - t0:.1f}s")
    return out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="membranelab")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p_run.add_argument("--out", default=".")

    sub.add_parser("models", help="list named circuit models")

    p_check = sub.add_parser("check", help="validate a config without running")
    p_check.add_argument("config")

    args = parser.parse_args(argv)

    if args.command == "models":
        for name, (_fn, kind, desc) in sorted(model_table().items()):
            print(f"{name:18s} [{kind}] {desc}")
        return EXIT_OK

    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "check":
        print(f"ok: kind={cfg.kind} hash={cfg.digest()}")
        return EXIT_OK

    try:
        run_config(cfg, args.out, workers=args.workers)
    except ResourceWarning as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
