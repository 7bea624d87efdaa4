"""Command line interface: single runs, convergence studies, lemma checks.

    llgfd run    --dim 1 --n 64 --nt 1000 --alpha 10 --tfinal 0.1 --out outdir
    llgfd study  --mode spatial --dim 1 --alpha 10 --nt 100000 \
                 --meshes 16,32,64,128,256,512 --tfinal 0.1 --out outdir
    llgfd verify --out report.json

A JSON config file mirroring the study flags can replace them:
    llgfd study --config study.json
"""

import argparse
import json
import pathlib
import sys

from llgfd import __version__, lemmas, mms, snapshot, stepper, study
from llgfd.grid import make_grid

_STUDY_KEYS = {
    "mode",
    "dim",
    "alpha",
    "tfinal",
    "meshes",
    "steps",
    "pairs",
    "n",
    "nt",
    "startup",
    "out",
    "workers",
    "seed",
}


def _int_list(text):
    return [int(tok) for tok in str(text).split(",") if tok != ""]


def _pair_list(text):
    out = []
    for tok in str(text).split(","):
        if not tok:
            continue
        n, nt = tok.split(":")
        out.append((int(n), int(nt)))
    return out


def parse_config(path=None, flags=None):
    """Build a StudyConfig from a JSON file and/or parsed CLI flags.

    Unknown config keys are rejected; explicit flags override file values.
    """
    merged = {}
    if path is not None:
        raw = json.loads(pathlib.Path(path).read_text())
        unknown = set(raw) - _STUDY_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        merged.update(raw)
    if flags is not None:
        for key in _STUDY_KEYS:
            val = getattr(flags, key, None)
            if val is not None:
                merged[key] = val
    missing = [k for k in ("mode", "dim", "alpha") if k not in merged]
    if missing:
        raise ValueError(f"missing required study settings: {missing}")

    meshes = merged.get("meshes", [])
    if isinstance(meshes, str):
        meshes = _int_list(meshes)
    steps = merged.get("steps", [])
    if isinstance(steps, str):
        steps = _int_list(steps)
    pairs = merged.get("pairs", [])
    if isinstance(pairs, str):
        pairs = _pair_list(pairs)
    if merged.get("n") is not None:
        meshes = [int(merged["n"])]
    if merged.get("nt") is not None and merged.get("mode") == "spatial":
        steps = [int(merged["nt"])]
    elif merged.get("nt") is not None and not steps:
        steps = [int(merged["nt"])]

    return study.StudyConfig(
        mode=merged["mode"],
        dim=int(merged["dim"]),
        alpha=float(merged["alpha"]),
        t_final=float(merged.get("tfinal", 1.0)),
        meshes=meshes,
        steps=steps,
        pairs=pairs,
        startup=_startup(merged.get("startup", "exact")),
        out=merged.get("out"),
        workers=int(merged.get("workers", 1)),
        seed=int(merged.get("seed", 0)),
    )


def _startup(token):
    token = str(token).lower()
    if token in ("exact", "exact_data"):
        return stepper.STARTUP_EXACT
    if token == "bdf2":
        return stepper.STARTUP_BDF2
    raise ValueError(f"unknown startup mode {token!r} (use exact or bdf2)")


def _add_common(p):
    p.add_argument("--alpha", type=float, default=None, help="damping parameter")
    p.add_argument("--tfinal", type=float, default=None, help="final time (default 1)")
    p.add_argument("--startup", default=None, help="exact or bdf2")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--seed", type=int, default=None)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="llgfd",
        description="Fourth-order FD / BDF3 solver for the Landau-Lifshitz-Gilbert equation",
    )
    parser.add_argument("--version", action="version", version=f"llgfd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single forced manufactured-solution run")
    p_run.add_argument("--dim", type=int, required=True, choices=(1, 3))
    p_run.add_argument("--n", type=int, required=True, help="cells per axis")
    p_run.add_argument("--nt", type=int, required=True, help="number of time steps")
    p_run.add_argument("--no-forcing", action="store_true",
                       help="free relaxation from the manufactured initial data")
    p_run.add_argument("--diag", default=None,
                       help="write per-step JSON-lines diagnostics to this file")
    _add_common(p_run)

    p_study = sub.add_parser("study", help="convergence study (tables + orders)")
    p_study.add_argument("--config", default=None, help="JSON config mirroring the flags")
    p_study.add_argument("--mode", choices=study.MODES, default=None)
    p_study.add_argument("--dim", type=int, default=None, choices=(1, 3))
    p_study.add_argument("--n", type=int, default=None, help="fixed mesh (temporal mode)")
    p_study.add_argument("--nt", type=int, default=None, help="fixed step count (spatial mode)")
    p_study.add_argument("--meshes", default=None, help="comma list of N values")
    p_study.add_argument("--steps", default=None, help="comma list of N_t values")
    p_study.add_argument("--pairs", default=None, help="coupled N:Nt pairs, e.g. 16:40,20:54")
    p_study.add_argument("--workers", type=int, default=None)
    _add_common(p_study)

    p_ver = sub.add_parser("verify", help="run the discrete-identity suite")
    p_ver.add_argument("--trials", type=int, default=100)
    p_ver.add_argument("--proj-trials", type=int, default=1000)
    p_ver.add_argument("--out", default=None, help="write the JSON report here")
    p_ver.add_argument("--seed", type=int, default=7)

    args = parser.parse_args(argv)

    if args.command == "run":
        return _cmd_run(args)
    if args.command == "study":
        return _cmd_study(args)
    return _cmd_verify(args)


def _cmd_run(args):
    alpha = args.alpha if args.alpha is not None else 10.0
    t_final = args.tfinal if args.tfinal is not None else 1.0
    grid = make_grid(args.dim, args.n)
    sol = mms.solution_for(args.dim)
    forcing = None if args.no_forcing else mms.GriddedForcing(sol, grid, alpha)
    params = stepper.SchemeParams(
        alpha=alpha,
        k=t_final / args.nt,
        t_final=t_final,
        startup=_startup(args.startup or "exact"),
        forcing=forcing,
    )
    diag_stream = open(args.diag, "w") if args.diag else None
    try:
        result = stepper.run(grid, params, sol.value, diag_stream=diag_stream)
    finally:
        if diag_stream:
            diag_stream.close()
    d = result.diagnostics
    print(
        f"ran {d['n_steps']} steps (dim={args.dim}, N={args.n}, alpha={alpha}, "
        f"T={t_final}, startup={params.startup})"
    )
    print(
        f"min |m~| = {d['min_mtilde_norm']:.6f}, max ||m|-1| = {d['max_unit_dev']:.3e}, "
        f"wall = {d['wall_time']:.2f}s, alpha>7: {d['alpha_above_theory_bound']}"
    )
    if forcing is not None:
        err = mms.error_report(result.m, sol, t_final)
        print(
            f"errors vs exact: linf={err['linf']:.6e} l2={err['l2']:.6e} h1={err['h1']:.6e}"
        )
    if args.out:
        out = pathlib.Path(args.out)
        jp, bp = snapshot.write_field(result.m, out / "final", t_final)
        meta = {
            "dim": args.dim, "n": args.n, "nt": args.nt, "alpha": alpha,
            "t_final": t_final, "startup": params.startup,
            "forcing": forcing is not None,
            "alpha_above_theory_bound": d["alpha_above_theory_bound"],
            "min_mtilde_norm": d["min_mtilde_norm"],
            "max_unit_dev": d["max_unit_dev"],
            "wall_time": d["wall_time"],
        }
        (out / "meta.json").write_text(json.dumps(meta, indent=1) + "\n")
        print(f"wrote {jp} {bp}")
    return 0


def _cmd_study(args):
    config = parse_config(args.config, args)
    result = study.run_study(config)
    for row in result.rows:
        print(
            f"N={row['n']:>6} Nt={row['nt']:>8}  linf={row['err_linf']:.6e}  "
            f"l2={row['err_l2']:.6e}  h1={row['err_h1']:.6e}  ({row['wall_time']:.1f}s)"
        )
    for key, fit in result.orders.items():
        if fit["order"] is not None:
            print(f"observed order [{key}]: {fit['order']:.3f} (fit rms {fit['fit_rms']:.2e})")
    for fail in result.failures:
        print(f"FAILED point N={fail['n']} Nt={fail['nt']}: {fail['error']}", file=sys.stderr)
    if config.out:
        path = study.write_outputs(result, config.out)
        print(f"wrote {path.parent}/{{table.csv,orders.json,meta.json}}")
    return 1 if result.failures else 0


def _cmd_verify(args):
    reports = lemmas.run_all(trials_eq=args.trials, trials_proj=args.proj_trials, seed=args.seed)
    failed = 0
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        extra = f" ({r.detail})" if r.detail else ""
        print(f"{status} {r.lemma}: max violation {r.max_violation:.3e} tol {r.tol:g}{extra}")
        failed += not r.passed
    if args.out:
        pathlib.Path(args.out).write_text(
            json.dumps([r.as_dict() for r in reports], indent=1) + "\n"
        )
    print(f"{len(reports) - failed}/{len(reports)} lemma checks passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
