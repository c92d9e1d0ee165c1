"""Command-line entry point.

    vqsd gen-state --n 2 --rank 4 --seed 7 --out state.json
    vqsd train --preset fig2 --out runs/
    vqsd train --config run.json --shots 10000
    vqsd depth-sweep --preset app-depth-sweep --out runs/
    vqsd verify --state state.json --params params.json

Exit codes: 0 success / pass, 1 usage or I/O error, 2 unconverged or
threshold failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from . import io
from .errors import InvalidInputError, TrainingAborted
from .state import off_diagonal_average, purity, random_density_matrix
from .trainer import (DepthSweepResult, TrainConfig, TrainRecord, TrainResult, grow_depth, train,
                      verify_diagonalization)

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2

PRESETS: dict[str, dict] = {
    "fig2": dict(n_qubits=2, ansatz="universal-pauli", objective="global-d", epochs=3000, tol=1e-12),
    "fig3": dict(n_qubits=1, ansatz="brick-wall", blocks=1, objective="single-qubit-pi",
                 epochs=3000, tol=1e-14),
    "fig4": dict(n_qubits=2, ansatz="brick-wall", blocks=4, objective="local-l", epochs=4000,
                 tol=1e-12),
    "app-depth-sweep": dict(n_qubits=5, ansatz="brick-wall", objective="local-l", epochs=3000,
                            m_start=5, m_step=5, m_max=70, tau_depth=1e-4, tol=1e-9),
}

# Keys a run config may carry besides the TrainConfig fields.
_RUN_KEYS = {"name": "run", "preset": None, "out_dir": "runs", "eigenvalue_tol": 1e-3,
             "off_diagonal_tol": 1e-3}
_TRAIN_KEYS = {f.name for f in dataclasses.fields(TrainConfig)}


class UsageError(Exception):
    pass


_EXPECTED = {
    "int": (int,),
    "float": (int, float),
    "bool": (bool,),
    "int | None": (int, type(None)),
    "str | None": (str, type(None)),
}


def _type_ok(annotation: str, value) -> bool:
    allowed = _EXPECTED.get(annotation)
    if allowed is None:
        return True
    if isinstance(value, bool) and bool not in allowed:
        return False
    return isinstance(value, allowed)


def load_run_config(path: str | None, preset: str | None, overrides: dict) -> tuple[TrainConfig, dict]:
    """Merge preset defaults, a JSON config file and command-line overrides."""
    raw: dict = {}
    if path:
        try:
            raw = io.read_json(Path(path))
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        except InvalidInputError as exc:
            raise UsageError(str(exc)) from exc
        if not isinstance(raw, dict):
            raise UsageError(f"{path}: config must be a JSON object")
    unknown = sorted(set(raw) - _TRAIN_KEYS - set(_RUN_KEYS))
    if unknown:
        raise UsageError(f"unknown config field(s): {', '.join(unknown)}")
    preset = preset or raw.get("preset")
    if preset is not None and preset not in PRESETS:
        raise UsageError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
    merged = {**(PRESETS[preset] if preset else {}), **raw,
              **{k: v for k, v in overrides.items() if v is not None}}
    run = {k: merged.get(k, default) for k, default in _RUN_KEYS.items()}
    run["preset"] = preset
    if run["name"] in (None, ""):
        raise UsageError("field 'name': experiment name must be non-empty")
    train_kwargs = {k: v for k, v in merged.items() if k in _TRAIN_KEYS}
    for f in dataclasses.fields(TrainConfig):
        if f.name in train_kwargs and not _type_ok(f.type, train_kwargs[f.name]):
            raise UsageError(f"field {f.name!r}: expected {f.type}, got {train_kwargs[f.name]!r}")
    try:
        config = TrainConfig(**train_kwargs)
    except (InvalidInputError, ValueError, TypeError) as exc:
        raise UsageError(f"invalid config: {exc}") from exc
    return config, run


def _stem(run: dict, config: TrainConfig, blocks: int | None = None) -> str:
    blocks = config.blocks if blocks is None else blocks
    m = f"_m{blocks}" if config.ansatz.value == "brick-wall" else ""
    return (f"{run['name']}_N{config.n_qubits}_{config.objective.value}_{config.ansatz.value}"
            f"{m}_seed{config.seed}")


def _write_record(path: Path, record: TrainRecord) -> None:
    io.write_table(path, TrainRecord.COLUMNS,
                   ([getattr(r, c) for c in TrainRecord.COLUMNS] for r in record.rows))


def _write_report(out: Path, stem: str, report, extra: dict | None = None) -> None:
    io.write_json(out / f"{stem}_report.json", {**report.to_dict(), **(extra or {})})
    (out / f"{stem}_report.txt").write_text(report.summary() + "\n")


def cmd_gen_state(args) -> int:
    try:
        rho = random_density_matrix(args.n, args.rank, args.seed)
    except InvalidInputError as exc:
        raise UsageError(str(exc)) from exc
    io.save_density_matrix(Path(args.out), rho, seed=args.seed,
                           rank=args.rank if args.rank is not None else 2**args.n)
    print(f"purity {purity(rho):.12g}")
    print(f"off_diagonal_average {off_diagonal_average(rho):.12g}")
    return EXIT_OK


def _overrides(args) -> dict:
    o = {"shots": args.shots, "out_dir": args.out}
    if args.seed is not None:
        o["seed"] = o["state_seed"] = args.seed
    return o


def cmd_train(args) -> int:
    config, run = load_run_config(args.config, args.preset, _overrides(args))
    out = Path(run["out_dir"])
    stem = _stem(run, config)
    rho = config.load_state()
    try:
        result: TrainResult = train(config, rho)
    except TrainingAborted as exc:
        if exc.record is not None:
            _write_record(out / f"{stem}_record.csv", exc.record)
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_FAILED
    _write_record(out / f"{stem}_record.csv", result.record)
    io.save_params(out / f"{stem}_params.json", result.params)
    io.save_density_matrix(out / f"{stem}_evolved.json", result.evolved)
    io.save_density_matrix(out / f"{stem}_input.json", rho, seed=config.state_seed)
    report = verify_diagonalization(rho, result.params, run["eigenvalue_tol"], run["off_diagonal_tol"])
    _write_report(out, stem, report)
    last = result.record.last
    io.write_json(out / f"{stem}_summary.json", {
        "config": config.to_dict(), "run": run, "converged": result.converged,
        "epochs_run": last.epoch, "best_objective": result.best_objective,
        "final_d_over_p": last.d_over_p, "final_off_diagonal_average": last.off_diagonal_average,
        "min_eigenvalue": float(report.eigenvalues[0]), "passed": report.passed,
    })
    print(f"best objective {result.best_objective:.12g} after {last.epoch} epochs")
    print(f"smallest eigenvalue {report.eigenvalues[0]:.12g}")
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_depth_sweep(args) -> int:
    config, run = load_run_config(args.config, args.preset, _overrides(args))
    if config.ansatz.value != "brick-wall":
        raise UsageError("depth-sweep needs ansatz 'brick-wall'")
    out = Path(run["out_dir"])
    rho = config.load_state()
    sweep: DepthSweepResult = grow_depth(config, rho=rho)
    stem = _stem(run, config, blocks=sweep.final.blocks)
    io.write_table(out / f"{stem}_sweep.csv",
                   ("m", "objective", "d_over_p", "off_diagonal_average", "converged"),
                   ([s.blocks, s.objective, s.d_over_p, s.off_diagonal_average,
                     sweep.converged and s is sweep.final] for s in sweep.stages))
    for s in sweep.stages:
        _write_record(out / f"{_stem(run, config, blocks=s.blocks)}_record.csv", s.record)
    io.save_params(out / f"{stem}_params.json", sweep.final.params)
    io.save_density_matrix(out / f"{stem}_input.json", rho, seed=config.state_seed)
    report = verify_diagonalization(rho, sweep.final.params, run["eigenvalue_tol"],
                                    run["off_diagonal_tol"])
    _write_report(out, stem, report, {"sweep_converged": sweep.converged})
    for s in sweep.stages:
        print(f"m={s.blocks:3d} objective={s.objective:.10g} d_over_p={s.d_over_p:.6f} "
              f"off_diag={s.off_diagonal_average:.3e}")
    if not sweep.converged:
        print(f"UNCONVERGED: depth limit m_max={config.m_max} reached")
    print(report.summary())
    return EXIT_OK if sweep.converged and report.passed else EXIT_FAILED


def cmd_verify(args) -> int:
    try:
        rho = io.load_density_matrix(Path(args.state))
        params = io.load_params(Path(args.params))
    except OSError as exc:
        raise UsageError(f"cannot read input: {exc}") from exc
    except InvalidInputError as exc:
        raise UsageError(f"cannot parse input: {exc}") from exc
    try:
        report = verify_diagonalization(rho, params, args.eigenvalue_tol, args.off_diagonal_tol)
    except InvalidInputError as exc:
        raise UsageError(str(exc)) from exc
    out = Path(args.out) if args.out else Path(args.params).parent
    _write_report(out, Path(args.params).stem.removesuffix("_params") + "_verify", report)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vqsd", description="Variational quantum state diagonalization")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-state", help="write a random density matrix")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--rank", type=int, default=None)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen_state)

    for name, func, help_ in (("train", cmd_train, "train a fixed ansatz"),
                              ("depth-sweep", cmd_depth_sweep, "grow a brick-wall circuit")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config")
        p.add_argument("--preset", choices=sorted(PRESETS))
        p.add_argument("--out", help="output directory (overrides out_dir)")
        p.add_argument("--seed", type=int, help="sets both the state seed and the training seed")
        p.add_argument("--shots", type=int)
        p.set_defaults(func=func)

    v = sub.add_parser("verify", help="check that parameters diagonalize a state")
    v.add_argument("--state", required=True)
    v.add_argument("--params", required=True)
    v.add_argument("--out")
    v.add_argument("--eigenvalue-tol", type=float, default=1e-3)
    v.add_argument("--off-diagonal-tol", type=float, default=1e-3)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command in ("train", "depth-sweep") and not (args.config or args.preset):
        print("error: give --config or --preset", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
