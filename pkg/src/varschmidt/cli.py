"""Command-line interface: decompose, sweep, swap-demo, encode-demo, synth.

Exit codes: 0 success, 1 usage error, 2 nonconvergence, 3 I/O error.
All randomness derives from the single --seed flag by fixed splitting, so
every command is reproducible (up to the wall_time field of reports).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import multiprocessing
import sys

import numpy as np

from .ansatz import AnsatzConfig
from .oracle import exact_entropy, exact_schmidt
from .protocols import (
    SpectrumSpec,
    decode,
    encode,
    index_swapped,
    swap_without_connection,
    synthesize_state,
)
from .seeding import derive_seed
from .states import load_state, random_state
from .statevec import fidelity, probabilities, save_state, state_to_dict
from .variational import UntrainedCircuitError, extract_schmidt, train

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NONCONVERGED = 2
EXIT_IO = 3

SWEEP_COLUMNS = [
    "layers",
    "instance",
    "seed",
    "exact_entropy",
    "estimated_entropy",
    "relative_error",
    "final_cost",
    "converged",
    "error_kind",
]


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on usage errors; we need 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_state(args, parser):
    if args.state is not None and args.random is not None:
        parser.error("--state and --random are mutually exclusive")
    if args.state is not None:
        return load_state(args.state)
    if args.random is not None:
        n_a, n_b = args.random
        if n_a < 1 or n_b < 1:
            parser.error("--random subsystem sizes must be >= 1")
        return random_state(n_a, n_b, derive_seed(args.seed, 0))
    parser.error("one of --state or --random is required")


def _train_state(state, args):
    config_a = AnsatzConfig(state.n_a, args.layers)
    config_b = AnsatzConfig(state.n_b, args.layers)
    params, report = train(
        state,
        config_a,
        config_b,
        max_iterations=args.max_iterations,
        tolerance=args.tolerance,
        restarts=args.restarts,
        seed=derive_seed(args.seed, 1),
        shots=args.shots,
    )
    return config_a, config_b, params, report


def cmd_decompose(args, parser) -> int:
    state = _resolve_state(args, parser)
    config_a, config_b, params, report = _train_state(state, args)
    payload = {
        "state": {"n_qubits": state.n_qubits, "n_a": state.n_a},
        "training": report.as_dict(),
        "schmidt": None,
    }
    try:
        result = extract_schmidt(
            state,
            config_a,
            config_b,
            params,
            include_eigenvectors=args.emit_eigenvectors,
        )
        payload["schmidt"] = result.as_dict()
    except UntrainedCircuitError as exc:
        payload["error"] = str(exc)
    if args.compare_oracle:
        exact = exact_schmidt(state)
        entry = {
            "coefficients": [float(v) for v in exact.values],
            "von_neumann_entropy": exact.entropy_bits,
        }
        if payload["schmidt"] is not None:
            entry["entropy_abs_error"] = abs(
                payload["schmidt"]["von_neumann_entropy"] - exact.entropy_bits
            )
        payload["oracle"] = entry
    _emit(payload, args.out)
    return EXIT_OK if report.converged else EXIT_NONCONVERGED


def _sweep_task(task: tuple) -> dict:
    qubits, layers, instance, seed, restarts, tolerance, max_iterations = task
    n_a = qubits // 2
    state_seed = derive_seed(seed, instance)
    state = random_state(n_a, qubits - n_a, state_seed)
    config_a = AnsatzConfig(state.n_a, layers)
    config_b = AnsatzConfig(state.n_b, layers)
    params, report = train(
        state,
        config_a,
        config_b,
        max_iterations=max_iterations,
        tolerance=tolerance,
        restarts=restarts,
        seed=derive_seed(seed, instance, layers),
    )
    exact = exact_entropy(state)
    try:
        estimated = extract_schmidt(state, config_a, config_b, params).von_neumann_entropy
        if exact > 1e-6:
            error, kind = abs(estimated - exact) / exact, "relative"
        else:
            error, kind = abs(estimated - exact), "absolute"
    except UntrainedCircuitError:
        estimated, error, kind = float("nan"), float("nan"), "failed"
    return {
        "layers": layers,
        "instance": instance,
        "seed": state_seed,
        "exact_entropy": exact,
        "estimated_entropy": estimated,
        "relative_error": error,
        "final_cost": report.final_cost,
        "converged": report.converged,
        "error_kind": kind,
    }


def sweep_rows(
    qubits: int,
    layers_min: int,
    layers_max: int,
    instances: int,
    seed: int,
    restarts: int = 5,
    tolerance: float = 1e-8,
    max_iterations: int = 400,
    jobs: int = 1,
) -> list[dict]:
    """All sweep rows (data rows plus per-layer mean/std summaries)."""
    tasks = [
        (qubits, layers, instance, seed, restarts, tolerance, max_iterations)
        for layers in range(layers_min, layers_max + 1)
        for instance in range(instances)
    ]
    if jobs > 1:
        with multiprocessing.get_context("fork").Pool(jobs) as pool:
            results = pool.map(_sweep_task, tasks)
    else:
        results = [_sweep_task(t) for t in tasks]
    rows = sorted(results, key=lambda r: (r["layers"], r["instance"]))
    numeric = ["exact_entropy", "estimated_entropy", "relative_error", "final_cost"]
    for layers in range(layers_min, layers_max + 1):
        group = [r for r in rows if isinstance(r["instance"], int) and r["layers"] == layers]
        for label, reduce in (("mean", np.nanmean), ("std", np.nanstd)):
            summary = {"layers": layers, "instance": label, "seed": "", "error_kind": ""}
            for col in numeric:
                summary[col] = float(reduce([g[col] for g in group]))
            summary["converged"] = float(reduce([1.0 if g["converged"] else 0.0 for g in group]))
            rows.append(summary)
    return rows


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_sweep_csv(rows: list[dict], stream) -> None:
    writer = csv.writer(stream)
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([_format_cell(row[c]) for c in SWEEP_COLUMNS])


def cmd_sweep(args, parser) -> int:
    if args.layers_min > args.layers_max:
        parser.error("--layers-min must be <= --layers-max")
    if args.instances < 1:
        parser.error("--instances must be >= 1")
    if args.qubits < 2:
        parser.error("--qubits must be >= 2")
    rows = sweep_rows(
        args.qubits,
        args.layers_min,
        args.layers_max,
        args.instances,
        args.seed,
        restarts=args.restarts,
        tolerance=args.tolerance,
        max_iterations=args.max_iterations,
        jobs=args.jobs,
    )
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_swap_demo(args, parser) -> int:
    state = _resolve_state(args, parser)
    if state.n_a != state.n_b:
        parser.error("swap demo requires equal subsystem sizes")
    config_a, config_b, params, report = _train_state(state, args)
    payload = {"training": report.as_dict()}
    code = EXIT_OK if report.converged else EXIT_NONCONVERGED
    try:
        swapped = swap_without_connection(
            state, config_a, config_b, params, tolerance=args.tolerance
        )
        payload["swap_fidelity"] = fidelity(swapped, index_swapped(state))
        # after the swap the circuit roles are exchanged as well
        theta, omega = np.split(np.asarray(params), [config_a.param_count])
        twice = swap_without_connection(
            swapped,
            config_b,
            config_a,
            np.concatenate([omega, theta]),
            tolerance=args.tolerance,
        )
        payload["involution_fidelity"] = fidelity(twice, state)
    except UntrainedCircuitError as exc:
        payload["error"] = str(exc)
        code = EXIT_NONCONVERGED
    _emit(payload, args.out)
    return code


def cmd_encode_demo(args, parser) -> int:
    state = _resolve_state(args, parser)
    if state.n_a > state.n_b:
        parser.error("encode demo requires n_a <= n_b")
    config_a, config_b, params, report = _train_state(state, args)
    payload = {"training": report.as_dict()}
    code = EXIT_OK if report.converged else EXIT_NONCONVERGED
    try:
        encoded = encode(state, config_a, config_b, params, tolerance=args.tolerance)
        p = probabilities(encoded).reshape(encoded.dim_b, encoded.dim_a)
        payload["p_all_zero_a"] = float(p[:, 0].sum())
        roundtrip = decode(encoded, config_a, config_b, params)
        payload["roundtrip_fidelity"] = fidelity(roundtrip, state)
        marginal_b = np.sort(p.sum(axis=1))[::-1]
        exact_sq = np.sort(exact_schmidt(state).values ** 2)[::-1]
        exact_sq = np.pad(exact_sq, (0, marginal_b.size - exact_sq.size))
        payload["b_spectrum_max_deviation"] = float(np.max(np.abs(marginal_b - exact_sq)))
    except UntrainedCircuitError as exc:
        payload["error"] = str(exc)
        code = EXIT_NONCONVERGED
    _emit(payload, args.out)
    return code


def cmd_synth(args, parser) -> int:
    try:
        weights = [float(w) for w in args.weights.split(",") if w.strip()]
    except ValueError:
        parser.error("--weights must be a comma-separated list of floats")
    phases = None
    if args.phases:
        try:
            phases = [float(p) for p in args.phases.split(",") if p.strip()]
        except ValueError:
            parser.error("--phases must be a comma-separated list of floats")
    spec = SpectrumSpec(tuple(weights), tuple(phases) if phases else None)
    state = synthesize_state(spec, args.na, args.nb, args.randomizer_layers, args.seed)
    oracle_sq = exact_schmidt(state).values ** 2
    requested = np.sort(np.asarray(weights))[::-1]
    trimmed = oracle_sq[: requested.size]
    payload = {
        "requested_weights": [float(w) for w in requested],
        "oracle_squared_values": [float(v) for v in oracle_sq],
        "max_deviation": float(np.max(np.abs(trimmed - requested))),
        "entropy_bits": exact_entropy(state),
    }
    if args.out:
        save_state(state, args.out)
        payload["state_path"] = args.out
    else:
        payload["state"] = state_to_dict(state)
    _emit(payload, None)
    return EXIT_OK


def _add_common_training_flags(sub, default_layers=1):
    sub.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    sub.add_argument("--layers", type=int, default=default_layers)
    sub.add_argument("--restarts", type=int, default=5)
    sub.add_argument("--tolerance", type=float, default=1e-8)
    sub.add_argument("--max-iterations", type=int, default=1000)
    sub.add_argument("--shots", type=int, default=None,
                     help="train on sampled outcomes instead of exact expectations")
    sub.add_argument("--out", default=None, help="write the JSON report here")


def _add_state_flags(sub):
    sub.add_argument("--state", default=None, help="state JSON file to load")
    sub.add_argument("--random", type=int, nargs=2, metavar=("N_A", "N_B"),
                     default=None, help="generate a random bipartite state")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="varschmidt",
                     description="Variational Schmidt decomposition toolkit")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("decompose", parents=[], help="train and extract the spectrum")
    _add_state_flags(p)
    _add_common_training_flags(p)
    p.add_argument("--emit-eigenvectors", action="store_true")
    p.add_argument("--compare-oracle", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = subs.add_parser("sweep", help="layer sweep over random instances, CSV output")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--layers-min", type=int, required=True)
    p.add_argument("--layers-max", type=int, required=True)
    p.add_argument("--instances", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("--max-iterations", type=int, default=400)
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("swap-demo", help="gate-free SWAP protocol demo")
    _add_state_flags(p)
    _add_common_training_flags(p, default_layers=3)
    p.set_defaults(func=cmd_swap_demo)

    p = subs.add_parser("encode-demo", help="compression onto subsystem B demo")
    _add_state_flags(p)
    _add_common_training_flags(p, default_layers=3)
    p.set_defaults(func=cmd_encode_demo)

    p = subs.add_parser("synth", help="synthesize a state with a given spectrum")
    p.add_argument("--weights", required=True,
                   help="comma-separated squared Schmidt coefficients, summing to 1")
    p.add_argument("--phases", default=None,
                   help="comma-separated phases, one per weight")
    p.add_argument("--na", type=int, required=True)
    p.add_argument("--nb", type=int, required=True)
    p.add_argument("--randomizer-layers", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write the state JSON here")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"varschmidt: I/O error: {exc}\n")
        return EXIT_IO
    except ValueError as exc:
        message = str(exc)
        if "JSON" in message or "malformed" in message or "amplitude count" in message:
            sys.stderr.write(f"varschmidt: I/O error: {message}\n")
            return EXIT_IO
        sys.stderr.write(f"varschmidt: error: {message}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
