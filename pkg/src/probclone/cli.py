"""Command-line front end.

Four verbs drive the library end to end:

  probclone synth    --config problem.yaml [--out hamiltonian.yaml]
  probclone compile  --config problem.yaml --out circuit.txt [--lower universal]
  probclone simulate --config problem.yaml
  probclone robust   --config problem.yaml --model decoherence --delta 0.3
                     [--weights 0.5,0.5] [--trials N] [--seed N]

Configs are YAML; the machine-readable report goes to stdout (YAML,
sorted keys, deterministic for a fixed seed) and a short human summary
to stderr.  Exit codes: 0 success, 1 input error, 2 infeasible problem,
3 violated internal invariant.
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np
import yaml

from . import circuit as circ_mod
from . import sim as sim_mod
from . import synthesis as syn
from .errors import (
    DimensionError,
    DomainError,
    InvariantError,
    ModeError,
    NotPSDError,
    ProbcloneError,
    RankError,
)
from .statesets import StateSet, symmetric_pair

REPORT_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_INVARIANT = 3


@dataclass(frozen=True)
class ProblemConfig:
    state_set: StateSet
    mode: object
    gammas_request: object  # tuple of floats or the string "optimal-uniform"
    seed: int
    feasibility_tol: float
    raw: dict


def _cfg_get(mapping, key, where):
    if key not in mapping:
        raise DomainError("config %s: missing field '%s'" % (where, key))
    return mapping[key]


def _parse_states(node):
    if not isinstance(node, dict):
        raise DomainError("config states: expected a mapping")
    if "symmetric_theta" in node:
        theta = float(node["symmetric_theta"])
        return symmetric_pair(theta)
    qubits = int(_cfg_get(node, "qubits", "states"))
    vectors = _cfg_get(node, "vectors", "states")
    if not isinstance(vectors, list) or not vectors:
        raise DomainError("config states.vectors: expected a non-empty list")
    dim = 1 << qubits
    cols = []
    for i, vec in enumerate(vectors):
        if not isinstance(vec, list) or len(vec) != dim:
            raise DomainError(
                "config states.vectors[%d]: expected %d amplitude pairs" % (i, dim)
            )
        col = np.zeros(dim, dtype=complex)
        for a, pair in enumerate(vec):
            if not isinstance(pair, list) or len(pair) != 2:
                raise DomainError(
                    "config states.vectors[%d][%d]: expected [re, im]" % (i, a)
                )
            col[a] = float(pair[0]) + 1j * float(pair[1])
        cols.append(col)
    labels = node.get("labels")
    if labels is not None:
        labels = [str(x) for x in labels]
    return StateSet(np.column_stack(cols), labels=labels)


def _parse_mode(node):
    if not isinstance(node, dict):
        raise DomainError("config mode: expected a mapping")
    kind = str(_cfg_get(node, "kind", "mode")).lower()
    if kind == "identify":
        return syn.Identify(int(_cfg_get(node, "copies", "mode")))
    if kind == "clone":
        return syn.Clone(
            int(_cfg_get(node, "copies_in", "mode")),
            int(_cfg_get(node, "copies_out", "mode")),
        )
    raise DomainError("config mode.kind: expected 'identify' or 'clone', got %r" % kind)


def _parse_gammas(node, n):
    if isinstance(node, str):
        if node.strip().lower() == "optimal-uniform":
            return "optimal-uniform"
        raise DomainError(
            "config gammas: the only string form is 'optimal-uniform', got %r" % node
        )
    if isinstance(node, list):
        if len(node) != n:
            raise DomainError(
                "config gammas: expected %d values, got %d" % (n, len(node))
            )
        return tuple(float(g) for g in node)
    raise DomainError("config gammas: expected a list or 'optimal-uniform'")


def load_config(path, tol_override=None, seed_override=None):
    try:
        with open(path, "r") as fh:
            raw = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise DomainError("config %s: invalid YAML (%s)" % (path, exc))
    if not isinstance(raw, dict):
        raise DomainError("config %s: top level must be a mapping" % path)
    state_set = _parse_states(_cfg_get(raw, "states", "top level"))
    mode = _parse_mode(_cfg_get(raw, "mode", "top level"))
    gammas = _parse_gammas(_cfg_get(raw, "gammas", "top level"), state_set.n)
    tolerances = raw.get("tolerances") or {}
    tol = float(tolerances.get("feasibility", syn.FEASIBILITY_TOL))
    if tol_override is not None:
        tol = float(tol_override)
    seed = int(raw.get("seed", 0))
    if seed_override is not None:
        seed = int(seed_override)
    return ProblemConfig(
        state_set=state_set,
        mode=mode,
        gammas_request=gammas,
        seed=seed,
        feasibility_tol=tol,
        raw=raw,
    )


def _resolve_spec(cfg):
    """Feasibility-checked MachineSpec; resolves 'optimal-uniform' requests."""
    if cfg.gammas_request == "optimal-uniform":
        g = syn.optimal_uniform_gamma(cfg.state_set, cfg.mode, tol=cfg.feasibility_tol)
        gammas = (g,) * cfg.state_set.n
    else:
        gammas = cfg.gammas_request
    spec = syn.MachineSpec(cfg.mode, gammas)
    verdict = syn.feasibility(cfg.state_set, spec, tol=cfg.feasibility_tol)
    if not verdict.feasible:
        raise NotPSDError(
            verdict.min_eigenvalue, "requested probabilities are infeasible"
        )
    return spec, verdict


def _mode_doc(mode):
    if isinstance(mode, syn.Identify):
        return {"kind": "identify", "copies": mode.copies}
    return {"kind": "clone", "copies_in": mode.copies_in, "copies_out": mode.copies_out}


def _base_report(command, cfg, spec, verdict):
    return {
        "report_version": REPORT_VERSION,
        "command": command,
        "config": cfg.raw,
        "labels": list(cfg.state_set.labels),
        "mode": _mode_doc(spec.mode),
        "feasibility": {
            "feasible": bool(verdict.feasible),
            "min_eigenvalue": float(verdict.min_eigenvalue),
        },
        "gammas": [float(g) for g in spec.gammas],
    }


def _complex_table(a):
    a = np.asarray(a)
    return [
        [[float(x.real), float(x.imag)] for x in row]
        for row in a
    ]


def _emit(report, summary_lines):
    sys.stdout.write(yaml.safe_dump(report, sort_keys=True, default_flow_style=False))
    for line in summary_lines:
        sys.stderr.write(line + "\n")


def cmd_synth(args):
    cfg = load_config(args.config, tol_override=args.tol, seed_override=args.seed)
    spec, verdict = _resolve_spec(cfg)
    res = syn.build_unitary(cfg.state_set, spec)
    _, phases = syn.diagonalize(res)
    ham = syn.hamiltonian(res)
    report = _base_report("synth", cfg, spec, verdict)
    report.update(
        {
            "note": res.note,
            "m": [float(x) for x in res.m],
            "thetas": [float(x) for x in res.thetas],
            "phases": [float(x) for x in phases],
            "energies": [float(x) for x in ham.energies],
            "branch_integers": list(ham.branch_integers),
            "unitary_dim": int(res.u.shape[0]),
        }
    )
    if args.out:
        dump = {
            "hamiltonian": _complex_table(ham.h),
            "unitary": _complex_table(res.u),
            "energies": [float(x) for x in ham.energies],
            "hbar": ham.hbar,
            "dt": ham.dt,
        }
        with open(args.out, "w") as fh:
            yaml.safe_dump(dump, fh, sort_keys=True)
    _emit(
        report,
        [
            "synth: %s machine for %d states, gammas %s"
            % (res.note, cfg.state_set.n, ", ".join("%.6g" % g for g in spec.gammas)),
            "synth: m = %s" % ", ".join("%.6g" % x for x in res.m),
        ],
    )
    return EXIT_OK


def cmd_compile(args):
    cfg = load_config(args.config, tol_override=args.tol, seed_override=args.seed)
    if not args.out:
        raise DomainError("compile requires --out for the circuit file")
    spec, verdict = _resolve_spec(cfg)
    res = syn.build_unitary(cfg.state_set, spec)
    machine = sim_mod.assemble(cfg.state_set, spec, res)
    circuit = machine.circuit
    if args.lower == "universal":
        circuit = circ_mod.lower_multicontrolled(circuit)
    with open(args.out, "w") as fh:
        fh.write(circ_mod.to_text(circuit))
    report = _base_report("compile", cfg, spec, verdict)
    report.update(
        {
            "note": res.note,
            "lowering": args.lower,
            "wires": machine.wires,
            "path": machine.path,
            "stage_stats": {
                "compression": circ_mod.gate_stats(machine.compression),
                "core": circ_mod.gate_stats(machine.core),
                "decompression": circ_mod.gate_stats(machine.decompression),
            },
            "circuit_stats": circ_mod.gate_stats(circuit),
            "out": args.out,
        }
    )
    _emit(
        report,
        [
            "compile: %d wires, %d gates (%s lowering) -> %s"
            % (machine.wires, len(circuit.gates), args.lower, args.out)
        ],
    )
    return EXIT_OK


def _check_outcome_invariants(cfg, spec, machine, outcomes):
    """Machine semantics re-checked at simulation time (exit 3 on failure)."""
    kq = machine.qubits_per_party
    for o in outcomes:
        g = spec.gammas[o.input_index]
        if abs(o.success_probability - g) > 1e-8:
            raise InvariantError(
                "input %d: success probability %.12g differs from gamma %.12g"
                % (o.input_index, o.success_probability, g)
            )
        if o.clone_fidelity is not None and abs(o.clone_fidelity - 1.0) > 1e-8:
            raise InvariantError(
                "input %d: clone fidelity %.12g differs from 1"
                % (o.input_index, o.clone_fidelity)
            )
        if o.identify_distribution is not None:
            off = float(
                sum(
                    p
                    for j, p in enumerate(o.identify_distribution)
                    if j != o.input_index
                )
            )
            if off > 1e-8:
                raise InvariantError(
                    "input %d: identification off-label mass %.3g" % (o.input_index, off)
                )
        if o.failure_state is not None and machine.copies_out is not None:
            n_targets = machine.parties - machine.copies_in
            slab = o.failure_state.amplitudes.reshape(
                1 << (kq * machine.copies_in), 1 << (kq * n_targets), 2
            )
            stray = float(np.sum(np.abs(slab[:, 1:, :]) ** 2))
            if stray > 1e-8:
                raise InvariantError(
                    "input %d: failure branch leaks %.3g outside blank targets"
                    % (o.input_index, stray)
                )


def cmd_simulate(args):
    cfg = load_config(args.config, tol_override=args.tol, seed_override=args.seed)
    spec, verdict = _resolve_spec(cfg)
    res = syn.build_unitary(cfg.state_set, spec)
    machine = sim_mod.assemble(cfg.state_set, spec, res)
    outcomes = sim_mod.simulate(cfg.state_set, spec, res, machine)
    _check_outcome_invariants(cfg, spec, machine, outcomes)
    per_input = []
    for o in outcomes:
        doc = {
            "label": o.label,
            "success_probability": float(o.success_probability),
        }
        if o.clone_fidelity is not None:
            doc["clone_fidelity"] = float(o.clone_fidelity)
        if o.identify_distribution is not None:
            doc["identify_distribution"] = [float(p) for p in o.identify_distribution]
        per_input.append(doc)
    report = _base_report("simulate", cfg, spec, verdict)
    report.update(
        {
            "note": res.note,
            "wires": machine.wires,
            "path": machine.path,
            "per_input": per_input,
        }
    )
    _emit(
        report,
        [
            "simulate: input %s -> p = %.12g" % (d["label"], d["success_probability"])
            for d in per_input
        ],
    )
    return EXIT_OK


def _parse_weights(text, dim, kind):
    if text is None:
        count = dim - 1
        if kind == "decoherence":
            return tuple(1.0 / count for _ in range(count))
        return tuple(np.sqrt(1.0 / count) for _ in range(count))
    parts = [p for p in text.split(",") if p.strip()]
    try:
        if kind == "decoherence":
            return tuple(float(p) for p in parts)
        return tuple(complex(p) for p in parts)
    except ValueError as exc:
        raise DomainError("--weights: %s" % exc)


def cmd_robust(args):
    cfg = load_config(args.config, tol_override=args.tol, seed_override=args.seed)
    spec, verdict = _resolve_spec(cfg)
    if not isinstance(spec.mode, syn.Clone):
        raise ModeError("robust requires a clone-mode config")
    res = syn.build_unitary(cfg.state_set, spec)
    machine = sim_mod.assemble(cfg.state_set, spec, res)
    dim = 1 << cfg.state_set.k
    weights = _parse_weights(args.weights, dim, args.model)
    if args.model == "decoherence":
        model = sim_mod.Decoherence(args.delta, weights)
    else:
        model = sim_mod.Preparation(args.delta, weights)
    summary = sim_mod.robustness_run(
        cfg.state_set, spec, res, model, args.trials, cfg.seed, machine
    )
    report = _base_report("robust", cfg, spec, verdict)
    report["robustness"] = summary
    _emit(
        report,
        [
            "robust: %s rate %.6g, detected %d/%d (model %.6g, sigma %.3g)"
            % (
                summary["model"],
                summary["rate"],
                summary["detected_trials"],
                summary["trials"],
                summary["model_detection_rate"],
                summary["detection_sigma"],
            ),
            "robust: recyclability min fidelity %.12g"
            % summary["recyclability_min_fidelity"],
        ],
    )
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="probclone",
        description="Synthesize, compile, and simulate probabilistic "
        "cloning/identification machines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="problem YAML file")
        p.add_argument("--tol", type=float, default=None, help="feasibility tolerance")
        p.add_argument("--seed", type=int, default=None, help="override config seed")

    p = sub.add_parser("synth", help="synthesize U and its Hamiltonian")
    common(p)
    p.add_argument("--out", default=None, help="write Hamiltonian/unitary YAML here")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("compile", help="emit the machine as a circuit file")
    common(p)
    p.add_argument("--out", required=True, help="circuit text output path")
    p.add_argument(
        "--lower",
        choices=("multi", "universal"),
        default="multi",
        help="gate level: multi-controlled or {single-qubit, C-NOT}",
    )
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("simulate", help="exact machine semantics per input")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("robust", help="error-injection Monte Carlo")
    common(p)
    p.add_argument(
        "--model",
        choices=("decoherence", "preparation"),
        required=True,
    )
    p.add_argument("--delta", type=float, required=True, help="error rate/amplitude")
    p.add_argument(
        "--weights",
        default=None,
        help="comma-separated error-state weights (default uniform)",
    )
    p.add_argument("--trials", type=int, default=10000)
    p.set_defaults(func=cmd_robust)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotPSDError as exc:
        sys.stderr.write("infeasible: %s (min eigenvalue %.6g)\n" % (exc, exc.min_eigenvalue))
        return EXIT_INFEASIBLE
    except InvariantError as exc:
        sys.stderr.write("invariant violation: %s\n" % exc)
        return EXIT_INVARIANT
    except (DomainError, DimensionError, ModeError, RankError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_INPUT
    except ProbcloneError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
