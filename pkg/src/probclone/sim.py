"""Dense state-vector simulation of assembled machines.

The machine acts on K parties of k qubits plus one probe qubit (the
last wire).  Party j owns wires [j*k, (j+1)*k); K is the output copy
count for cloning and the input copy count for identification.

Assembly layout (verified against the block identities of the
synthesized unitary):

  compression   uncontrolled chain gates folding the M input copies
                onto party 0 (preceded, for general families, by the
                triangularizing rotation u0 on each input party)
  core          controlled on parties 1..K-1 being blank: a coordinate
                change L_in on party 0 (compressed coordinates to
                label coordinates rotated by V), the per-label probe
                rotations K_i, then V on party 0
  decompression on probe |1> (clone): Q_out re-expresses the success
                coordinates, the adjoint chain expands them to N
                copies, u0+ returns targets to raw coordinates; on
                probe |0>: the adjoint input chain restores the M-copy
                span so failure states sit on the input systems with
                blank targets.  Identification reads the label from
                party 0 directly and only restores the failure branch.

Robustness experiments replace the blank targets with sampled error
states; because the core is blank-controlled, any errored component
skips it entirely, which is what makes errors detectable and the input
copies recyclable.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import circuit as circ_mod
from .circuit import Circuit, apply_gate, compile_unitary, remap_wires, with_controls
from .dgate import d_chain, d_multi_chain
from .errors import DimensionError, DomainError, ModeError
from .numerics import inverse
from .statesets import triangularize
from .synthesis import Clone, Identify

_EMPTY_BRANCH_MASS = 1e-20


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes over 2^wires lexicographic basis states."""

    wires: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if amps.size != (1 << self.wires):
            raise DimensionError(
                "expected %d amplitudes for %d wires, got %d"
                % (1 << self.wires, self.wires, amps.size)
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-10:
            raise DomainError("state vector norm %.12g is not 1" % norm)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


def _kron_all(vectors):
    out = np.array([1.0 + 0.0j])
    for v in vectors:
        out = np.kron(out, np.asarray(v, dtype=complex).ravel())
    return out


def product_state(vectors):
    """StateVector from a list of per-subsystem vectors (left = wire 0)."""
    amps = _kron_all(vectors)
    wires = (amps.size - 1).bit_length()
    return StateVector(wires, amps)


def apply(sv, c):
    """Run a circuit over a state vector, returning a new StateVector."""
    if sv.wires != c.wires:
        raise DimensionError(
            "state has %d wires, circuit %d" % (sv.wires, c.wires)
        )
    amps = sv.amplitudes.copy()
    for g in c.gates:
        apply_gate(amps, c.wires, g)
    if c.phase != 1.0 + 0.0j:
        amps *= c.phase
    return StateVector(sv.wires, amps)


@dataclass(frozen=True, eq=False)
class MachineCircuit:
    """Assembled machine: staged circuits plus the wire layout."""

    wires: int
    qubits_per_party: int
    parties: int
    probe: int
    copies_in: int
    copies_out: Optional[int]
    mode: object
    path: str
    compression: Circuit
    core: Circuit
    decompression: Circuit
    circuit: Circuit
    gammas: Tuple[float, ...]
    labels: Tuple[str, ...]

    def party_wires(self, j):
        kq = self.qubits_per_party
        return list(range(j * kq, (j + 1) * kq))


def _symmetric_theta(state_set):
    """Detect the symmetric qubit pair cos t|0> +- sin t|1>, t in (0, pi/4]."""
    if state_set.k != 1 or state_set.n != 2:
        return None
    s = state_set.states
    if float(np.abs(s.imag).max()) > 1e-12:
        return None
    a, b = s[:, 0].real, s[:, 1].real
    if abs(a[0] - b[0]) > 1e-12 or abs(a[1] + b[1]) > 1e-12:
        return None
    if a[1] <= 1e-12 or a[0] <= 0.0:
        return None
    theta = float(np.arctan2(a[1], a[0]))
    if theta > np.pi / 4 + 1e-12:
        return None
    return theta


def _pad_block(small, dim):
    n = small.shape[0]
    if n == dim:
        return np.array(small, dtype=complex)
    out = np.eye(dim, dtype=complex)
    out[:n, :n] = small
    return out


def _symmetric_coords(theta_k):
    c, s = np.cos(theta_k), np.sin(theta_k)
    return np.array([[c, c], [s, -s]], dtype=complex)


def assemble(state_set, spec, res):
    """Build the full machine circuit for a synthesized problem."""
    kq = state_set.k
    n = state_set.n
    dim = 1 << kq
    if isinstance(spec.mode, Identify):
        m_in, n_out = spec.mode.copies, None
        parties = m_in
    elif isinstance(spec.mode, Clone):
        m_in, n_out = spec.mode.copies_in, spec.mode.copies_out
        parties = n_out
    else:
        raise ModeError("mode must be Identify or Clone")
    wires = kq * parties + 1
    probe = wires - 1
    pw = [list(range(j * kq, (j + 1) * kq)) for j in range(parties)]

    theta = _symmetric_theta(state_set)
    entry_circ = None
    if theta is not None:
        path = "symmetric"
        if m_in >= 2:
            stages_m, theta_m = d_chain(theta, m_in)
        else:
            stages_m, theta_m = [], theta
        q_in = res.a @ inverse(_symmetric_coords(theta_m))
        v_pad = np.array(res.v, dtype=complex)
        if n_out is not None:
            stages_n, theta_n = d_chain(theta, n_out)
            q_out = _symmetric_coords(theta_n) @ inverse(res.a_out)
    else:
        path = "triangular"
        tri = triangularize(state_set)
        entry_circ = compile_unitary(tri.u0)
        stages_m, form_m = d_multi_chain(tri, m_in)
        q_in = _pad_block(res.a @ inverse(form_m.ttilde), dim)
        v_pad = _pad_block(res.v, dim)
        if n_out is not None:
            stages_n, form_n = d_multi_chain(tri, n_out)
            q_out = _pad_block(form_n.ttilde @ inverse(res.a_out), dim)

    l_in = v_pad.conj().T @ q_in

    def fragment(u, wire_list):
        return remap_wires(compile_unitary(u), wire_list, wires)

    def stage_wires(st):
        return pw[st.parties[0]] + pw[st.parties[1]]

    comp_gates = []
    if entry_circ is not None:
        for j in range(m_in):
            comp_gates.extend(remap_wires(entry_circ, pw[j], wires).gates)
    for st in stages_m:
        comp_gates.extend(fragment(st.spec.unitary, stage_wires(st)).gates)
    compression = Circuit(wires, comp_gates)

    blanks = {w: 0 for j in range(1, parties) for w in pw[j]}
    core_gates = []
    core_gates.extend(with_controls(fragment(l_in, pw[0]), blanks).gates)
    for i in range(n):
        e_i = float(np.sqrt(res.m[i]))
        f_i = float(np.sqrt(1.0 - res.m[i]))
        k_gate = np.array([[f_i, -e_i], [e_i, f_i]], dtype=complex)
        pattern = dict(blanks)
        for b, w in enumerate(pw[0]):
            pattern[w] = (i >> (kq - 1 - b)) & 1
        probe_frag = Circuit(wires, [circ_mod.Single(probe, k_gate)])
        core_gates.extend(with_controls(probe_frag, pattern).gates)
    core_gates.extend(with_controls(fragment(v_pad, pw[0]), blanks).gates)
    core = Circuit(wires, core_gates)

    dec_gates = []
    if n_out is not None:
        probe1 = {probe: 1}
        dec_gates.extend(with_controls(fragment(q_out, pw[0]), probe1).gates)
        for st in reversed(stages_n):
            dec_gates.extend(
                with_controls(
                    fragment(st.spec.adjoint_unitary(), stage_wires(st)), probe1
                ).gates
            )
        if entry_circ is not None:
            exit_circ = entry_circ.adjoint()
            for j in range(m_in, parties):
                dec_gates.extend(
                    with_controls(remap_wires(exit_circ, pw[j], wires), probe1).gates
                )
        for st in reversed(stages_m):
            dec_gates.extend(
                with_controls(
                    fragment(st.spec.adjoint_unitary(), stage_wires(st)), {probe: 0}
                ).gates
            )
        if entry_circ is not None:
            for j in range(m_in):
                dec_gates.extend(remap_wires(exit_circ, pw[j], wires).gates)
    else:
        for st in reversed(stages_m):
            dec_gates.extend(
                with_controls(
                    fragment(st.spec.adjoint_unitary(), stage_wires(st)), {probe: 0}
                ).gates
            )
        if entry_circ is not None:
            exit_circ = entry_circ.adjoint()
            for j in range(m_in):
                dec_gates.extend(
                    with_controls(remap_wires(exit_circ, pw[j], wires), {probe: 0}).gates
                )
    decompression = Circuit(wires, dec_gates)

    full = compression.concat(core).concat(decompression)
    return MachineCircuit(
        wires=wires,
        qubits_per_party=kq,
        parties=parties,
        probe=probe,
        copies_in=m_in,
        copies_out=n_out,
        mode=spec.mode,
        path=path,
        compression=compression,
        core=core,
        decompression=decompression,
        circuit=full,
        gammas=spec.gammas,
        labels=state_set.labels,
    )


def machine_input(machine, state_set, i, target_states=None):
    """Input vector |psi_i>^M (x) targets (x) |probe 0>.

    ``target_states`` overrides the blank targets (one vector per target
    party); identification machines have no target slots.
    """
    dim = 1 << machine.qubits_per_party
    blank = np.zeros(dim, dtype=complex)
    blank[0] = 1.0
    n_targets = machine.parties - machine.copies_in
    if target_states is None:
        target_states = [blank] * n_targets
    if len(target_states) != n_targets:
        raise DimensionError(
            "expected %d target states, got %d" % (n_targets, len(target_states))
        )
    parts = [state_set.state(i)] * machine.copies_in + list(target_states)
    parts.append(np.array([1.0, 0.0], dtype=complex))
    return product_state(parts)


def measure_probe(sv, probe_wire=None):
    """Post-select on the probe: (p_success, success branch, failure branch).

    Branch states keep the full wire count with the probe collapsed;
    a branch with no amplitude mass is returned as None.
    """
    if probe_wire is None:
        probe_wire = sv.wires - 1
    bit = 1 << (sv.wires - 1 - probe_wire)
    idx = np.arange(sv.amplitudes.size)
    mask1 = (idx & bit) != 0
    amps = sv.amplitudes
    mass1 = float(np.sum(np.abs(amps[mask1]) ** 2))
    mass0 = float(np.sum(np.abs(amps[~mask1]) ** 2))
    p_success = min(max(mass1, 0.0), 1.0)
    success = failure = None
    if mass1 > _EMPTY_BRANCH_MASS:
        a = amps.copy()
        a[~mask1] = 0.0
        success = StateVector(sv.wires, a / np.sqrt(mass1))
    if mass0 > _EMPTY_BRANCH_MASS:
        a = amps.copy()
        a[mask1] = 0.0
        failure = StateVector(sv.wires, a / np.sqrt(mass0))
    return p_success, success, failure


def identify_measure(sv, qubits_per_party, label_count):
    """Projective label probabilities (party-0 computational basis)."""
    if sv is None:
        raise DomainError("cannot measure an empty branch")
    dim = 1 << qubits_per_party
    rows = sv.amplitudes.reshape(dim, -1)
    probs = np.sum(np.abs(rows) ** 2, axis=1)
    return probs[:label_count].copy()


@dataclass(frozen=True, eq=False)
class SimOutcome:
    """Exact per-input results of one machine run."""

    input_index: int
    label: str
    success_probability: float
    success_state: Optional[StateVector]
    failure_state: Optional[StateVector]
    clone_fidelity: Optional[float]
    identify_distribution: Optional[np.ndarray]


def simulate(state_set, spec, res, machine=None):
    """Run every input through the machine; exact amplitude bookkeeping."""
    if machine is None:
        machine = assemble(state_set, spec, res)
    outcomes = []
    for i in range(state_set.n):
        sv = machine_input(machine, state_set, i)
        out = apply(sv, machine.circuit)
        p_success, success, failure = measure_probe(out, machine.probe)
        fidelity = None
        distribution = None
        if machine.copies_out is not None:
            if success is not None:
                target = _kron_all(
                    [state_set.state(i)] * machine.copies_out
                    + [np.array([0.0, 1.0])]
                )
                fidelity = float(np.abs(np.vdot(target, success.amplitudes)) ** 2)
        else:
            if success is not None:
                distribution = identify_measure(
                    success, machine.qubits_per_party, state_set.n
                )
        outcomes.append(
            SimOutcome(
                input_index=i,
                label=state_set.labels[i],
                success_probability=p_success,
                success_state=success,
                failure_state=failure,
                clone_fidelity=fidelity,
                identify_distribution=distribution,
            )
        )
    return outcomes


@dataclass(frozen=True)
class Decoherence:
    """Targets decohere to a basis-state mixture: blank with probability
    1 - rate, error state i (i >= 1) with probability rate * weights[i-1]."""

    rate: float
    weights: Tuple[float, ...]

    def __post_init__(self):
        if not (0.0 <= self.rate <= 1.0):
            raise DomainError("decoherence rate must lie in [0, 1]")
        w = tuple(float(x) for x in self.weights)
        if any(x < 0.0 for x in w):
            raise DomainError("decoherence weights must be nonnegative")
        if abs(sum(w) - 1.0) > 1e-9:
            raise DomainError("decoherence weights must sum to 1")
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class Preparation:
    """Targets are prepared in the fixed superposition
    sqrt(1-|amplitude|^2)|blank> + amplitude * sum_i weights[i-1]|i>."""

    amplitude: complex
    weights: Tuple[complex, ...]

    def __post_init__(self):
        if abs(self.amplitude) > 1.0:
            raise DomainError("preparation error amplitude must satisfy |d| <= 1")
        w = tuple(complex(x) for x in self.weights)
        if abs(sum(abs(x) ** 2 for x in w) - 1.0) > 1e-9:
            raise DomainError("preparation weights must have unit square sum")
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        object.__setattr__(self, "weights", w)


def _error_state(model, dim):
    zeta = np.zeros(dim, dtype=complex)
    zeta[0] = np.sqrt(max(0.0, 1.0 - abs(model.amplitude) ** 2))
    for i, tau in enumerate(model.weights):
        zeta[i + 1] = model.amplitude * tau
    return zeta


def robustness_run(state_set, spec, res, model, trials, seed, machine=None):
    """Monte Carlo error-injection experiment on a cloning machine.

    Per trial (inputs cycled round-robin) the N-M target systems are
    replaced according to the model; the outcome (probe, then a
    computational measurement of the output targets) is sampled from the
    exactly simulated distribution, cached per input/error configuration.
    A trial is a *detected* error when the probe shows |0> and the
    targets are not all blank; for every detected trial the fidelity of
    the first M systems with |psi_i>^M is recorded (recyclability).
    """
    if not isinstance(spec.mode, Clone):
        raise ModeError("robustness experiments require clone mode")
    if trials < 1:
        raise DomainError("trials must be positive")
    if machine is None:
        machine = assemble(state_set, spec, res)
    kq = machine.qubits_per_party
    dim = 1 << kq
    n_targets = machine.copies_out - machine.copies_in
    n = state_set.n
    if isinstance(model, Decoherence):
        kind = "decoherence"
        rate = float(model.rate)
        if len(model.weights) != dim - 1:
            raise DomainError(
                "decoherence needs %d weights for %d-qubit parties"
                % (dim - 1, kq)
            )
        clean_target_prob = 1.0 - rate
    elif isinstance(model, Preparation):
        kind = "preparation"
        rate = float(abs(model.amplitude) ** 2)
        if len(model.weights) != dim - 1:
            raise DomainError(
                "preparation needs %d weights for %d-qubit parties" % (dim - 1, kq)
            )
        clean_target_prob = 1.0 - rate
    else:
        raise DomainError("model must be Decoherence or Preparation")
    model_detection_rate = 1.0 - clean_target_prob ** n_targets

    rng = np.random.default_rng(seed)
    cache = {}

    def exact(i, config):
        key = (i, config)
        hit = cache.get(key)
        if hit is not None:
            return hit
        if config is None:
            targets = [_error_state(model, dim)] * n_targets
        else:
            targets = []
            for c in config:
                vec = np.zeros(dim, dtype=complex)
                vec[c] = 1.0
                targets.append(vec)
        sv = machine_input(machine, state_set, i, targets)
        out = apply(sv, machine.circuit)
        slab = out.amplitudes.reshape(
            1 << (kq * machine.copies_in), 1 << (kq * n_targets), 2
        )
        probe0 = slab[:, :, 0]
        col_mass = np.sum(np.abs(probe0) ** 2, axis=0)
        psi_m = _kron_all([state_set.state(i)] * machine.copies_in)
        col_fid = np.full(col_mass.size, np.nan)
        for t_idx in range(col_mass.size):
            if col_mass[t_idx] > _EMPTY_BRANCH_MASS:
                col_fid[t_idx] = float(
                    np.abs(np.vdot(psi_m, probe0[:, t_idx])) ** 2 / col_mass[t_idx]
                )
        entry = {
            "p0": float(col_mass.sum()),
            "col_cum": np.cumsum(col_mass),
            "col_fid": col_fid,
        }
        cache[key] = entry
        return entry

    cum_weights = None
    if kind == "decoherence":
        cum_weights = np.cumsum([rate * w for w in model.weights])

    detected = 0
    probe_zero = 0
    min_fidelity = None
    for trial in range(trials):
        i = trial % n
        if kind == "decoherence":
            config = []
            for _ in range(n_targets):
                u = rng.random()
                if u < 1.0 - rate:
                    config.append(0)
                else:
                    config.append(
                        1 + int(np.searchsorted(cum_weights, u - (1.0 - rate)))
                    )
            config = tuple(config)
        else:
            config = None
        entry = exact(i, config)
        p0 = entry["p0"]
        r = rng.random()
        if r >= p0:
            continue  # probe |1>: clean success
        probe_zero += 1
        outcome = int(np.searchsorted(entry["col_cum"], r, side="right"))
        outcome = min(outcome, entry["col_cum"].size - 1)
        if outcome == 0:
            continue  # targets all blank: failure but no error signature
        detected += 1
        fid = entry["col_fid"][outcome]
        if not np.isnan(fid) and (min_fidelity is None or fid < min_fidelity):
            min_fidelity = float(fid)

    detection_rate = detected / float(trials)
    sigma = float(
        np.sqrt(max(model_detection_rate * (1.0 - model_detection_rate), 0.0) / trials)
    )
    return {
        "model": kind,
        "rate": rate,
        "trials": int(trials),
        "seed": int(seed),
        "inputs": int(n),
        "copies_in": int(machine.copies_in),
        "copies_out": int(machine.copies_out),
        "probe_zero_trials": int(probe_zero),
        "detected_trials": int(detected),
        "detection_rate": float(detection_rate),
        "model_detection_rate": float(model_detection_rate),
        "detection_sigma": sigma,
        "recyclability_min_fidelity": (
            1.0 if min_fidelity is None else float(min_fidelity)
        ),
    }
