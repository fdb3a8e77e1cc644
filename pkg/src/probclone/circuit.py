"""Gate intermediate representation and the two-level compiler.

Circuits are ordered gate lists over a fixed wire count; the earliest
gate acts first, so the dense matrix is the product of gate matrices
right to left.  Wire 0 is the most significant bit of the lexicographic
basis ordering shared by every module.

The compiler path is: two_level_decompose factors a unitary into
two-level rotations plus diagonal phases; lift_two_level conjugates each
factor onto the top-of-lexicon index pair with C-NOT/X permutations and
realizes it as a multi-controlled 2x2 gate; lower_multicontrolled
rewrites multi-controlled gates into {single-qubit, C-NOT} via the
controlled-square-root recursion, with the Toffoli handled by the
standard six-C-NOT network and singly-controlled gates by the two-C-NOT
ABC construction (control-phase tracked exactly, never dropped).
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import (
    DegenerateError,
    DimensionError,
    DomainError,
    ShapeError,
    SizeError,
    UnitarityError,
)
from .numerics import unitary_residual

MATRIX_WIRE_CAP = 12
PRUNE_TOL = 1e-12

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_HAD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)
_T = np.diag([1.0, np.exp(1j * np.pi / 4)]).astype(complex)
_T_DAG = _T.conj().T


def _as_payload(u):
    u = np.array(u, dtype=complex)
    if u.shape != (2, 2):
        raise ShapeError("gate payload must be 2x2, got %r" % (u.shape,))
    res = unitary_residual(u)
    if res > 1e-10:
        raise UnitarityError("gate payload unitary residual %.3g exceeds 1e-10" % res)
    u.setflags(write=False)
    return u


@dataclass(frozen=True, eq=False)
class Single:
    """One-qubit gate with an explicit 2x2 payload."""

    wire: int
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", _as_payload(self.u))

    def wires_used(self):
        return (self.wire,)

    def adjoint(self):
        return Single(self.wire, self.u.conj().T)


@dataclass(frozen=True, eq=False)
class CNot:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise DimensionError("C-NOT control and target must differ")

    def wires_used(self):
        return (self.control, self.target)

    def adjoint(self):
        return self


@dataclass(frozen=True, eq=False)
class PauliX:
    wire: int

    def wires_used(self):
        return (self.wire,)

    def adjoint(self):
        return self


@dataclass(frozen=True, eq=False)
class MultiControlled:
    """2x2 payload applied to ``target`` when every control wire is |1>."""

    controls: Tuple[int, ...]
    target: int
    u: np.ndarray

    def __post_init__(self):
        controls = tuple(sorted(int(c) for c in self.controls))
        if not controls:
            raise DimensionError("multi-controlled gate requires at least one control")
        if len(set(controls)) != len(controls) or self.target in controls:
            raise DimensionError("gate wires must be distinct")
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "u", _as_payload(self.u))

    def wires_used(self):
        return self.controls + (self.target,)

    def adjoint(self):
        return MultiControlled(self.controls, self.target, self.u.conj().T)


@dataclass(frozen=True, eq=False)
class Circuit:
    """Immutable ordered gate list plus an exact global-phase accumulator."""

    wires: int
    gates: Tuple
    phase: complex = 1.0 + 0.0j

    def __post_init__(self):
        if self.wires < 1:
            raise DimensionError("circuit needs at least one wire")
        gates = tuple(self.gates)
        for g in gates:
            for w in g.wires_used():
                if not (0 <= w < self.wires):
                    raise DimensionError(
                        "gate wire %d outside circuit of %d wires" % (w, self.wires)
                    )
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "phase", complex(self.phase))

    def adjoint(self):
        return Circuit(
            self.wires,
            tuple(g.adjoint() for g in reversed(self.gates)),
            np.conj(self.phase),
        )

    def concat(self, other):
        if other.wires != self.wires:
            raise DimensionError("cannot concatenate circuits of different widths")
        return Circuit(self.wires, self.gates + other.gates, self.phase * other.phase)


def apply_gate(amps, n, gate):
    """Apply one gate in place to a 2^n amplitude array."""
    from . import kernels

    if isinstance(gate, Single):
        u = gate.u
        kernels.apply_single(amps, n, gate.wire, u[0, 0], u[0, 1], u[1, 0], u[1, 1])
    elif isinstance(gate, PauliX):
        kernels.apply_x(amps, n, gate.wire)
    elif isinstance(gate, CNot):
        kernels.apply_cnot(amps, n, gate.control, gate.target)
    elif isinstance(gate, MultiControlled):
        cmask = 0
        for c in gate.controls:
            cmask |= 1 << (n - 1 - c)
        u = gate.u
        kernels.apply_controlled(
            amps, n, cmask, gate.target, u[0, 0], u[0, 1], u[1, 0], u[1, 1]
        )
    else:
        raise DimensionError("unknown gate variant %r" % (gate,))


def matrix(c):
    """Dense unitary of the circuit (earliest gate rightmost in the product)."""
    if c.wires > MATRIX_WIRE_CAP:
        raise SizeError(
            "dense evaluation capped at %d wires, got %d" % (MATRIX_WIRE_CAP, c.wires)
        )
    dim = 1 << c.wires
    out = np.empty((dim, dim), dtype=complex)
    for col in range(dim):
        amps = np.zeros(dim, dtype=complex)
        amps[col] = 1.0
        for g in c.gates:
            apply_gate(amps, c.wires, g)
        out[:, col] = amps
    if c.phase != 1.0:
        out *= c.phase
    return out


@dataclass(frozen=True, eq=False)
class TwoLevel:
    """Identity except a 2x2 unitary block on basis indices (t, l), t < l."""

    t: int
    l: int
    u: np.ndarray

    def __post_init__(self):
        if self.t == self.l:
            raise DegenerateError("two-level indices must differ")
        object.__setattr__(self, "u", _as_payload(self.u))


@dataclass(frozen=True, eq=False)
class Phase:
    """Identity except amplitude exp(1j*alpha) on basis index k."""

    k: int
    alpha: float


def factor_matrix(f, dim):
    m = np.eye(dim, dtype=complex)
    if isinstance(f, TwoLevel):
        m[f.t, f.t] = f.u[0, 0]
        m[f.t, f.l] = f.u[0, 1]
        m[f.l, f.t] = f.u[1, 0]
        m[f.l, f.l] = f.u[1, 1]
    elif isinstance(f, Phase):
        m[f.k, f.k] = np.exp(1j * f.alpha)
    else:
        raise DimensionError("unknown factor %r" % (f,))
    return m


def two_level_decompose(u):
    """Factor a unitary into two-level rotations followed by phases.

    The returned factors multiply out (in list order, left to right) to
    the input.  At most n(n-1)/2 rotations and n phases are emitted;
    factors within 1e-12 of identity are pruned.
    """
    u = np.array(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ShapeError("expected a square matrix, got %r" % (u.shape,))
    res = unitary_residual(u)
    if res > 1e-8:
        raise UnitarityError("input unitary residual %.3g exceeds 1e-8" % res)
    dim = u.shape[0]
    w = u.copy()
    factors = []
    for t in range(dim):
        for l in range(t + 1, dim):
            b = w[l, t]
            if abs(b) <= PRUNE_TOL:
                w[l, t] = 0.0
                continue
            a = w[t, t]
            r = np.hypot(abs(a), abs(b))
            row_t = (np.conj(a) * w[t, :] + np.conj(b) * w[l, :]) / r
            row_l = (-b * w[t, :] + a * w[l, :]) / r
            w[t, :] = row_t
            w[l, :] = row_l
            w[l, t] = 0.0
            payload = (
                np.array([[a, -np.conj(b)], [b, np.conj(a)]], dtype=complex) / r
            )
            factors.append(TwoLevel(t, l, payload))
    for k in range(dim):
        d = w[k, k]
        if abs(d - 1.0) > PRUNE_TOL:
            factors.append(Phase(k, float(np.angle(d))))
    return factors


def permutation_to_cnots(i, j, wires):
    """C-NOT/X conjugator moving basis pair {|i>, |j>} onto the top pair.

    The returned circuit maps the numerically larger index (the one
    holding bit 1 at the most significant differing position) to
    |1...11> and the other to |1...10>: pivot at the first differing
    bit, C-NOT fan from the pivot to the remaining differing bits,
    X on every wire where both strings hold 0, and a three-C-NOT swap
    bringing the pivot to the last wire when needed.
    """
    if i == j:
        raise DegenerateError("basis indices must differ")
    size = 1 << wires
    if not (0 <= i < size and 0 <= j < size):
        raise DimensionError("basis index outside %d wires" % wires)

    def bit(x, w):
        return (x >> (wires - 1 - w)) & 1

    diff = [w for w in range(wires) if bit(i, w) != bit(j, w)]
    k0 = diff[0]
    a, b = (i, j) if bit(i, k0) == 1 else (j, i)
    gates = []
    for s in diff[1:]:
        gates.append(CNot(k0, s))
    for w in range(wires):
        if w != k0 and bit(b, w) == 0:
            gates.append(PauliX(w))
    last = wires - 1
    if k0 != last:
        gates.append(CNot(k0, last))
        gates.append(CNot(last, k0))
        gates.append(CNot(k0, last))
    return Circuit(wires, gates)


def _lifted_pair(t, l, payload, wires):
    """Gates realizing the two-level unitary on indices (t, l), t < l.

    The payload rows/columns are ordered (t, l); the conjugator sends
    l -> |1...11| and t -> |1...10|, which is exactly the (target=0,
    target=1) order of the multi-controlled gate on the last wire.
    """
    if wires == 1:
        return [Single(0, payload)]
    q = permutation_to_cnots(t, l, wires)
    lam = MultiControlled(tuple(range(wires - 1)), wires - 1, payload)
    return list(q.gates) + [lam] + list(reversed(q.gates))


def lift_two_level(factors, wires):
    """Realize decomposition factors as a circuit of multi-controlled gates.

    Factors multiply out left to right while circuit gates apply earliest
    first, so fragments are emitted in reverse factor order.
    """
    dim = 1 << wires
    gates = []
    for f in reversed(factors):
        if isinstance(f, Phase):
            if f.k >= dim:
                raise ShapeError("factor index %d outside %d wires" % (f.k, wires))
            if f.k % 2 == 1:
                t, l = f.k - 1, f.k
                payload = np.diag([1.0, np.exp(1j * f.alpha)]).astype(complex)
            else:
                t, l = f.k, f.k + 1
                payload = np.diag([np.exp(1j * f.alpha), 1.0]).astype(complex)
        elif isinstance(f, TwoLevel):
            if f.l >= dim:
                raise ShapeError("factor index %d outside %d wires" % (f.l, wires))
            t, l, payload = f.t, f.l, f.u
        else:
            raise DimensionError("unknown factor %r" % (f,))
        gates.extend(_lifted_pair(t, l, payload, wires))
    return Circuit(wires, gates)


def compile_unitary(u):
    """Decompose + lift: a circuit (multi-controlled level) for a dense unitary."""
    u = np.asarray(u, dtype=complex)
    dim = u.shape[0]
    wires = max(1, (dim - 1).bit_length())
    if dim < 2 or (1 << wires) != dim:
        raise ShapeError("matrix dimension %d is not a power of two" % dim)
    return lift_two_level(two_level_decompose(u), wires)


def _principal_sqrt(u):
    """Principal square root of a 2x2 unitary (eigenphases halved into (-pi/2, pi/2])."""
    w, vec = np.linalg.eig(u)
    half = np.exp(0.5j * np.angle(w))
    return (vec * half) @ np.linalg.inv(vec)


def _rz(lam):
    return np.diag([np.exp(-0.5j * lam), np.exp(0.5j * lam)]).astype(complex)


def _ry(gam):
    c, s = np.cos(gam / 2.0), np.sin(gam / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _abc_gates(control, target, u):
    """Singly-controlled u via two C-NOTs: A.X.B.X.C = e^{-ia}u, A.B.C = I,
    with the extracted phase restored by a diagonal gate on the control."""
    alpha = 0.5 * np.angle(np.linalg.det(u))
    up = u * np.exp(-1j * alpha)
    gamma = 2.0 * np.arctan2(abs(up[1, 0]), abs(up[0, 0]))
    if abs(np.sin(gamma / 2.0)) <= 1e-12:
        beta, delta = 2.0 * np.angle(up[1, 1]), 0.0
    elif abs(np.cos(gamma / 2.0)) <= 1e-12:
        beta, delta = 2.0 * np.angle(up[1, 0]), 0.0
    else:
        spd = 2.0 * np.angle(up[1, 1])
        smd = 2.0 * np.angle(up[1, 0])
        beta, delta = (spd + smd) / 2.0, (spd - smd) / 2.0
    a_mat = _rz(beta) @ _ry(gamma / 2.0)
    b_mat = _ry(-gamma / 2.0) @ _rz(-(delta + beta) / 2.0)
    c_mat = _rz((delta - beta) / 2.0)
    gates = [
        Single(target, c_mat),
        CNot(control, target),
        Single(target, b_mat),
        CNot(control, target),
        Single(target, a_mat),
    ]
    if abs(alpha) > PRUNE_TOL:
        gates.append(Single(control, np.diag([1.0, np.exp(1j * alpha)]).astype(complex)))
    return gates


def _toffoli_gates(c1, c2, t):
    """Standard six-C-NOT Toffoli network (exact, no global phase)."""
    return [
        Single(t, _HAD),
        CNot(c2, t),
        Single(t, _T_DAG),
        CNot(c1, t),
        Single(t, _T),
        CNot(c2, t),
        Single(t, _T_DAG),
        CNot(c1, t),
        Single(c2, _T),
        Single(t, _T),
        Single(t, _HAD),
        CNot(c1, c2),
        Single(c1, _T),
        Single(c2, _T_DAG),
        CNot(c1, c2),
    ]


def _lower_mc(controls, target, u):
    if len(controls) == 1:
        c = controls[0]
        if np.abs(u - _SX).max() <= PRUNE_TOL:
            return [CNot(c, target)]
        return _abc_gates(c, target, u)
    if len(controls) == 2 and np.abs(u - _SX).max() <= PRUNE_TOL:
        return _toffoli_gates(controls[0], controls[1], target)
    # controlled-square-root recursion on the last control
    head, pivot = controls[:-1], controls[-1]
    v = _principal_sqrt(u)
    vd = v.conj().T
    gates = []
    gates.extend(_lower_mc((pivot,), target, v))
    gates.extend(_lower_mc(head, pivot, _SX))
    gates.extend(_lower_mc((pivot,), target, vd))
    gates.extend(_lower_mc(head, pivot, _SX))
    gates.extend(_lower_mc(head, target, v))
    return gates


def lower_multicontrolled(c):
    """Rewrite every multi-controlled gate into {single-qubit, C-NOT} gates."""
    gates = []
    for g in c.gates:
        if isinstance(g, MultiControlled):
            gates.extend(_lower_mc(g.controls, g.target, g.u))
        else:
            gates.append(g)
    return Circuit(c.wires, gates, c.phase)


def with_controls(c, controls):
    """Run an entire circuit conditioned on a wire-value assignment.

    ``controls`` maps wire -> required bit.  Zero-valued controls are
    realized by X conjugation; every gate then gains the control wires
    as plain |1> controls.  The circuit's phase must be exactly 1 (a
    controlled global phase is not a global phase).
    """
    if c.phase != 1.0 + 0.0j:
        raise DomainError("cannot control a circuit carrying a global phase")
    if not controls:
        return c
    cwires = tuple(sorted(controls))
    for w in cwires:
        if not (0 <= w < c.wires):
            raise DimensionError("control wire %d outside circuit" % w)
        if controls[w] not in (0, 1):
            raise DomainError("control values must be 0 or 1")
    used = set()
    for g in c.gates:
        used.update(g.wires_used())
    if used.intersection(cwires):
        raise DimensionError("control wires overlap the controlled fragment")
    flips = [PauliX(w) for w in cwires if controls[w] == 0]
    gates = list(flips)
    for g in c.gates:
        if isinstance(g, Single):
            gates.append(MultiControlled(cwires, g.wire, g.u))
        elif isinstance(g, PauliX):
            gates.append(MultiControlled(cwires, g.wire, _SX))
        elif isinstance(g, CNot):
            gates.append(MultiControlled(cwires + (g.control,), g.target, _SX))
        elif isinstance(g, MultiControlled):
            gates.append(MultiControlled(cwires + g.controls, g.target, g.u))
        else:
            raise DimensionError("unknown gate variant %r" % (g,))
    gates.extend(reversed(flips))
    return Circuit(c.wires, gates)


def remap_wires(c, mapping, wires):
    """Embed a fragment into a wider circuit; mapping[old_wire] = new wire."""
    if len(mapping) != c.wires:
        raise DimensionError("mapping must cover all %d wires" % c.wires)
    mapped = [int(m) for m in mapping]
    if len(set(mapped)) != len(mapped):
        raise DimensionError("wire mapping must be injective")
    gates = []
    for g in c.gates:
        if isinstance(g, Single):
            gates.append(Single(mapped[g.wire], g.u))
        elif isinstance(g, PauliX):
            gates.append(PauliX(mapped[g.wire]))
        elif isinstance(g, CNot):
            gates.append(CNot(mapped[g.control], mapped[g.target]))
        elif isinstance(g, MultiControlled):
            gates.append(
                MultiControlled(
                    tuple(mapped[w] for w in g.controls), mapped[g.target], g.u
                )
            )
        else:
            raise DimensionError("unknown gate variant %r" % (g,))
    return Circuit(wires, gates, c.phase)


def gate_stats(c):
    """Per-variant gate counts plus the longest wire-dependency chain."""
    counts = {"Single": 0, "CNot": 0, "PauliX": 0, "MultiControlled": 0}
    frontier = [0] * c.wires
    for g in c.gates:
        counts[type(g).__name__] += 1
        ws = g.wires_used()
        d = max(frontier[w] for w in ws) + 1
        for w in ws:
            frontier[w] = d
    return {
        "counts": counts,
        "total": len(c.gates),
        "depth": max(frontier) if c.gates else 0,
    }


def _fmt_payload(u):
    return " ".join(
        "%.17g" % val
        for entry in (u[0, 0], u[0, 1], u[1, 0], u[1, 1])
        for val in (entry.real, entry.imag)
    )


def to_text(c):
    """Line-oriented serialization with 17-significant-digit round trip."""
    lines = ["wires %d" % c.wires, "phase %.17g %.17g" % (c.phase.real, c.phase.imag)]
    for g in c.gates:
        if isinstance(g, PauliX):
            lines.append("X %d" % g.wire)
        elif isinstance(g, CNot):
            lines.append("CNOT %d %d" % (g.control, g.target))
        elif isinstance(g, Single):
            lines.append("U %d %s" % (g.wire, _fmt_payload(g.u)))
        elif isinstance(g, MultiControlled):
            lines.append(
                "CU %s %d %s"
                % (",".join(str(w) for w in g.controls), g.target, _fmt_payload(g.u))
            )
        else:
            raise DimensionError("unknown gate variant %r" % (g,))
    return "\n".join(lines) + "\n"


def _parse_payload(parts):
    if len(parts) != 8:
        raise DomainError("gate payload needs 8 reals, got %d" % len(parts))
    vals = [float(p) for p in parts]
    # complex(re, im) rather than re + 1j*im: the addition would turn a
    # negative-zero imaginary part into +0.0 and break bit-exact round trips
    return np.array(
        [
            [complex(vals[0], vals[1]), complex(vals[2], vals[3])],
            [complex(vals[4], vals[5]), complex(vals[6], vals[7])],
        ],
        dtype=complex,
    )


def from_text(text):
    """Parse the to_text format back into a Circuit."""
    wires = None
    phase = 1.0 + 0.0j
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag = parts[0]
        try:
            if tag == "wires":
                wires = int(parts[1])
            elif tag == "phase":
                phase = complex(float(parts[1]), float(parts[2]))
            elif tag == "X":
                gates.append(PauliX(int(parts[1])))
            elif tag == "CNOT":
                gates.append(CNot(int(parts[1]), int(parts[2])))
            elif tag == "U":
                gates.append(Single(int(parts[1]), _parse_payload(parts[2:])))
            elif tag == "CU":
                controls = tuple(int(w) for w in parts[1].split(","))
                gates.append(MultiControlled(controls, int(parts[2]), _parse_payload(parts[3:])))
            else:
                raise DomainError("unknown directive %r" % tag)
            if gates and wires is not None:
                for w in gates[-1].wires_used():
                    if not (0 <= w < wires):
                        raise DomainError(
                            "wire %d outside %d-wire circuit" % (w, wires)
                        )
        except (IndexError, ValueError) as exc:
            raise DomainError("line %d: malformed gate line %r" % (lineno, raw)) from exc
        except (DomainError, DimensionError, ShapeError, UnitarityError) as exc:
            raise DomainError("line %d: %s" % (lineno, exc)) from None
    if wires is None:
        raise DomainError("missing 'wires' header")
    try:
        return Circuit(wires, gates, phase)
    except DimensionError as exc:
        raise DomainError(str(exc)) from None
