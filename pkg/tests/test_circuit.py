import numpy as np
import pytest

from probclone.circuit import (
    Circuit,
    CNot,
    MultiControlled,
    PauliX,
    Phase,
    Single,
    TwoLevel,
    compile_unitary,
    factor_matrix,
    from_text,
    gate_stats,
    lift_two_level,
    lower_multicontrolled,
    matrix,
    permutation_to_cnots,
    remap_wires,
    to_text,
    two_level_decompose,
    with_controls,
)
from probclone.errors import (
    DegenerateError,
    DimensionError,
    DomainError,
    ShapeError,
    SizeError,
    UnitarityError,
)

HAD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)
SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def random_unitary(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_payload_must_be_unitary_2x2():
    with pytest.raises(UnitarityError):
        Single(0, np.array([[1.0, 0.0], [0.0, 2.0]]))
    with pytest.raises(ShapeError):
        Single(0, np.eye(3))


def test_single_gate_matrix_placement():
    m0 = matrix(Circuit(2, (Single(0, HAD),)))
    m1 = matrix(Circuit(2, (Single(1, HAD),)))
    assert np.max(np.abs(m0 - np.kron(HAD, np.eye(2)))) < 1e-12
    assert np.max(np.abs(m1 - np.kron(np.eye(2), HAD))) < 1e-12


def test_cnot_matrix_both_orientations():
    top = matrix(Circuit(2, (CNot(0, 1),)))
    want = np.zeros((4, 4))
    want[0, 0] = want[1, 1] = want[2, 3] = want[3, 2] = 1.0
    assert np.max(np.abs(top - want)) < 1e-14
    bottom = matrix(Circuit(2, (CNot(1, 0),)))
    want = np.zeros((4, 4))
    want[0, 0] = want[3, 1] = want[2, 2] = want[1, 3] = 1.0
    assert np.max(np.abs(bottom - want)) < 1e-14


def test_multicontrolled_all_ones_semantics():
    g = MultiControlled((0, 1), 2, SX)
    m = matrix(Circuit(3, (g,)))
    want = np.eye(8)
    want[6, 6] = want[7, 7] = 0.0
    want[6, 7] = want[7, 6] = 1.0
    assert np.max(np.abs(m - want)) < 1e-14


def test_gate_order_earliest_is_rightmost_factor():
    rng = np.random.default_rng(41)
    a = random_unitary(rng, 2)
    b = random_unitary(rng, 2)
    m = matrix(Circuit(1, (Single(0, a), Single(0, b))))
    assert np.max(np.abs(m - b @ a)) < 1e-12


def test_circuit_adjoint_and_concat():
    rng = np.random.default_rng(42)
    c = Circuit(
        2,
        (Single(0, random_unitary(rng, 2)), CNot(0, 1), Single(1, random_unitary(rng, 2))),
        phase=np.exp(0.3j),
    )
    m = matrix(c)
    assert np.max(np.abs(matrix(c.adjoint()) - m.conj().T)) < 1e-12
    both = c.concat(c.adjoint())
    assert np.max(np.abs(matrix(both) - np.eye(4))) < 1e-12


def test_matrix_wire_cap():
    c = Circuit(13, ())
    with pytest.raises(SizeError):
        matrix(c)


def test_two_level_decompose_reconstructs():
    rng = np.random.default_rng(43)
    for dim in (2, 3, 4, 6, 8):
        u = random_unitary(rng, dim)
        factors = two_level_decompose(u)
        assert len(factors) <= dim * (dim - 1) // 2 + dim
        prod = np.eye(dim, dtype=complex)
        for f in factors:
            prod = prod @ factor_matrix(f, dim)
        assert np.max(np.abs(prod - u)) < 1e-9


def test_two_level_decompose_rejects_nonunitary():
    with pytest.raises(UnitarityError):
        two_level_decompose(np.ones((3, 3), dtype=complex))


def test_permutation_to_cnots_is_correct_permutation():
    rng = np.random.default_rng(44)
    wires = 3
    dim = 1 << wires
    all_ones = dim - 1
    almost = dim - 2
    for _ in range(20):
        i, j = rng.choice(dim, size=2, replace=False)
        c = permutation_to_cnots(int(i), int(j), wires)
        m = matrix(c)
        assert np.max(np.abs(np.abs(m) ** 2 - np.abs(m))) < 1e-12  # 0/1 entries
        hi, lo = max(i, j), min(i, j)
        src = np.zeros(dim)
        src[hi] = 1.0
        assert abs((m @ src)[all_ones] - 1.0) < 1e-12
        src = np.zeros(dim)
        src[lo] = 1.0
        assert abs((m @ src)[almost] - 1.0) < 1e-12
    with pytest.raises(DegenerateError):
        permutation_to_cnots(3, 3, 2)


def test_lift_two_level_matches_factor_product():
    rng = np.random.default_rng(45)
    for wires in (1, 2, 3):
        dim = 1 << wires
        u = random_unitary(rng, dim)
        factors = two_level_decompose(u)
        c = lift_two_level(factors, wires)
        assert np.max(np.abs(matrix(c) - u)) < 1e-9


def test_lift_phase_factor_alone():
    for k in (0, 1, 2, 3):
        c = lift_two_level([Phase(k, 0.9)], 2)
        want = np.eye(4, dtype=complex)
        want[k, k] = np.exp(0.9j)
        assert np.max(np.abs(matrix(c) - want)) < 1e-12


def test_compile_unitary_rejects_bad_dimension():
    with pytest.raises(ShapeError):
        compile_unitary(np.eye(3, dtype=complex))


def test_compile_unitary_exact():
    rng = np.random.default_rng(46)
    for dim in (2, 4, 8):
        u = random_unitary(rng, dim)
        c = compile_unitary(u)
        assert np.max(np.abs(matrix(c) - u)) < 1e-9


def test_toffoli_lowering_exact():
    g = MultiControlled((0, 1), 2, SX)
    lowered = lower_multicontrolled(Circuit(3, (g,)))
    stats = gate_stats(lowered)
    assert stats["counts"]["MultiControlled"] == 0
    assert stats["counts"]["CNot"] == 6
    want = matrix(Circuit(3, (g,)))
    assert np.max(np.abs(matrix(lowered) - want)) < 1e-12


def test_lowering_random_controlled_gates():
    rng = np.random.default_rng(47)
    for controls in (1, 2, 3):
        u = random_unitary(rng, 2)
        g = MultiControlled(tuple(range(controls)), controls, u)
        c = Circuit(controls + 1, (g,))
        lowered = lower_multicontrolled(c)
        assert gate_stats(lowered)["counts"]["MultiControlled"] == 0
        assert np.max(np.abs(matrix(lowered) - matrix(c))) < 1e-9


def test_with_controls_value_semantics():
    rng = np.random.default_rng(48)
    u = random_unitary(rng, 2)
    frag = Circuit(2, (Single(1, u),))
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    gated = with_controls(frag, {0: 1})
    want = np.kron(p0, np.eye(2)) + np.kron(p1, u)
    assert np.max(np.abs(matrix(gated) - want)) < 1e-12
    gated = with_controls(frag, {0: 0})
    want = np.kron(p1, np.eye(2)) + np.kron(p0, u)
    assert np.max(np.abs(matrix(gated) - want)) < 1e-12
    assert with_controls(frag, {}) is frag


def test_with_controls_rejects_phase_and_overlap():
    frag = Circuit(2, (Single(1, HAD),), phase=1j)
    with pytest.raises(DomainError):
        with_controls(frag, {0: 1})
    frag = Circuit(2, (Single(1, HAD),))
    with pytest.raises(DimensionError):
        with_controls(frag, {1: 1})


def test_remap_wires_moves_gates():
    c = Circuit(2, (CNot(0, 1),))
    moved = remap_wires(c, [2, 0], 3)
    m = matrix(moved)
    src = np.zeros(8)
    src[0b001] = 1.0  # wire 2 (control) is 1, wire 0 (target) flips
    out = m @ src
    assert abs(out[0b101] - 1.0) < 1e-12
    with pytest.raises(DimensionError):
        remap_wires(c, [1, 1], 3)


def test_gate_stats_counts_and_depth():
    c = Circuit(
        3,
        (
            Single(0, HAD),
            Single(1, HAD),
            CNot(0, 1),
            PauliX(2),
            MultiControlled((0,), 2, SX),
        ),
    )
    stats = gate_stats(c)
    assert stats["total"] == 5
    assert stats["counts"]["Single"] == 2
    assert stats["counts"]["CNot"] == 1
    assert stats["counts"]["PauliX"] == 1
    assert stats["counts"]["MultiControlled"] == 1
    assert stats["depth"] == 3
    assert gate_stats(Circuit(2, ()))["depth"] == 0


def test_text_round_trip_bit_exact():
    rng = np.random.default_rng(49)
    u = random_unitary(rng, 2)
    c = Circuit(
        3,
        (
            Single(0, u),
            CNot(1, 2),
            PauliX(0),
            MultiControlled((0, 2), 1, u),
        ),
        phase=np.exp(0.7j),
    )
    text = to_text(c)
    back = from_text(text)
    assert back.wires == c.wires
    assert back.phase == c.phase
    assert len(back.gates) == len(c.gates)
    for g0, g1 in zip(c.gates, back.gates):
        assert type(g0) is type(g1)
    assert np.array_equal(back.gates[0].u, c.gates[0].u)
    assert np.array_equal(back.gates[3].u, c.gates[3].u)
    assert to_text(back) == text


def test_from_text_reports_line_numbers():
    text = "wires 2\nphase 1 0\nCNOT 0 5\n"
    with pytest.raises(DomainError) as err:
        from_text(text)
    assert "line 3" in str(err.value)
    with pytest.raises(DomainError):
        from_text("wires 2\nFROB 0\n")
    with pytest.raises(DomainError):
        from_text("X 0\n")  # missing header


def test_from_text_skips_comments_and_blanks():
    text = "# header\nwires 1\n\nphase 1 0\nX 0\n"
    c = from_text(text)
    assert len(c.gates) == 1 and isinstance(c.gates[0], PauliX)
