import numpy as np
import pytest
from conftest import random_complex, random_density

from noisy_mbqc import densemath as dm
from noisy_mbqc.channels import (
    GENERAL,
    TRACE_NON_INCREASING,
    TRACE_PRESERVING,
    XZ_ROTATED,
    XZ_STD,
    ZX_MEAS,
    KrausChannel,
    apply,
    basis_element,
    bit_flip,
    channel,
    channel_from_dict,
    channel_to_dict,
    channels_equal,
    choi,
    choi_distance,
    compose,
    depolarizing,
    identity_channel,
    mixed_unitary,
    pauli_decompose,
    pauli_reconstruct,
    phase_flip,
    random_channel,
    unitary_channel,
    validate,
)
from noisy_mbqc.errors import DimensionMismatch, NotAChannel


def test_validate_identity_is_tp():
    assert validate([dm.I2]).kind == TRACE_PRESERVING


def test_validate_phase_flip_half_is_tp():
    ch = validate([dm.I2 / np.sqrt(2), dm.Z / np.sqrt(2)])
    assert ch.kind == TRACE_PRESERVING


def test_validate_depolarizing_is_tp():
    assert depolarizing().kind == TRACE_PRESERVING


def test_validate_branch_is_trace_non_increasing():
    assert validate([dm.Z / np.sqrt(2)]).kind == TRACE_NON_INCREASING


def test_validate_rejects_expanding_set():
    with pytest.raises(NotAChannel):
        validate([np.sqrt(2.0) * dm.I2])


def test_validate_rejects_bad_shapes():
    with pytest.raises(DimensionMismatch):
        validate([])
    with pytest.raises(DimensionMismatch):
        validate([dm.I2, np.eye(4)])


def test_channel_classifies_general():
    ch = channel([np.sqrt(2.0) * dm.projector(dm.KET0)])
    assert ch.kind == GENERAL


def test_apply_identity(rng):
    rho = random_density(rng)
    np.testing.assert_allclose(apply(identity_channel(), rho), rho, atol=1e-12)


def test_apply_depolarizing_examples():
    np.testing.assert_allclose(
        apply(depolarizing(), dm.projector(dm.KET0)), dm.I2 / 2, atol=1e-12
    )


def test_apply_phase_flip_half_kills_coherence():
    got = apply(phase_flip(0.5), dm.projector(dm.PLUS))
    np.testing.assert_allclose(got, dm.I2 / 2, atol=1e-12)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        apply(identity_channel(), np.eye(4))


def test_apply_preserves_psd_and_trace(rng):
    for _ in range(20):
        ch = random_channel(rng, int(rng.integers(1, 5)))
        rho = random_density(rng)
        out = apply(ch, rho)
        assert dm.is_psd(out, tol=1e-10)
        assert np.trace(out).real <= np.trace(rho).real + 1e-10


def test_compose_with_identity_is_identity_on_choi(rng):
    ch = random_channel(rng, 3)
    assert channels_equal(compose(identity_channel(), ch), ch, tol=1e-12)


def test_compose_phase_flip_half_idempotent():
    pf = phase_flip(0.5)
    assert channels_equal(compose(pf, pf), pf, tol=1e-12)


def test_compose_x_conjugation_squares_to_identity():
    x = unitary_channel(dm.X)
    assert channels_equal(compose(x, x), identity_channel(), tol=1e-12)


def test_compose_matches_sequential_apply(rng):
    a = random_channel(rng, 2)
    b = random_channel(rng, 3)
    rho = random_density(rng)
    np.testing.assert_allclose(
        apply(compose(a, b), rho), apply(a, apply(b, rho)), atol=1e-12
    )


def test_choi_identity_is_bell_projector():
    c = choi(identity_channel())
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    np.testing.assert_allclose(c, 2.0 * dm.projector(bell), atol=1e-12)
    assert np.trace(c).real == pytest.approx(2.0)
    assert np.linalg.matrix_rank(c, tol=1e-10) == 1


def test_choi_depolarizing_is_maximally_mixed():
    np.testing.assert_allclose(choi(depolarizing()), np.eye(4) / 2, atol=1e-12)


def test_choi_gap_between_phase_flips():
    # entrywise Choi oracle: the only differing entries are the |0><1| blocks,
    # holding 1 - 2p; the gap between p=1/4 and p=1/2 is therefore 0.5
    gap = choi_distance(phase_flip(0.25), phase_flip(0.5))
    assert gap == pytest.approx(0.5, abs=1e-12)


def test_choi_tp_partial_trace_is_identity(rng):
    c = choi(random_channel(rng, 3))
    np.testing.assert_allclose(
        dm.partial_trace(c, keep=[0], dims=(2, 2)), dm.I2, atol=1e-10
    )


def test_choi_psd(rng):
    assert dm.is_psd(choi(random_channel(rng, 2)), tol=1e-10)


def test_choi_of_composition_is_linear(rng):
    a = random_channel(rng, 2)
    b = random_channel(rng, 2)
    comp = compose(a, b)
    direct = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1.0
            direct += np.kron(e, apply(a, apply(b, e)))
    np.testing.assert_allclose(choi(comp), direct, atol=1e-12)


def test_kraus_remix_gives_same_channel(rng):
    # an isometry on the Kraus index leaves the channel untouched
    for _ in range(10):
        n = int(rng.integers(2, 5))
        ch = random_channel(rng, n)
        g = random_complex(rng, (n, n))
        w, _ = np.linalg.qr(g)
        remixed = KrausChannel(
            tuple(sum(w[a, b] * ch.ops[b] for b in range(n)) for a in range(n)),
            ch.kind,
        )
        assert choi_distance(ch, remixed) <= 1e-12


def test_pauli_decompose_basis_elements():
    # in the X-then-Z ordering the (1, 0) slot holds X and (0, 1) holds Z
    table = pauli_decompose(dm.X, XZ_STD).table
    np.testing.assert_allclose(table, [[0, 0], [1, 0]], atol=1e-12)
    table = pauli_decompose(dm.Z, XZ_STD).table
    np.testing.assert_allclose(table, [[0, 1], [0, 0]], atol=1e-12)
    # the measurement ordering swaps the off-diagonal slots
    table = pauli_decompose(dm.X, ZX_MEAS).table
    np.testing.assert_allclose(table, [[0, 1], [0, 0]], atol=1e-12)


def test_pauli_decompose_hadamard():
    table = pauli_decompose(dm.H, XZ_STD).table
    np.testing.assert_allclose(
        table, [[0, 1 / np.sqrt(2)], [1 / np.sqrt(2), 0]], atol=1e-12
    )


def test_pauli_decompose_rotated_z_slot():
    # Z commutes with the rotation, so it stays a lone basis element
    for phi in (0.0, 0.9, 4.2):
        u = dm.rz(phi)
        table = pauli_decompose(u @ dm.Z @ dm.dag(u), XZ_ROTATED, phi).table
        np.testing.assert_allclose(table, [[0, 0], [1, 0]], atol=1e-12)


def test_pauli_reconstruct_trivial():
    zero = pauli_reconstruct(
        pauli_decompose(np.zeros((2, 2), dtype=complex), XZ_STD)
    )
    np.testing.assert_allclose(zero, np.zeros((2, 2)), atol=1e-15)
    from noisy_mbqc.channels import PauliCoeffs

    table = np.zeros((2, 2), dtype=complex)
    table[0, 0] = 1.0
    for conv in (XZ_STD, ZX_MEAS, XZ_ROTATED):
        np.testing.assert_allclose(
            pauli_reconstruct(PauliCoeffs(table, conv, phi=0.7)), dm.I2, atol=1e-12
        )


def test_pauli_roundtrip_random(rng):
    # 1000 random operators across the three conventions
    for i in range(1000):
        k = random_complex(rng, (2, 2))
        conv = (XZ_STD, ZX_MEAS, XZ_ROTATED)[i % 3]
        phi = float(rng.uniform(0, 2 * np.pi))
        coeffs = pauli_decompose(k, conv, phi)
        assert dm.max_abs_diff(pauli_reconstruct(coeffs), k) <= 1e-12


def test_basis_elements_share_corners():
    # both orderings agree on I and Y
    np.testing.assert_allclose(basis_element(0, 0, XZ_STD), dm.I2)
    np.testing.assert_allclose(basis_element(1, 1, XZ_STD), dm.Y, atol=1e-12)
    np.testing.assert_allclose(basis_element(1, 1, ZX_MEAS), dm.Y, atol=1e-12)


def test_bit_flip_and_mixed_unitary():
    ch = bit_flip(0.3)
    assert ch.kind == TRACE_PRESERVING
    np.testing.assert_allclose(ch.ops[1], np.sqrt(0.3) * dm.X, atol=1e-12)
    h = mixed_unitary([(0.6, dm.I2), (0.4, dm.H)])
    assert h.kind == TRACE_PRESERVING


def test_random_channel_is_cptp(rng):
    for n in (1, 2, 3, 4):
        ch = random_channel(rng, n)
        assert ch.kind == TRACE_PRESERVING
        assert len(ch.ops) == n


def test_serialization_roundtrip(rng):
    ch = random_channel(rng, 3)
    doc = channel_to_dict(ch)
    back = channel_from_dict(doc)
    assert back.kind == ch.kind
    assert channels_equal(back, ch, tol=1e-12)
    assert doc["dim"] == 2 and len(doc["ops"]) == 3
