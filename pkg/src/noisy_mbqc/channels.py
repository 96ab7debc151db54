"""Kraus-channel algebra and Pauli coefficient tables.

A channel is a finite list of equal-shaped Kraus operators.  Channels are
compared through their Choi matrices (Kraus sets are not unique), and three
single-qubit Pauli coefficient conventions are supported:

* ``XZ_STD``:     sigma_gh = i^(g*h) X^g Z^h, so the (0,1) slot holds Z and
  the (1,0) slot holds X.
* ``ZX_MEAS``:    sigma_gh = (-i)^(g*h) Z^g X^h, the ordering natural for
  measurement-side bookkeeping; (0,1) holds X and (1,0) holds Z.
* ``XZ_ROTATED``: the ``ZX_MEAS`` basis conjugated by exp(-i*phi*Z/2), used
  when the noise can be referred to a tilted equatorial measurement.

Both orderings share sigma_00 = I and sigma_11 = Y; mixing conventions is a
caller error, so the convention travels with the coefficient table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import densemath as dm
from .errors import DimensionMismatch, NotAChannel

TRACE_PRESERVING = "trace_preserving"
TRACE_NON_INCREASING = "trace_non_increasing"
GENERAL = "general"

XZ_STD = "xz_std"
ZX_MEAS = "zx_meas"
XZ_ROTATED = "xz_rotated"

CONVENTIONS = (XZ_STD, ZX_MEAS, XZ_ROTATED)


@dataclass(frozen=True)
class KrausChannel:
    """A completely positive map given by Kraus operators.

    ``kind`` records how the operators resolve the trace condition:
    trace-preserving (sum K^dag K = I), trace-non-increasing (sum K^dag K
    below I, e.g. a post-selected measurement branch), or general (a derived
    map with no trace bound, produced by the noise-location mappings).
    """

    ops: tuple[np.ndarray, ...]
    kind: str

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def __len__(self) -> int:
        return len(self.ops)


def kraus_sum(ops) -> np.ndarray:
    """The operator sum K^dag K over all Kraus operators."""
    return sum(dm.dag(k) @ k for k in ops)


def _check_ops(ops) -> tuple[np.ndarray, ...]:
    ops = tuple(np.asarray(k, dtype=complex) for k in ops)
    if not ops:
        raise DimensionMismatch("a channel needs at least one Kraus operator")
    d = ops[0].shape
    if len(d) != 2 or d[0] != d[1]:
        raise DimensionMismatch(f"Kraus operators must be square, got {d}")
    if any(k.shape != d for k in ops):
        raise DimensionMismatch("Kraus operators must share one shape")
    return ops


def classify(ops, tol: float = dm.ATOL) -> str:
    """Classify a Kraus set by its trace behaviour (never raises)."""
    ops = _check_ops(ops)
    s = kraus_sum(ops)
    eye = np.eye(s.shape[0])
    if dm.max_abs_diff(s, eye) <= tol:
        return TRACE_PRESERVING
    if np.linalg.eigvalsh(0.5 * (s + dm.dag(s))).max() <= 1.0 + tol:
        return TRACE_NON_INCREASING
    return GENERAL


def validate(ops, tol: float = dm.ATOL) -> KrausChannel:
    """Build a channel, insisting on sum K^dag K bounded by the identity."""
    ops = _check_ops(ops)
    kind = classify(ops, tol)
    if kind == GENERAL:
        excess = np.linalg.eigvalsh(kraus_sum(ops)).max() - 1.0
        raise NotAChannel(
            f"sum K^dag K exceeds the identity (largest eigenvalue 1 + {excess:.3e})"
        )
    return KrausChannel(ops, kind)


def channel(ops, tol: float = dm.ATOL) -> KrausChannel:
    """Build a channel without the trace bound; kind is classified."""
    ops = _check_ops(ops)
    return KrausChannel(ops, classify(ops, tol))


def apply(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """Apply the channel: sum_m K_m rho K_m^dag."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim, ch.dim):
        raise DimensionMismatch(
            f"state shape {rho.shape} does not match channel dimension {ch.dim}"
        )
    out = np.zeros_like(rho)
    for k in ch.ops:
        out += k @ rho @ dm.dag(k)
    return out


def compose(after: KrausChannel, before: KrausChannel) -> KrausChannel:
    """Composite map acting as ``after(before(rho))``; Kraus set {A_i B_j}."""
    if after.dim != before.dim:
        raise DimensionMismatch(
            f"cannot compose dimension {after.dim} after {before.dim}"
        )
    ops = tuple(a @ b for a in after.ops for b in before.ops)
    return KrausChannel(ops, classify(ops))


def choi(ch: KrausChannel) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) ch(|i><j|), trace d for CPTP maps."""
    d = ch.dim
    c = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            c += np.kron(e, apply(ch, e))
    return c


def choi_distance(a: KrausChannel, b: KrausChannel) -> float:
    """Largest entrywise difference between the two Choi matrices."""
    return dm.max_abs_diff(choi(a), choi(b))


def channels_equal(a: KrausChannel, b: KrausChannel, tol: float = 1e-9) -> bool:
    """Channel equality as Choi max-entry distance within ``tol``."""
    return choi_distance(a, b) <= tol


# ---------------------------------------------------------------------------
# Pauli coefficient tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PauliCoeffs:
    """2x2 coefficient table of a single-qubit operator in a declared basis."""

    table: np.ndarray  # indexed [g, h]
    convention: str
    phi: float = 0.0


def basis_element(g: int, h: int, convention: str, phi: float = 0.0) -> np.ndarray:
    """The (g, h) basis operator of the given convention."""
    if convention == XZ_STD:
        m = (1j) ** (g * h) * np.linalg.matrix_power(dm.X, g) @ np.linalg.matrix_power(
            dm.Z, h
        )
        return m
    if convention == ZX_MEAS:
        return (-1j) ** (g * h) * np.linalg.matrix_power(
            dm.Z, g
        ) @ np.linalg.matrix_power(dm.X, h)
    if convention == XZ_ROTATED:
        u = dm.rz(phi)
        return u @ basis_element(g, h, ZX_MEAS) @ dm.dag(u)
    raise ValueError(f"unknown convention {convention!r}")


def pauli_decompose(
    k: np.ndarray, convention: str = XZ_STD, phi: float = 0.0
) -> PauliCoeffs:
    """Coefficients a_gh with k = sum_gh a_gh * basis_element(g, h)."""
    k = np.asarray(k, dtype=complex)
    if k.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 matrix, got {k.shape}")
    table = np.zeros((2, 2), dtype=complex)
    for g in range(2):
        for h in range(2):
            b = basis_element(g, h, convention, phi)
            table[g, h] = np.trace(dm.dag(b) @ k) / 2.0
    return PauliCoeffs(table=table, convention=convention, phi=phi)


def pauli_reconstruct(coeffs: PauliCoeffs) -> np.ndarray:
    """Rebuild the operator from its coefficient table."""
    out = np.zeros((2, 2), dtype=complex)
    for g in range(2):
        for h in range(2):
            out += coeffs.table[g, h] * basis_element(
                g, h, coeffs.convention, coeffs.phi
            )
    return out


# ---------------------------------------------------------------------------
# Stock channels
# ---------------------------------------------------------------------------


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=complex),), TRACE_PRESERVING)


def unitary_channel(u: np.ndarray) -> KrausChannel:
    return validate([np.asarray(u, dtype=complex)])


def mixed_unitary(pairs) -> KrausChannel:
    """Channel applying unitary u with probability p for each (p, u) pair."""
    return validate([np.sqrt(p) * np.asarray(u, dtype=complex) for p, u in pairs])


def bit_flip(p: float) -> KrausChannel:
    return mixed_unitary([(1.0 - p, dm.I2), (p, dm.X)])


def phase_flip(p: float) -> KrausChannel:
    return mixed_unitary([(1.0 - p, dm.I2), (p, dm.Z)])


def depolarizing() -> KrausChannel:
    """Completely depolarising channel, sending every input to I/2."""
    return validate([0.5 * s for s in (dm.I2, dm.X, dm.Y, dm.Z)])


def random_channel(rng: np.random.Generator, n_kraus: int = 2, dim: int = 2) -> KrausChannel:
    """A Haar-flavoured CPTP channel from a random isometry.

    A Gaussian (n_kraus*dim) x dim matrix is orthonormalised by QR; slicing
    the isometry into dim x dim blocks yields Kraus operators that satisfy
    the trace-preservation sum exactly.
    """
    g = rng.normal(size=(n_kraus * dim, dim)) + 1j * rng.normal(size=(n_kraus * dim, dim))
    q, _ = np.linalg.qr(g)
    ops = [q[i * dim : (i + 1) * dim, :] for i in range(n_kraus)]
    return validate(ops)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def channel_to_dict(ch: KrausChannel) -> dict:
    """JSON-ready form: {dim, kind, ops} with [re, im] entry pairs."""
    return {
        "dim": ch.dim,
        "kind": ch.kind,
        "ops": [dm.mat_to_json(k) for k in ch.ops],
    }


def channel_from_dict(d: dict, tol: float = dm.ATOL) -> KrausChannel:
    """Parse and re-validate a serialized channel."""
    ops = [dm.mat_from_json(rows) for rows in d["ops"]]
    dim = int(d.get("dim", ops[0].shape[0]))
    if any(k.shape != (dim, dim) for k in ops):
        raise DimensionMismatch("serialized operators disagree with declared dim")
    return validate(ops, tol)
