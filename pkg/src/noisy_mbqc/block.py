"""The one-dimensional measurement step and its four noise locations.

One computational step entangles the current qubit with a fresh |+> qubit
through CZ and measures the first qubit, either in the Z basis or in the
equatorial plane at angle phi.  Each outcome k implements a trace-halving
channel on the surviving qubit:

* Z basis:      rho -> (1/2) Z^k rho Z^k
* equatorial:   rho -> (1/2) X^k H exp(i*phi*Z/2) rho exp(-i*phi*Z/2) H X^k

Noise can strike at four places: on the input before CZ (``alpha1``), on the
fresh plus qubit before CZ (``alpha2``), on the measured qubit just before
readout (``alpha3``), or on the output after CZ (``alpha4``).  Input and
output noise compose directly; the other two locations map to new channels
whose Kraus operators are diagonal combinations I and Z, so the composite
step is ``alpha4 o mapped(alpha2) o step_k o mapped(alpha3, k) o alpha1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import densemath as dm
from .channels import (
    TRACE_NON_INCREASING,
    XZ_ROTATED,
    ZX_MEAS,
    KrausChannel,
    apply,
    channel,
    compose,
    identity_channel,
    pauli_decompose,
)
from .errors import DimensionMismatch, ZBasisUnsupported

Z_BASIS = "z"
EQUATORIAL = "equatorial"


@dataclass(frozen=True)
class MeasSpec:
    """Measurement basis (Z or equatorial at angle phi) plus outcome bit."""

    basis: str
    phi: float = 0.0
    outcome: int = 0

    def __post_init__(self):
        if self.basis not in (Z_BASIS, EQUATORIAL):
            raise ValueError(f"unknown basis {self.basis!r}")
        if not np.isfinite(self.phi):
            raise ValueError("phi must be finite")
        if self.outcome not in (0, 1):
            raise ValueError("outcome must be 0 or 1")

    @classmethod
    def z(cls, outcome: int = 0) -> "MeasSpec":
        return cls(basis=Z_BASIS, outcome=outcome)

    @classmethod
    def equatorial(cls, phi: float, outcome: int = 0) -> "MeasSpec":
        return cls(basis=EQUATORIAL, phi=phi, outcome=outcome)


@dataclass(frozen=True)
class BlockNoiseConfig:
    """Measurement spec plus the four optional noise channels."""

    meas: MeasSpec
    alpha1: KrausChannel | None = None
    alpha2: KrausChannel | None = None
    alpha3: KrausChannel | None = None
    alpha4: KrausChannel | None = None

    def channels(self) -> dict[str, KrausChannel | None]:
        return {
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "alpha3": self.alpha3,
            "alpha4": self.alpha4,
        }


@dataclass(frozen=True)
class BlockChannel:
    """One measurement step as a trace-non-increasing channel, with notes on
    which noise-location mappings went into it."""

    kraus: KrausChannel
    meas: MeasSpec
    applied: tuple[str, ...] = ()


def ideal_block(meas: MeasSpec) -> BlockChannel:
    """Noiseless step channel for the given basis and outcome."""
    k = meas.outcome
    if meas.basis == Z_BASIS:
        op = np.linalg.matrix_power(dm.Z, k) / np.sqrt(2.0)
    else:
        xk = np.linalg.matrix_power(dm.X, k)
        op = xk @ dm.H @ dm.rz(-meas.phi) / np.sqrt(2.0)
    return BlockChannel(
        kraus=KrausChannel((op,), TRACE_NON_INCREASING),
        meas=meas,
        applied=("ideal",),
    )


def map_resource_noise(alpha2: KrausChannel) -> KrausChannel:
    """Channel equivalent to ``alpha2`` hitting the fresh plus qubit.

    Because the noise acts on a known +1 eigenstate of X, each Kraus operator
    collapses onto the diagonal: with coefficients a_gh in the Z^g X^h
    ordering, the mapped operator is (a_00 + a_01) I + (a_10 - i a_11) Z.
    Basis elements therefore map as I -> I, X -> I, Z -> Z, Y -> -iZ.
    """
    if alpha2.dim != 2:
        raise DimensionMismatch("resource noise must be a single-qubit channel")
    mapped = []
    for k in alpha2.ops:
        a = pauli_decompose(k, ZX_MEAS).table
        mapped.append((a[0, 0] + a[0, 1]) * dm.I2 + (a[1, 0] - 1j * a[1, 1]) * dm.Z)
    return channel(mapped)


def map_measurement_noise(alpha3: KrausChannel, phi: float, k: int) -> KrausChannel:
    """Outcome-dependent channel equivalent to noise just before readout.

    Kraus operators are decomposed in the equatorial-rotated basis; each maps
    to sum_u a~_uk Z^u with a~_uk = sum_v i^(u*v) (-1)^(k*v) a_uv, i.e. the
    rotated basis elements go I -> I, Z -> Z, X -> (-1)^k I, Y -> i(-1)^k Z.
    """
    if alpha3.dim != 2:
        raise DimensionMismatch("measurement noise must be a single-qubit channel")
    if not np.isfinite(phi):
        raise ValueError("phi must be finite")
    sign = -1.0 if k % 2 else 1.0
    mapped = []
    for op in alpha3.ops:
        a = pauli_decompose(op, XZ_ROTATED, phi).table
        a0 = a[0, 0] + sign * a[0, 1]
        a1 = a[1, 0] + 1j * sign * a[1, 1]
        mapped.append(a0 * dm.I2 + a1 * dm.Z)
    return channel(mapped)


def compose_block_noise(cfg: BlockNoiseConfig) -> KrausChannel:
    """Single channel for a noisy equatorial step with outcome ``cfg.meas.outcome``.

    Builds ``alpha4 o mapped(alpha2) o step o mapped(alpha3, k) o alpha1``;
    absent channels default to the identity.
    """
    meas = cfg.meas
    if meas.basis != EQUATORIAL:
        raise ZBasisUnsupported(
            "noise composition is defined for equatorial measurements only"
        )
    composite = cfg.alpha1 if cfg.alpha1 is not None else identity_channel()
    if cfg.alpha3 is not None:
        composite = compose(
            map_measurement_noise(cfg.alpha3, meas.phi, meas.outcome), composite
        )
    composite = compose(ideal_block(meas).kraus, composite)
    if cfg.alpha2 is not None:
        composite = compose(map_resource_noise(cfg.alpha2), composite)
    if cfg.alpha4 is not None:
        composite = compose(cfg.alpha4, composite)
    return composite


def block_channel(cfg: BlockNoiseConfig) -> BlockChannel:
    """Like :func:`compose_block_noise` but keeping provenance metadata."""
    applied = ["ideal"]
    for name, ch in cfg.channels().items():
        if ch is not None:
            applied.append(name)
    return BlockChannel(
        kraus=compose_block_noise(cfg), meas=cfg.meas, applied=tuple(applied)
    )


def run_block_sequence(rho: np.ndarray, blocks) -> np.ndarray:
    """Apply a chain of measurement steps; output trace is the joint branch
    probability of the chosen outcome string."""
    blocks = list(blocks)
    if not blocks:
        raise ValueError("block sequence must be nonempty")
    out = np.asarray(rho, dtype=complex)
    for cfg in blocks:
        if cfg.meas.basis == Z_BASIS:
            if any(ch is not None for ch in cfg.channels().values()):
                raise ZBasisUnsupported(
                    "noisy blocks require an equatorial measurement"
                )
            out = apply(ideal_block(cfg.meas).kraus, out)
        else:
            out = apply(compose_block_noise(cfg), out)
    return out
