"""Brute-force density-matrix circuit simulator used as ground truth.

The register holds up to ``NOISY_MBQC_MAX_QUBITS`` (default 12) sites.
Sites enter the simulation when a prep op runs and leave it when a
measurement with ``remove=True`` traces them out, so long chains can be
simulated with a small live register.  Everything is linear in the state,
which lets callers feed computational basis elements |i><j| to assemble
process matrices; no positivity is enforced on prepared operators.
"""

from __future__ import annotations

import os
from bisect import bisect_left
from dataclasses import dataclass, field

import numpy as np

from . import densemath as dm
from .block import EQUATORIAL, Z_BASIS, BlockNoiseConfig, MeasSpec
from .channels import KrausChannel
from .errors import (
    DimensionMismatch,
    NonOrthonormalBasis,
    SiteOutOfRange,
    SizeLimit,
    ZBasisUnsupported,
)

ENV_MAX_QUBITS = "NOISY_MBQC_MAX_QUBITS"
DEFAULT_MAX_QUBITS = 12


def max_oracle_qubits() -> int:
    """Dense-simulation cap, overridable via the environment."""
    raw = os.environ.get(ENV_MAX_QUBITS)
    if raw is None:
        return DEFAULT_MAX_QUBITS
    try:
        return int(raw)
    except ValueError:
        raise SizeLimit(f"{ENV_MAX_QUBITS} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class PrepPlus:
    site: int


@dataclass(frozen=True)
class PrepState:
    site: int
    rho: np.ndarray


@dataclass(frozen=True)
class CZ:
    a: int
    b: int


@dataclass(frozen=True)
class Channel1Q:
    site: int
    channel: KrausChannel


@dataclass(frozen=True)
class Unitary1Q:
    site: int
    u: np.ndarray


@dataclass(frozen=True)
class Measure:
    """Project ``site`` onto the ``outcome`` vector of ``basis``.

    ``basis`` is a :class:`MeasSpec` or an orthonormal pair of kets.  With
    ``remove`` the site is traced out afterwards, shrinking the register.
    """

    site: int
    basis: object
    outcome: int
    remove: bool = True


@dataclass
class SimResult:
    state: np.ndarray  # over the surviving sites in ascending site order
    outcomes: list[tuple[int, int]] = field(default_factory=list)


def measurement_kets(basis) -> tuple[np.ndarray, np.ndarray]:
    """Resolve a measurement basis to its two outcome kets."""
    if isinstance(basis, MeasSpec):
        if basis.basis == Z_BASIS:
            return dm.KET0.copy(), dm.KET1.copy()
        return dm.equatorial_ket(basis.phi, 0), dm.equatorial_ket(basis.phi, 1)
    v0, v1 = (np.asarray(v, dtype=complex).reshape(-1) for v in basis)
    gram = np.array(
        [[np.vdot(v0, v0), np.vdot(v0, v1)], [np.vdot(v1, v0), np.vdot(v1, v1)]]
    )
    if dm.max_abs_diff(gram, np.eye(2)) > 1e-12:
        raise NonOrthonormalBasis("measurement kets must be orthonormal")
    return v0, v1


class _Register:
    """Live subset of the register as a dense operator."""

    def __init__(self, n: int):
        self.n = n
        self.sites: list[int] = []  # kept in ascending site order
        self.state = np.array([[1.0 + 0j]])

    @property
    def m(self) -> int:
        return len(self.sites)

    def check_site(self, site: int):
        if not 0 <= site < self.n:
            raise SiteOutOfRange(f"site {site} outside register of size {self.n}")

    def pos(self, site: int) -> int:
        self.check_site(site)
        if site not in self.sites:
            raise SiteOutOfRange(f"site {site} has not been prepared")
        return self.sites.index(site)

    def prep(self, site: int, block: np.ndarray):
        self.check_site(site)
        if site in self.sites:
            raise SiteOutOfRange(f"site {site} prepared twice")
        block = np.asarray(block, dtype=complex)
        if block.shape != (2, 2):
            raise DimensionMismatch("prepared state must be a 2x2 operator")
        pos = bisect_left(self.sites, site)
        m = self.m
        grown = np.kron(self.state, block)  # new axis last
        if pos != m:
            t = grown.reshape((2,) * (2 * (m + 1)))
            ket = list(range(m))
            ket.insert(pos, m)
            perm = ket + [m + 1 + i for i in ket]
            grown = t.transpose(perm).reshape(2 ** (m + 1), 2 ** (m + 1))
        self.sites.insert(pos, site)
        self.state = grown

    def embed(self, op: np.ndarray, pos: int) -> np.ndarray:
        left = np.eye(2**pos, dtype=complex)
        right = np.eye(2 ** (self.m - pos - 1), dtype=complex)
        return dm.kron(left, op, right)

    def sandwich(self, ops, pos: int):
        out = np.zeros_like(self.state)
        for op in ops:
            full = self.embed(op, pos)
            out += full @ self.state @ dm.dag(full)
        self.state = out

    def cz(self, pa: int, pb: int):
        m = self.m
        idx = np.arange(2**m)
        ba = (idx >> (m - 1 - pa)) & 1
        bb = (idx >> (m - 1 - pb)) & 1
        d = 1.0 - 2.0 * (ba & bb)
        self.state = d[:, None] * self.state * d[None, :]

    def remove(self, pos: int):
        keep = [i for i in range(self.m) if i != pos]
        self.state = dm.partial_trace(self.state, keep, (2,) * self.m)
        del self.sites[pos]


def simulate(n: int, ops, max_qubits: int | None = None) -> SimResult:
    """Run the operation list over an ``n``-site register.

    Measurements project onto the requested outcome (no sampling); the final
    trace is the probability of the recorded outcome string.
    """
    cap = max_qubits if max_qubits is not None else max_oracle_qubits()
    if not 1 <= n <= cap:
        raise SizeLimit(f"register size {n} outside [1, {cap}]")
    reg = _Register(n)
    outcomes: list[tuple[int, int]] = []

    for op in ops:
        if isinstance(op, PrepPlus):
            reg.prep(op.site, dm.projector(dm.PLUS))
        elif isinstance(op, PrepState):
            reg.prep(op.site, op.rho)
        elif isinstance(op, CZ):
            pa, pb = reg.pos(op.a), reg.pos(op.b)
            if pa == pb:
                raise SiteOutOfRange("CZ needs two distinct sites")
            reg.cz(pa, pb)
        elif isinstance(op, Unitary1Q):
            u = np.asarray(op.u, dtype=complex)
            if u.shape != (2, 2):
                raise DimensionMismatch("single-site unitary must be 2x2")
            reg.sandwich([u], reg.pos(op.site))
        elif isinstance(op, Channel1Q):
            if op.channel.dim != 2:
                raise DimensionMismatch("site channels must be single-qubit")
            reg.sandwich(op.channel.ops, reg.pos(op.site))
        elif isinstance(op, Measure):
            if op.outcome not in (0, 1):
                raise ValueError("measurement outcome must be 0 or 1")
            kets = measurement_kets(op.basis)
            pos = reg.pos(op.site)
            reg.sandwich([dm.projector(kets[op.outcome])], pos)
            if op.remove:
                reg.remove(pos)
            outcomes.append((op.site, op.outcome))
        else:
            raise TypeError(f"unknown circuit op {op!r}")
    return SimResult(state=reg.state, outcomes=outcomes)


def cluster_ops(n: int) -> list:
    """Op list preparing the n-site linear cluster state."""
    ops: list = [PrepPlus(i) for i in range(n)]
    ops.extend(CZ(i, i + 1) for i in range(n - 1))
    return ops


def build_cluster_dm(n: int, max_qubits: int | None = None) -> np.ndarray:
    """Pure linear-cluster density matrix: |+>^n entangled by nearest-neighbour CZ."""
    cap = max_qubits if max_qubits is not None else max_oracle_qubits()
    if not 1 <= n <= cap:
        raise SizeLimit(f"cluster size {n} outside [1, {cap}]")
    vec = np.full(2**n, 2 ** (-n / 2.0), dtype=complex)
    idx = np.arange(2**n)
    for i in range(n - 1):
        ba = (idx >> (n - 1 - i)) & 1
        bb = (idx >> (n - 2 - i)) & 1
        vec = vec * (1.0 - 2.0 * (ba & bb))
    return np.outer(vec, vec.conj())


def teleport_oracle_state(
    eps: KrausChannel, rho: np.ndarray, s: int, t: int
) -> np.ndarray:
    """Gate-level teleportation: noisy resource on qubits (1, 2), Bell readout
    on (0, 1) via CNOT and H, Z measurements reading (t, s)."""
    ops = [
        PrepState(0, rho),
        PrepPlus(1),
        PrepState(2, dm.projector(dm.KET0)),
        Unitary1Q(2, dm.H),
        CZ(1, 2),
        Unitary1Q(2, dm.H),
        Channel1Q(2, eps),
        Unitary1Q(1, dm.H),
        CZ(0, 1),
        Unitary1Q(1, dm.H),
        Unitary1Q(0, dm.H),
        Measure(0, MeasSpec.z(), t, remove=True),
        Measure(1, MeasSpec.z(), s, remove=True),
    ]
    return simulate(3, ops).state


def block_oracle_channel(cfg: BlockNoiseConfig) -> np.ndarray:
    """Choi matrix of one noisy measurement step, assembled by simulation.

    Feeds each basis element |i><j| through the two-qubit circuit (noise at
    its declared location, CZ, projective readout of the first qubit) and
    stacks the outputs; linearity makes this the exact process matrix.
    """
    if cfg.meas.basis != EQUATORIAL:
        raise ZBasisUnsupported(
            "noise composition is defined for equatorial measurements only"
        )
    chois = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1.0
            ops: list = [PrepState(0, e), PrepPlus(1)]
            if cfg.alpha1 is not None:
                ops.append(Channel1Q(0, cfg.alpha1))
            if cfg.alpha2 is not None:
                ops.append(Channel1Q(1, cfg.alpha2))
            ops.append(CZ(0, 1))
            if cfg.alpha3 is not None:
                ops.append(Channel1Q(0, cfg.alpha3))
            if cfg.alpha4 is not None:
                ops.append(Channel1Q(1, cfg.alpha4))
            ops.append(Measure(0, cfg.meas, cfg.meas.outcome, remove=True))
            out = simulate(2, ops).state
            chois += np.kron(e, out)
    return chois
