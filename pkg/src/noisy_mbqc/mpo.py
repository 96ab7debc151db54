"""Matrix product operators with logical superoperators on the bond space.

An ``MpoState`` stores, per site, a family of bond-space objects indexed by
the physical value i and a Kraus-like index s.  Interior sites hold matrices
A[i, s]; their branch superoperator for the physical pair (i, j) acts as
rho -> sum_s A[i, s] rho A[j, s]^dag.  The final site is the boundary and
holds vectors v[i, s]; it closes a branch with the scalar functional
sum_s v[i, s]^dag rho v[j, s].  Contracting over all physical index strings,
starting from the correlation-space seed, rebuilds the dense operator.

Physical single-site events update the stored families in place of the
dense state:

* measurement collapses the physical index, A[v, s] = sum_i <v|i> A[i, s];
* a Pauli (a, b) conjugates, A -> Z^a A sigma_ab;
* a unitary acts through its Pauli coefficients, A -> sum u_gh Z^g A sigma_gh;
* a channel extends the s family with one branch per Kraus operator.

The conjugation rules track the dense state exactly for tensor families with
the cluster symmetry (A[i^1, s] = Z A[i, s] X and A[i, s] Z = (-1)^i A[i, s]),
which covers the builders here and any single update per site; stacking
several non-Pauli updates on one site leaves that family and is on the
caller.  Bond dimension is 2 for every builder, but nothing below assumes it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import densemath as dm
from .channels import XZ_STD, KrausChannel, basis_element, pauli_decompose
from .errors import (
    AlreadyMeasured,
    DimensionMismatch,
    NotNormalized,
    NotUnitary,
    SizeLimit,
    UnmeasuredSites,
)

CONTRACTION_MAX_QUBITS = 12


@dataclass(frozen=True)
class SiteTensor:
    """One site's family of bond-space objects.

    ``ops[i][s]`` is a matrix (interior site) or vector (boundary site) for
    physical value i.  A measured site keeps a single collapsed physical slot
    ``ops[0]`` together with the recorded outcome.
    """

    ops: tuple[tuple[np.ndarray, ...], ...]
    boundary: bool = False
    measured: bool = False
    outcome: object = None

    @property
    def s_count(self) -> int:
        return len(self.ops[0])

    @property
    def bond_dim(self) -> int:
        first = self.ops[0][0]
        return first.shape[-1] if self.boundary else first.shape[0]


@dataclass(frozen=True)
class LogicalSuperop:
    """Map rho -> sum_s left[s] rho right[s]^dag on the bond space."""

    left: tuple[np.ndarray, ...]
    right: tuple[np.ndarray, ...]

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(np.asarray(rho, dtype=complex))
        for l, r in zip(self.left, self.right):
            out += l @ rho @ dm.dag(r)
        return out

    def choi(self) -> np.ndarray:
        """Choi matrix of the map over the bond space."""
        d = self.left[0].shape[0]
        c = np.zeros((d * d, d * d), dtype=complex)
        for i in range(d):
            for j in range(d):
                e = np.zeros((d, d), dtype=complex)
                e[i, j] = 1.0
                c += np.kron(e, self(e))
        return c


@dataclass(frozen=True)
class MpoState:
    """Ordered site tensors plus the correlation-space seed operator."""

    sites: tuple[SiteTensor, ...]
    seed: np.ndarray

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def unmeasured_count(self) -> int:
        return sum(1 for s in self.sites if not s.measured)


def _tensors(mats) -> tuple[tuple[np.ndarray, ...], ...]:
    return tuple(tuple(np.asarray(m, dtype=complex) for m in fam) for fam in mats)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def mpo_cluster(n: int) -> MpoState:
    """Linear cluster state: interior A[k] = H|k><k| on a |+><+| seed,
    boundary vectors |i>."""
    if n < 2:
        raise ValueError("cluster representation needs at least 2 sites")
    a = [dm.H @ dm.projector(dm.KET0), dm.H @ dm.projector(dm.KET1)]
    interior = SiteTensor(ops=_tensors([[a[0]], [a[1]]]))
    bound = SiteTensor(ops=_tensors([[dm.KET0], [dm.KET1]]), boundary=True)
    return MpoState(
        sites=tuple([interior] * (n - 1) + [bound]), seed=dm.projector(dm.PLUS)
    )


def mpo_maximally_mixed(n: int) -> MpoState:
    """Maximally mixed state on n qubits, I / 2^n."""
    if n < 1:
        raise ValueError("need at least one site")
    a = [dm.KET0[:, None] @ dm.KET0[None, :], dm.KET0[:, None] @ dm.KET1[None, :]]
    # each site carries the scrambling pair {A[i], A[i] X} / sqrt(2)
    r = 1.0 / np.sqrt(2.0)
    interior = SiteTensor(
        ops=_tensors([[r * a[0], r * a[0] @ dm.X], [r * a[1], r * a[1] @ dm.X]])
    )
    bound = SiteTensor(
        ops=_tensors(
            [
                [r * dm.KET0, r * (dm.X @ dm.KET0)],
                [r * dm.KET1, r * (dm.X @ dm.KET1)],
            ]
        ),
        boundary=True,
    )
    return MpoState(
        sites=tuple([interior] * (n - 1) + [bound]), seed=dm.projector(dm.KET0)
    )


def mpo_one_clean(n: int) -> MpoState:
    """One clean qubit in front of n maximally mixed ones, |0><0| (x) I/2^n.

    Translational invariance fails here: the first site keeps the noiseless
    single-branch family, later sites carry the scrambling pair.
    """
    if n < 1:
        raise ValueError("need at least one mixed site")
    mixed = mpo_maximally_mixed(n)
    a = [dm.KET0[:, None] @ dm.KET0[None, :], dm.KET0[:, None] @ dm.KET1[None, :]]
    clean = SiteTensor(ops=_tensors([[a[0]], [a[1]]]))
    return MpoState(sites=(clean,) + mixed.sites, seed=dm.projector(dm.KET0))


# ---------------------------------------------------------------------------
# Contraction
# ---------------------------------------------------------------------------


def site_superop(site: SiteTensor, i: int, j: int) -> LogicalSuperop:
    """Branch superoperator of an interior site for physical pair (i, j)."""
    if site.boundary:
        raise ValueError("boundary sites close branches, they have no superoperator")
    return LogicalSuperop(left=site.ops[i], right=site.ops[j])


def _boundary_scalar(site: SiteTensor, i: int, j: int, rho: np.ndarray) -> complex:
    total = 0.0 + 0.0j
    for vi, vj in zip(site.ops[i], site.ops[j]):
        total += np.vdot(vi, rho @ vj)
    return total


def mpo_contract(state: MpoState) -> np.ndarray:
    """Dense operator over the unmeasured sites, first site most significant.

    Iterates every physical index string, composing site superoperators from
    the seed and closing each branch with the boundary functional.
    """
    open_count = state.unmeasured_count()
    if open_count > CONTRACTION_MAX_QUBITS:
        raise SizeLimit(
            f"contraction over {open_count} open sites exceeds 2^{CONTRACTION_MAX_QUBITS}"
        )
    dim = 2**open_count
    out = np.zeros((dim, dim), dtype=complex)
    sites = state.sites
    last = len(sites) - 1

    def descend(idx: int, row: int, col: int, rho: np.ndarray):
        site = sites[idx]
        if idx == last and site.boundary:
            if site.measured:
                out[row, col] += _boundary_scalar(site, 0, 0, rho)
            else:
                for i in range(2):
                    for j in range(2):
                        out[(row << 1) | i, (col << 1) | j] += _boundary_scalar(
                            site, i, j, rho
                        )
            return
        if site.measured:
            descend(idx + 1, row, col, site_superop(site, 0, 0)(rho))
        else:
            for i in range(2):
                for j in range(2):
                    descend(
                        idx + 1,
                        (row << 1) | i,
                        (col << 1) | j,
                        site_superop(site, i, j)(rho),
                    )

    descend(0, 0, 0, np.asarray(state.seed, dtype=complex))
    return out


# ---------------------------------------------------------------------------
# Physical events
# ---------------------------------------------------------------------------


def _site(state: MpoState, index: int) -> SiteTensor:
    if not 0 <= index < state.n_sites:
        raise IndexError(f"site {index} outside MPO of length {state.n_sites}")
    return state.sites[index]


def _unmeasured_interior(state: MpoState, index: int) -> SiteTensor:
    site = _site(state, index)
    if site.measured:
        raise AlreadyMeasured(f"site {index} was already measured")
    if site.boundary:
        raise ValueError(
            "boundary sites hold vectors; the conjugation updates need matrices"
        )
    return site


def _with_site(state: MpoState, index: int, site: SiteTensor) -> MpoState:
    sites = list(state.sites)
    sites[index] = site
    return replace(state, sites=tuple(sites))


def mpo_measure(
    state: MpoState, index: int, basis_vec: np.ndarray, outcome
) -> MpoState:
    """Collapse a site onto the unit vector of an observed outcome.

    Interior matrices combine with conjugated amplitudes <v|i>; boundary
    vectors combine with plain amplitudes because the boundary functional
    already daggers its bra-side vector.
    """
    site = _site(state, index)
    if site.measured:
        raise AlreadyMeasured(f"site {index} was already measured")
    v = np.asarray(basis_vec, dtype=complex).reshape(-1)
    if v.shape != (2,):
        raise DimensionMismatch("basis vector must live on one qubit")
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise NotNormalized("measurement vector must have unit norm")
    weights = v if site.boundary else v.conj()
    collapsed = tuple(
        weights[0] * a0 + weights[1] * a1 for a0, a1 in zip(site.ops[0], site.ops[1])
    )
    new_site = SiteTensor(
        ops=(collapsed,), boundary=site.boundary, measured=True, outcome=outcome
    )
    return _with_site(state, index, new_site)


def _conjugation_update(mat: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    out = np.zeros_like(mat)
    for g in range(2):
        for h in range(2):
            if coeffs[g, h] == 0:
                continue
            left = dm.Z if g else dm.I2  # sigma_{0g}
            out += coeffs[g, h] * (left @ mat @ basis_element(g, h, XZ_STD))
    return out


def mpo_apply_pauli(state: MpoState, index: int, pauli: tuple[int, int]) -> MpoState:
    """Pauli sigma_ab on the physical qubit: A -> Z^a A sigma_ab."""
    a, b = pauli
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError("Pauli label must be a pair of bits")
    site = _unmeasured_interior(state, index)
    coeffs = np.zeros((2, 2), dtype=complex)
    coeffs[a, b] = 1.0
    new_ops = tuple(
        tuple(_conjugation_update(m, coeffs) for m in fam) for fam in site.ops
    )
    return _with_site(state, index, replace(site, ops=new_ops))


def mpo_apply_unitary(state: MpoState, index: int, u: np.ndarray) -> MpoState:
    """Unitary on the physical qubit, routed through its Pauli coefficients."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise DimensionMismatch("site unitary must be 2x2")
    if dm.max_abs_diff(dm.dag(u) @ u, np.eye(2)) > 1e-10:
        raise NotUnitary("matrix fails the unitarity check")
    site = _unmeasured_interior(state, index)
    coeffs = pauli_decompose(u, XZ_STD).table
    new_ops = tuple(
        tuple(_conjugation_update(m, coeffs) for m in fam) for fam in site.ops
    )
    return _with_site(state, index, replace(site, ops=new_ops))


def mpo_apply_channel(state: MpoState, index: int, eta: KrausChannel) -> MpoState:
    """Channel on the physical qubit; the site's s family gains one branch
    per Kraus operator."""
    if eta.dim != 2:
        raise DimensionMismatch("site channels must be single-qubit")
    site = _unmeasured_interior(state, index)
    tables = [pauli_decompose(k, XZ_STD).table for k in eta.ops]
    new_ops = tuple(
        tuple(_conjugation_update(m, t) for m in fam for t in tables)
        for fam in site.ops
    )
    return _with_site(state, index, replace(site, ops=new_ops))


def mpo_logical_output(state: MpoState) -> np.ndarray:
    """Compose every measured interior site's superoperator on the seed.

    The result is the correlation-space operator carried to the boundary;
    its trace is the probability of the recorded outcome string.  Requires
    every non-boundary site to be measured.
    """
    pending = [
        i
        for i, s in enumerate(state.sites)
        if not s.boundary and not s.measured
    ]
    if pending:
        raise UnmeasuredSites(f"sites {pending} are still open")
    rho = np.asarray(state.seed, dtype=complex)
    for site in state.sites:
        if site.boundary:
            continue
        rho = site_superop(site, 0, 0)(rho)
    return rho


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def mpo_to_dict(state: MpoState) -> dict:
    """JSON-ready description: per-site dims, s count and matrices."""
    sites = []
    for site in state.sites:
        mats = [
            [dm.mat_to_json(np.atleast_2d(m)) for m in fam] for fam in site.ops
        ]
        sites.append(
            {
                "physical_dim": len(site.ops),
                "bond_dim": site.bond_dim,
                "s_count": site.s_count,
                "boundary": site.boundary,
                "measured": site.measured,
                "outcome": site.outcome,
                "matrices": mats,
            }
        )
    return {"seed": dm.mat_to_json(state.seed), "sites": sites}


def mpo_from_dict(doc: dict) -> MpoState:
    """Inverse of :func:`mpo_to_dict`."""
    sites = []
    for entry in doc["sites"]:
        fams = []
        for fam in entry["matrices"]:
            mats = []
            for rows in fam:
                m = dm.mat_from_json(rows)
                if entry["boundary"]:
                    m = m.reshape(-1)
                mats.append(m)
            fams.append(tuple(mats))
        sites.append(
            SiteTensor(
                ops=tuple(fams),
                boundary=bool(entry["boundary"]),
                measured=bool(entry["measured"]),
                outcome=entry.get("outcome"),
            )
        )
    return MpoState(sites=tuple(sites), seed=dm.mat_from_json(doc["seed"]))
