"""Experiment runner: declarative JSON configs executed on two paths.

Every experiment runs a closed-form path and the brute-force oracle path and
reports their disagreement per case, so a passing report certifies the maps
against direct density-matrix simulation.

Document layout (all kinds)::

    {
      "kind": "teleport" | "block_chain" | "mpo",
      "tolerance": 1e-9,            # optional, default 1e-9
      "seed": 7,                    # optional, default 0
      "channels": {                 # named single-qubit channels
        "noise":  {"builtin": "phase_flip", "p": 0.5},
        "custom": {"dim": 2, "ops": [[[[0.7,0],[0,0]], ...], ...]}
      },
      ...kind-specific fields...
    }

Kind ``teleport``: ``resource_noise`` names a channel; ``inputs`` is either
``{"random": N}`` or a list of state specs (``"plus"``, ``"zero"``, ``"one"``,
``"minus"`` or ``{"matrix": [...]}``).  One case per input and Bell outcome.

Kind ``block_chain``: either ``chain`` (a list of step entries) or
``random_suite`` (``{"cases": N, "kraus": 2}``, comparing composed Choi
matrices against the oracle for random noise at all four locations).  A chain
entry reads ``{"phi": 0.3, "k": 0|1|"both", "alpha1": "name", ...}`` or
``{"z": true, "k": ...}``; ``phi`` may also be an adaptive sign table
``{"magnitude": x, "flip_on": [earlier step indices]}``, resolved to
x * (-1)^(sum of those outcomes) per outcome string.  One case per outcome
string; states are compared unnormalised so traces carry branch
probabilities.

Kind ``mpo``: ``builder`` is ``{"name": "cluster"|"maximally_mixed"|
"one_clean", "n": N}``; ``site_ops`` lists single-site events
(``{"site": i, "pauli": [a, b]}``, ``{"site": i, "unitary": [...]}`` or
``{"site": i, "channel": "name"}``); ``measurements`` lists
``{"site": i, "basis": "x"|"z", "outcome": 0|1|"both"}``.  Contractions are
compared against the dense simulation per outcome string.  An optional
``save_mpo`` path stores the prepared (pre-measurement) operator.

Exit codes: 0 all cases within tolerance, 1 a case exceeded it, 2 the
document or a module precondition was at fault.  ``NOISY_MBQC_MAX_QUBITS``
caps the dense register (default 12).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from itertools import product

import numpy as np

from . import densemath as dm
from . import mpo as mpo_mod
from . import oracle
from .block import BlockNoiseConfig, MeasSpec, compose_block_noise, ideal_block
from .channels import (
    XZ_STD,
    KrausChannel,
    apply,
    basis_element,
    bit_flip,
    channel_from_dict,
    choi,
    depolarizing,
    identity_channel,
    mixed_unitary,
    phase_flip,
    random_channel,
    unitary_channel,
)
from .errors import NotAChannel, ParseError, UnknownChannelRef
from .teleport import (
    diagonal_resource,
    is_pauli_channel,
    pauli_corrected_target,
    teleport_branch,
)

EXPERIMENT_KINDS = ("teleport", "block_chain", "mpo")

_STATES = {
    "zero": dm.projector(dm.KET0),
    "one": dm.projector(dm.KET1),
    "plus": dm.projector(dm.PLUS),
    "minus": dm.projector(dm.MINUS),
}


@dataclass
class ExperimentSpec:
    """Parsed and resolved experiment document."""

    kind: str
    channels: dict[str, KrausChannel]
    payload: dict
    tolerance: float = 1e-9
    seed: int = 0
    spec_hash: str = ""


@dataclass
class CaseResult:
    """Closed-form and oracle outputs for one case, plus their distances."""

    case_id: str
    closed_form: np.ndarray
    oracle: np.ndarray
    max_entry_diff: float
    trace_distance: float
    branch_prob: float


@dataclass
class Report:
    cases: list[CaseResult] = field(default_factory=list)
    tolerance: float = 1e-9
    seed: int = 0
    spec_hash: str = ""
    timestamp: str = ""

    @property
    def max_entry_diff(self) -> float:
        return max((c.max_entry_diff for c in self.cases), default=0.0)

    @property
    def passed(self) -> bool:
        return all(c.max_entry_diff <= self.tolerance for c in self.cases)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _parse_channel_def(name: str, obj) -> KrausChannel:
    if not isinstance(obj, dict):
        raise ParseError(f"channels.{name}: expected an object")
    try:
        if "builtin" in obj:
            builtin = obj["builtin"]
            if builtin == "identity":
                return identity_channel()
            if builtin == "bit_flip":
                return bit_flip(float(obj["p"]))
            if builtin == "phase_flip":
                return phase_flip(float(obj["p"]))
            if builtin == "depolarizing":
                return depolarizing()
            if builtin == "unitary":
                return unitary_channel(dm.mat_from_json(obj["matrix"]))
            if builtin == "mixed_unitary":
                p = float(obj["p"])
                u = dm.mat_from_json(obj["matrix"])
                return mixed_unitary([(1.0 - p, dm.I2), (p, u)])
            raise ParseError(f"channels.{name}: unknown builtin {builtin!r}")
        if "ops" in obj:
            return channel_from_dict(obj)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"channels.{name}: malformed definition ({exc})") from exc
    except NotAChannel as exc:
        raise NotAChannel(f"channels.{name}: {exc}") from exc
    raise ParseError(f"channels.{name}: needs either 'builtin' or 'ops'")


def _parse_state(obj, where: str) -> np.ndarray:
    if isinstance(obj, str):
        if obj not in _STATES:
            raise ParseError(f"{where}: unknown state alias {obj!r}")
        return _STATES[obj].copy()
    if isinstance(obj, dict):
        if "state" in obj:
            return _parse_state(obj["state"], where)
        if "matrix" in obj:
            rho = dm.mat_from_json(obj["matrix"])
            if not dm.is_density_operator(rho, normalized=True):
                raise ParseError(f"{where}: matrix is not a normalised state")
            return rho
    raise ParseError(f"{where}: expected a state alias or a matrix")


def _require(cond: bool, message: str):
    if not cond:
        raise ParseError(message)


def _resolve_ref(ref, channels: dict[str, KrausChannel], where: str) -> KrausChannel:
    if not isinstance(ref, str) or ref not in channels:
        raise UnknownChannelRef(f"{where}: unknown channel {ref!r}")
    return channels[ref]


def parse_experiment(text: str) -> ExperimentSpec:
    """Validate an experiment document; every channel must pass validation."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    _require(isinstance(doc, dict), "top level must be an object")
    kind = doc.get("kind")
    _require(kind in EXPERIMENT_KINDS, f"kind must be one of {EXPERIMENT_KINDS}")

    channels: dict[str, KrausChannel] = {}
    for name, obj in sorted(doc.get("channels", {}).items()):
        channels[name] = _parse_channel_def(name, obj)

    payload = dict(doc)
    spec = ExperimentSpec(
        kind=kind,
        channels=channels,
        payload=payload,
        tolerance=float(doc.get("tolerance", 1e-9)),
        seed=int(doc.get("seed", 0)),
        spec_hash=hashlib.sha256(text.encode("utf-8")).hexdigest(),
    )
    _validate_payload(spec)
    return spec


def _validate_payload(spec: ExperimentSpec):
    doc = spec.payload
    if spec.kind == "teleport":
        _resolve_ref(doc.get("resource_noise"), spec.channels, "resource_noise")
        inputs = doc.get("inputs", {"random": 1})
        if isinstance(inputs, dict):
            _require("random" in inputs and int(inputs["random"]) >= 1,
                     "inputs: expected {'random': N} or a list of states")
        else:
            _require(isinstance(inputs, list) and inputs, "inputs: empty list")
            for idx, st in enumerate(inputs):
                _parse_state(st, f"inputs[{idx}]")
    elif spec.kind == "block_chain":
        chain = doc.get("chain")
        suite = doc.get("random_suite")
        _require(
            (chain is None) != (suite is None),
            "block_chain needs exactly one of 'chain' or 'random_suite'",
        )
        if chain is not None:
            _require(isinstance(chain, list) and chain, "chain must be nonempty")
            for i, entry in enumerate(chain):
                self_ref = f"chain[{i}]"
                _require(isinstance(entry, dict), f"{self_ref}: expected an object")
                if not entry.get("z", False):
                    _parse_phi(entry.get("phi", 0.0), i, f"{self_ref}.phi")
                k = entry.get("k", "both")
                _require(k in (0, 1, "both"), f"{self_ref}.k must be 0, 1 or 'both'")
                for slot in ("alpha1", "alpha2", "alpha3", "alpha4"):
                    if slot in entry and entry[slot] is not None:
                        _resolve_ref(entry[slot], spec.channels, f"{self_ref}.{slot}")
            if "input" in doc:
                _parse_state(doc["input"], "input")
        else:
            _require(
                isinstance(suite, dict) and int(suite.get("cases", 0)) >= 1,
                "random_suite: expected {'cases': N}",
            )
    elif spec.kind == "mpo":
        builder = doc.get("builder")
        _require(
            isinstance(builder, dict)
            and builder.get("name") in ("cluster", "maximally_mixed", "one_clean")
            and int(builder.get("n", 0)) >= 1,
            "builder: expected {'name': cluster|maximally_mixed|one_clean, 'n': N}",
        )
        _require(
            builder["name"] != "cluster" or int(builder["n"]) >= 2,
            "builder: a cluster needs at least 2 sites",
        )
        for i, op in enumerate(doc.get("site_ops", [])):
            where = f"site_ops[{i}]"
            _require(isinstance(op, dict) and "site" in op, f"{where}: needs a site")
            kinds = [k for k in ("pauli", "unitary", "channel") if k in op]
            _require(len(kinds) == 1, f"{where}: exactly one of pauli/unitary/channel")
            if "channel" in op:
                _resolve_ref(op["channel"], spec.channels, f"{where}.channel")
        for i, m in enumerate(doc.get("measurements", [])):
            where = f"measurements[{i}]"
            _require(
                isinstance(m, dict)
                and m.get("basis", "x") in ("x", "z")
                and m.get("outcome", "both") in (0, 1, "both")
                and "site" in m,
                f"{where}: expected site, basis x|z, outcome 0|1|'both'",
            )


def _parse_phi(obj, step_index: int, where: str) -> None:
    if isinstance(obj, (int, float)):
        return
    if isinstance(obj, dict) and "magnitude" in obj:
        flips = obj.get("flip_on", [])
        _require(
            all(isinstance(j, int) and 0 <= j < step_index for j in flips),
            f"{where}: flip_on may only reference earlier steps",
        )
        return
    raise ParseError(f"{where}: expected a number or {{magnitude, flip_on}}")


def _resolve_phi(obj, outcomes: list[int]) -> float:
    if isinstance(obj, (int, float)):
        return float(obj)
    sign = 1.0
    for j in obj.get("flip_on", []):
        if outcomes[j]:
            sign = -sign
    return sign * float(obj["magnitude"])


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


def run_experiment(
    spec: ExperimentSpec,
    tolerance: float | None = None,
    seed: int | None = None,
    case_filter: str | None = None,
) -> Report:
    """Execute closed-form and oracle paths for every case of the spec."""
    tol = spec.tolerance if tolerance is None else tolerance
    rng_seed = spec.seed if seed is None else seed
    rng = np.random.default_rng(rng_seed)

    runner = {
        "teleport": _run_teleport,
        "block_chain": _run_block_chain,
        "mpo": _run_mpo,
    }[spec.kind]
    cases = [
        c
        for c in runner(spec, rng)
        if case_filter is None or case_filter in c.case_id
    ]
    return Report(
        cases=cases,
        tolerance=tol,
        seed=rng_seed,
        spec_hash=spec.spec_hash,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )


def _case(case_id: str, closed: np.ndarray, orac: np.ndarray) -> CaseResult:
    return CaseResult(
        case_id=case_id,
        closed_form=closed,
        oracle=orac,
        max_entry_diff=dm.max_abs_diff(closed, orac),
        trace_distance=dm.trace_distance(closed, orac),
        branch_prob=float(np.trace(closed).real),
    )


def _random_density(rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _run_teleport(spec: ExperimentSpec, rng) -> list[CaseResult]:
    doc = spec.payload
    eps = spec.channels[doc["resource_noise"]]
    inputs_doc = doc.get("inputs", {"random": 1})
    if isinstance(inputs_doc, dict):
        states = [_random_density(rng) for _ in range(int(inputs_doc["random"]))]
    else:
        states = [_parse_state(st, f"inputs[{i}]") for i, st in enumerate(inputs_doc)]

    pauli = is_pauli_channel(eps)
    resource = diagonal_resource(eps)
    cases = []
    for idx, rho in enumerate(states):
        for s in range(2):
            for t in range(2):
                if pauli:
                    closed = pauli_corrected_target(eps, rho, s, t)
                else:
                    closed = teleport_branch(resource, rho, s, t).state
                orac = oracle.teleport_oracle_state(eps, rho, s, t)
                cases.append(_case(f"input{idx}:s{s}t{t}", closed, orac))
    return cases


def _chain_entry_meas(entry: dict, k: int, outcomes: list[int]) -> MeasSpec:
    if entry.get("z", False):
        return MeasSpec.z(k)
    return MeasSpec.equatorial(_resolve_phi(entry.get("phi", 0.0), outcomes), k)


def _run_block_chain(spec: ExperimentSpec, rng) -> list[CaseResult]:
    doc = spec.payload
    if "random_suite" in doc and doc["random_suite"] is not None:
        return _run_block_random_suite(spec, rng)

    chain = doc["chain"]
    rho0 = _parse_state(doc.get("input", "plus"), "input")
    k_axes = [(0, 1) if e.get("k", "both") == "both" else (e["k"],) for e in chain]
    cases = []
    for ks in product(*k_axes):
        outcomes = list(ks)
        closed = rho0.copy()
        circuit: list = [oracle.PrepState(0, rho0)]
        for i, entry in enumerate(chain):
            meas = _chain_entry_meas(entry, outcomes[i], outcomes)
            alphas = {
                slot: spec.channels[entry[slot]]
                for slot in ("alpha1", "alpha2", "alpha3", "alpha4")
                if entry.get(slot) is not None
            }
            cfg = BlockNoiseConfig(meas=meas, **alphas)
            if meas.basis == "z" and not alphas:
                closed = apply(ideal_block(meas).kraus, closed)
            else:
                closed = apply(compose_block_noise(cfg), closed)
            circuit.extend(_block_circuit_ops(cfg, i))
        orac = oracle.simulate(len(chain) + 1, circuit).state
        label = "k=" + "".join(str(k) for k in outcomes)
        cases.append(_case(label, closed, orac))
    return cases


def _block_circuit_ops(cfg: BlockNoiseConfig, step: int) -> list:
    """Circuit slice for one chain step on sites (step, step+1)."""
    a, b = step, step + 1
    ops: list = [oracle.PrepPlus(b)]
    if cfg.alpha1 is not None:
        ops.append(oracle.Channel1Q(a, cfg.alpha1))
    if cfg.alpha2 is not None:
        ops.append(oracle.Channel1Q(b, cfg.alpha2))
    ops.append(oracle.CZ(a, b))
    if cfg.alpha3 is not None:
        ops.append(oracle.Channel1Q(a, cfg.alpha3))
    if cfg.alpha4 is not None:
        ops.append(oracle.Channel1Q(b, cfg.alpha4))
    ops.append(oracle.Measure(a, cfg.meas, cfg.meas.outcome, remove=True))
    return ops


def _run_block_random_suite(spec: ExperimentSpec, rng) -> list[CaseResult]:
    suite = spec.payload["random_suite"]
    n_cases = int(suite["cases"])
    n_kraus = int(suite.get("kraus", 2))
    cases = []
    for i in range(n_cases):
        phi = float(rng.uniform(0.0, 2.0 * np.pi))
        alphas = {
            slot: random_channel(rng, n_kraus)
            for slot in ("alpha1", "alpha2", "alpha3", "alpha4")
        }
        for k in (0, 1):
            cfg = BlockNoiseConfig(meas=MeasSpec.equatorial(phi, k), **alphas)
            closed = choi(compose_block_noise(cfg))
            orac = oracle.block_oracle_channel(cfg)
            cases.append(_case(f"cfg{i}:k{k}", closed, orac))
    return cases


_X_KETS = (dm.PLUS, dm.MINUS)
_Z_KETS = (dm.KET0, dm.KET1)


def _run_mpo(spec: ExperimentSpec, rng) -> list[CaseResult]:
    doc = spec.payload
    builder = doc["builder"]
    name, n = builder["name"], int(builder["n"])

    if name == "cluster":
        state = mpo_mod.mpo_cluster(n)
        total = n
        circuit: list = oracle.cluster_ops(n)
    elif name == "maximally_mixed":
        state = mpo_mod.mpo_maximally_mixed(n)
        total = n
        circuit = [oracle.PrepState(i, 0.5 * dm.I2) for i in range(n)]
    else:
        state = mpo_mod.mpo_one_clean(n)
        total = n + 1
        circuit = [oracle.PrepState(0, dm.projector(dm.KET0))]
        circuit += [oracle.PrepState(i + 1, 0.5 * dm.I2) for i in range(n)]

    for op in doc.get("site_ops", []):
        site = int(op["site"])
        if "pauli" in op:
            a, b = (int(x) for x in op["pauli"])
            state = mpo_mod.mpo_apply_pauli(state, site, (a, b))
            circuit.append(oracle.Unitary1Q(site, basis_element(a, b, XZ_STD)))
        elif "unitary" in op:
            u = dm.mat_from_json(op["unitary"])
            state = mpo_mod.mpo_apply_unitary(state, site, u)
            circuit.append(oracle.Unitary1Q(site, u))
        else:
            ch = spec.channels[op["channel"]]
            state = mpo_mod.mpo_apply_channel(state, site, ch)
            circuit.append(oracle.Channel1Q(site, ch))

    if doc.get("save_mpo"):
        with open(doc["save_mpo"], "w", encoding="utf-8") as fh:
            json.dump(mpo_mod.mpo_to_dict(state), fh)

    measurements = doc.get("measurements", [])
    axes = [
        (0, 1) if m.get("outcome", "both") == "both" else (int(m["outcome"]),)
        for m in measurements
    ]
    cases = []
    for ks in product(*axes) if measurements else [()]:
        branch_state = state
        branch_circuit = list(circuit)
        for m_entry, k in zip(measurements, ks):
            site = int(m_entry["site"])
            kets = _X_KETS if m_entry.get("basis", "x") == "x" else _Z_KETS
            branch_state = mpo_mod.mpo_measure(branch_state, site, kets[k], k)
            branch_circuit.append(oracle.Measure(site, kets, k, remove=True))
        closed = mpo_mod.mpo_contract(branch_state)
        orac = oracle.simulate(total, branch_circuit).state
        label = "m=" + "".join(str(k) for k in ks) if ks else "m="
        cases.append(_case(label, closed, orac))
    return cases


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def report_to_dict(report: Report) -> dict:
    return {
        "meta": {
            "spec_sha256": report.spec_hash,
            "seed": report.seed,
            "timestamp": report.timestamp,
        },
        "tolerance": report.tolerance,
        "cases": [
            {
                "case": c.case_id,
                "closed_form": dm.mat_to_json(c.closed_form),
                "oracle": dm.mat_to_json(c.oracle),
                "max_entry_diff": c.max_entry_diff,
                "trace_distance": c.trace_distance,
                "branch_prob": c.branch_prob,
                "pass": c.max_entry_diff <= report.tolerance,
            }
            for c in report.cases
        ],
        "summary": {
            "n_cases": len(report.cases),
            "max_entry_diff": report.max_entry_diff,
            "pass": report.passed,
        },
    }


def report_from_dict(doc: dict) -> Report:
    report = Report(
        tolerance=float(doc["tolerance"]),
        seed=int(doc["meta"]["seed"]),
        spec_hash=doc["meta"]["spec_sha256"],
        timestamp=doc["meta"]["timestamp"],
    )
    for c in doc["cases"]:
        report.cases.append(
            CaseResult(
                case_id=c["case"],
                closed_form=dm.mat_from_json(c["closed_form"]),
                oracle=dm.mat_from_json(c["oracle"]),
                max_entry_diff=float(c["max_entry_diff"]),
                trace_distance=float(c["trace_distance"]),
                branch_prob=float(c["branch_prob"]),
            )
        )
    return report


CSV_COLUMNS = ("case", "branch_prob", "max_entry_diff", "trace_distance", "pass")


def emit_report(report: Report, fmt: str, path: str) -> None:
    """Write a report as JSON (full matrices) or CSV (scalar columns)."""
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report_to_dict(report), fh, indent=2)
            fh.write("\n")
        return
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for c in report.cases:
                writer.writerow(
                    [
                        c.case_id,
                        repr(c.branch_prob),
                        repr(c.max_entry_diff),
                        repr(c.trace_distance),
                        c.max_entry_diff <= report.tolerance,
                    ]
                )
        return
    raise ValueError(f"unknown report format {fmt!r}")


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------

# every library precondition error subclasses one of these (ParseError,
# UnknownChannelRef, NotAChannel, ZBasisUnsupported, SizeLimit, ... are
# ValueErrors; SiteOutOfRange is an IndexError)
_SPEC_ERRORS = (ValueError, IndexError)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="noisy-mbqc",
        description="Run noise-propagation experiments against the density-matrix oracle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="execute an experiment document")
    runp.add_argument("spec", help="path to the experiment JSON")
    runp.add_argument("--out", help="report path (.json or .csv)")
    runp.add_argument("--seed", type=int, default=None, help="override the RNG seed")
    runp.add_argument("--tol", type=float, default=None, help="override the tolerance")
    runp.add_argument("--cases", default=None, help="only run cases whose id contains this")
    args = parser.parse_args(argv)

    try:
        with open(args.spec, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.spec}: {exc}", file=sys.stderr)
        return 2

    try:
        spec = parse_experiment(text)
        report = run_experiment(
            spec, tolerance=args.tol, seed=args.seed, case_filter=args.cases
        )
    except _SPEC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    for c in report.cases:
        verdict = "ok" if c.max_entry_diff <= report.tolerance else "FAIL"
        print(
            f"{c.case_id}: prob={c.branch_prob:.6f} "
            f"max_diff={c.max_entry_diff:.3e} tdist={c.trace_distance:.3e} {verdict}"
        )
    print(
        f"summary: {len(report.cases)} cases, worst max_diff="
        f"{report.max_entry_diff:.3e}, tolerance={report.tolerance:.1e} -> "
        f"{'PASS' if report.passed else 'FAIL'}"
    )

    if args.out:
        fmt = "csv" if args.out.endswith(".csv") else "json"
        try:
            emit_report(report, fmt, args.out)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2

    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
