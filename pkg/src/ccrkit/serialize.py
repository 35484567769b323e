"""Plain-JSON packing for rings, characters, pairs, and result records.

Complex entries are stored as [re, im] float pairs; Python's shortest
round-trip float printing keeps reload exact.  Pair files carry both the
construction descriptor and the full representation tables, so a reloaded
pair verifies against exactly what the file says, not a fresh rebuild.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Union

import numpy as np

from .approx import EpsCertificate, SampleAssignment, StudyRow, CSV_HEADER
from .characters import Character, ConditionReport, character_from_descriptor
from .errors import CapacityError, StructureError
from .pairs import CCRPair, DenseRep, PhaseRep
from .rings import FiniteRing, RingPower, ring_from_descriptor
from .svn import Decomposition, EquivalenceWitness

FORMAT_VERSION = 1
PHASE_TABLE_ENTRIES_CAP = 1 << 20
DENSE_TABLE_ENTRIES_CAP = 1 << 18
MATRIX_EMBED_DIM = 64


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_to_data(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[complex_pair(z) for z in row] for row in m]


def matrix_from_data(rows: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows],
                    dtype=np.complex128)


def save_json(path: str, data: dict) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def load_json(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise StructureError("expected a JSON object at the top level")
    return data


def _expect(data: dict, record: str) -> None:
    if data.get("record") != record:
        raise StructureError(
            f"expected a {record!r} file, found {data.get('record')!r}")
    if data.get("format") != FORMAT_VERSION:
        raise StructureError(
            f"unsupported format version {data.get('format')!r}; "
            f"this build reads version {FORMAT_VERSION}")


# -- pairs -----------------------------------------------------------------------


def _rep_to_data(rep: Union[PhaseRep, DenseRep]) -> dict:
    if isinstance(rep, PhaseRep):
        if rep.taus.size > PHASE_TABLE_ENTRIES_CAP:
            raise CapacityError("representation table too large for a pair file")
        return {"type": "phase", "den": rep.den,
                "taus": rep.taus.tolist(), "nums": rep.nums.tolist()}
    if rep.mats.size > DENSE_TABLE_ENTRIES_CAP:
        raise CapacityError("dense representation table too large for a pair file")
    return {"type": "dense",
            "mats": [matrix_to_data(m) for m in rep.mats]}


def _rep_from_data(space: RingPower, data: dict) -> Union[PhaseRep, DenseRep]:
    if data["type"] == "phase":
        return PhaseRep(space, np.array(data["taus"], dtype=np.int64),
                        np.array(data["nums"], dtype=np.int64), int(data["den"]))
    if data["type"] == "dense":
        mats = np.stack([matrix_from_data(m) for m in data["mats"]])
        return DenseRep(space, mats)
    raise StructureError(f"unknown representation payload {data['type']!r}")


def pair_to_data(pair: CCRPair) -> dict:
    return {
        "record": "ccr-pair",
        "format": FORMAT_VERSION,
        "ring": pair.ring.descriptor(),
        "d": pair.d,
        "lambda": pair.lam.descriptor(),
        "dim": pair.dim,
        "label": pair.label(),
        "u": _rep_to_data(pair.u),
        "v": _rep_to_data(pair.v),
    }


def pair_from_data(data: dict) -> CCRPair:
    _expect(data, "ccr-pair")
    ring = ring_from_descriptor(data["ring"])
    d = int(data["d"])
    lam = character_from_descriptor(ring.additive_factors, data["lambda"])
    space = RingPower(ring, d)
    u = _rep_from_data(space, data["u"])
    v = _rep_from_data(space, data["v"])
    dim = int(data["dim"])
    if u.dim != dim or v.dim != dim:
        raise StructureError("representation tables disagree with the stated dimension")
    return CCRPair(ring, d, lam, space, dim, u, v)


def save_pair(path: str, pair: CCRPair) -> None:
    save_json(path, pair_to_data(pair))


def load_pair(path: str) -> CCRPair:
    return pair_from_data(load_json(path))


# -- result records -----------------------------------------------------------------


def condition_report_to_data(ring: FiniteRing, lam: Character,
                             report: ConditionReport) -> dict:
    return {
        "record": "condition-report",
        "format": FORMAT_VERSION,
        "ring": ring.descriptor(),
        "lambda": lam.descriptor(),
        "sym": report.sym,
        "iso": report.iso,
        "faith": report.faith,
        "sym_counterexample": list(report.sym_counterexample)
        if report.sym_counterexample else None,
        "iso_kernel": list(report.iso_kernel) if report.iso_kernel else None,
        "faith_witness_ideal": list(report.faith_witness_ideal)
        if report.faith_witness_ideal else None,
    }


def witness_to_data(witness: EquivalenceWitness) -> dict:
    data = {
        "record": "equivalence-witness",
        "format": FORMAT_VERSION,
        "source": witness.source.label(),
        "target": witness.target.label(),
        "dim": witness.dim,
        "residual": float(witness.residual),
        "unitarity_defect": float(witness.unitarity_defect),
        "exact": witness.exact,
    }
    if witness.dim <= MATRIX_EMBED_DIM:
        data["matrix"] = matrix_to_data(witness.matrix())
    return data


def decomposition_to_data(dec: Decomposition) -> dict:
    data = {
        "record": "decomposition",
        "format": FORMAT_VERSION,
        "multiplicity": dec.multiplicity,
        "residual": float(dec.residual),
        "unitarity_defect": float(dec.unitarity_defect),
        "rounds": dec.rounds,
    }
    if dec.theta.shape[0] <= MATRIX_EMBED_DIM:
        data["theta"] = matrix_to_data(dec.theta)
    return data


def _theta_to_data(theta) -> dict:
    data = {"label": theta.label, "value": float(theta.value),
            "rational": theta.is_rational}
    if theta.frac is not None:
        data["fraction"] = [theta.frac.numerator, theta.frac.denominator]
    data["convergents"] = [[c.numerator, c.denominator]
                           for c in theta.convergents[:12]]
    return data


def assignment_to_data(assignment: SampleAssignment) -> dict:
    edges = []
    for e in assignment.edges:
        if e is None:
            edges.append(None)
            continue
        entry = {"edge": e.index, "n": e.n, "phase": float(e.alpha),
                 "phase_err": float(e.err), "inside": e.inside}
        if e.alpha_frac is not None:
            entry["phase_fraction"] = [e.alpha_frac.numerator,
                                       e.alpha_frac.denominator]
        edges.append(entry)
    uncovered = assignment.uncovered_cells()
    return {
        "record": "orbit-assignment",
        "format": FORMAT_VERSION,
        "theta": _theta_to_data(assignment.theta),
        "resolution": assignment.partition.resolution,
        "dims": assignment.partition.dims,
        "window": assignment.window,
        "covered": assignment.covered,
        "edges": edges,
        "uncovered_count": len(uncovered),
        "uncovered_cells": [list(c) for c in uncovered[:4096]],
    }


def certificate_to_data(cert: EpsCertificate) -> dict:
    return {
        "record": "eps-certificate",
        "format": FORMAT_VERSION,
        "theta": _theta_to_data(cert.theta),
        "resolution": cert.resolution,
        "dims": cert.dims,
        "k_values": list(cert.k_values),
        "eps": float(cert.eps),
        "eps_bound": float(cert.eps_bound),
        "delta": float(cert.delta),
        "edge_sups": [float(s) for s in cert.edge_sups],
        "uncovered_count": len(cert.uncovered),
    }


def study_rows_to_csv(rows: list[StudyRow]) -> str:
    return "\n".join([CSV_HEADER] + [r.as_csv() for r in rows]) + "\n"
