"""One-shot verification matrix over the standard ring list.

The quick profile caps |R|^d at 16 and trims seed counts; full raises the
cap to 64 (which pulls in the 2x2 matrix ring at dimension 4096) and runs
the whole seed matrix.  Every check lands in a RunReport with its residual
and tolerance, and the report serializes with a stable field order so runs
with identical seeds diff byte-for-byte.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field

from . import __version__
from .approx import convergence_study
from .characters import (check_conditions, dual_group, faithful_characters,
                         parse_character, sym_iso_characters)
from .errors import NumericsError, StructureError
from .heisenberg import induced_rep, regular_rep, trace_table
from .pairs import (inflate, random_instance, regular_pair,
                    representation_defect, schrodinger_pair, verify_ccr)
from .rings import parse_ring
from .svn import (commutant_dim, decompose, modulation_align_residual,
                  pairs_equivalent, shift_align_residual, svn_intertwiner,
                  transform_align_residual)

RING_SPECS = ("zmod:2", "zmod:3", "zmod:4", "zmod:5", "zmod:6", "zmod:7",
              "zmod:8", "gf:3", "gf:5", "gf:7", "mat:2:gf:2", "zmod:2*zmod:3")


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool

    def to_data(self) -> dict:
        return {"name": self.name, "residual": self.residual,
                "tolerance": self.tolerance, "passed": self.passed}


@dataclass
class RunReport:
    command: list[str]
    config: dict
    seed: int = 0
    checks: list[CheckResult] = field(default_factory=list)
    wall_time_s: float = 0.0

    def check(self, name: str, residual: float, tolerance: float) -> CheckResult:
        result = CheckResult(name, float(residual), float(tolerance),
                             bool(residual <= tolerance))
        self.checks.append(result)
        return result

    def fail(self, name: str, message: str) -> CheckResult:
        result = CheckResult(f"{name} [{message}]", float("inf"), 0.0, False)
        self.checks.append(result)
        return result

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.all_passed else 1

    def config_hash(self) -> str:
        blob = json.dumps({"config": self.config, "seed": self.seed,
                           "version": __version__}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def to_data(self) -> dict:
        return {
            "record": "run-report",
            "command": self.command,
            "config": self.config,
            "config_hash": self.config_hash(),
            "seed": self.seed,
            "version": __version__,
            "checks": [c.to_data() for c in self.checks],
            "passed": sum(1 for c in self.checks if c.passed),
            "failed": sum(1 for c in self.checks if not c.passed),
            "all_passed": self.all_passed,
            "wall_time_s": round(self.wall_time_s, 3),
        }

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            lines.append(f"{mark} {c.name}  residual={c.residual:.3e}"
                         f"  tol={c.tolerance:.1e}")
        good = sum(1 for c in self.checks if c.passed)
        lines.append(f"{good}/{len(self.checks)} checks passed"
                     f" in {self.wall_time_s:.1f} s")
        return "\n".join(lines)


def _matrix(cap: int):
    """(ring, d) pairs from the standard list with |R|^d <= cap."""
    out = []
    for spec in RING_SPECS:
        ring = parse_ring(spec)
        for d in (1, 2):
            if ring.order ** d <= cap:
                out.append((spec, ring, d))
    return out


def _ccr_checks(report: RunReport, cap: int) -> None:
    for spec, ring, d in _matrix(cap):
        for lam in faithful_characters(ring):
            for make, kind in ((schrodinger_pair, "schrodinger"),
                               (regular_pair, "regular")):
                pair = make(ring, d, lam)
                tag = f"ccr {spec} d={d} lam={lam.short_name()} {kind}"
                report.check(f"{tag} braiding", verify_ccr(pair), 1e-12)
                rep_res = max(representation_defect(pair.u),
                              representation_defect(pair.v))
                report.check(f"{tag} rep", rep_res, 1e-12)


def _alignment_checks(report: RunReport, cap: int) -> None:
    for spec, ring, d in _matrix(cap):
        if ring.order ** (3 * d) > 4096:
            continue
        for lam in sym_iso_characters(ring):
            pair = schrodinger_pair(ring, d, lam)
            tag = f"align {spec} d={d} lam={lam.short_name()}"
            report.check(f"{tag} shift", shift_align_residual(pair), 1e-10)
            report.check(f"{tag} modulation",
                         modulation_align_residual(pair), 1e-10)
            report.check(f"{tag} transform",
                         transform_align_residual(pair), 1e-10)


def _witness_checks(report: RunReport, cap: int) -> None:
    for spec, ring, d in _matrix(cap):
        if ring.order ** (3 * d) > 4096:
            continue
        for lam in sym_iso_characters(ring):
            pair = schrodinger_pair(ring, d, lam)
            witness = svn_intertwiner(pair)
            tag = f"witness {spec} d={d} lam={lam.short_name()}"
            report.check(f"{tag} unitary", witness.unitarity_defect, 1e-10)
            report.check(f"{tag} intertwine", witness.residual, 1e-9)


DECOMPOSE_SET = (("zmod:2", 2), ("zmod:3", 1), ("zmod:4", 1),
                 ("zmod:2*zmod:3", 1), ("mat:2:gf:2", 1))


def _decompose_checks(report: RunReport, cap: int, seeds: range) -> None:
    for spec, d in DECOMPOSE_SET:
        ring = parse_ring(spec)
        if ring.order ** d > min(cap, 16):
            continue
        lam = sym_iso_characters(ring)[0]
        base = ring.order ** d
        for mult in (1, 2, 3, 4):
            if mult * base > 64:
                continue
            for seed in seeds:
                pair = random_instance(ring, d, lam, mult, seed=seed)
                tag = f"decompose {spec} d={d} k={mult} seed={seed}"
                try:
                    dec = decompose(pair, seed=seed)
                except (NumericsError, StructureError) as exc:
                    report.fail(tag, str(exc))
                    continue
                report.check(f"{tag} residual", dec.residual, 1e-8)
                report.check(f"{tag} multiplicity",
                             abs(dec.multiplicity - mult), 0.0)
        reg = regular_pair(ring, d, lam)
        dec = decompose(reg, seed=0)
        report.check(f"decompose {spec} d={d} regular multiplicity",
                     abs(dec.multiplicity - base), 0.0)


def _commutant_checks(report: RunReport, cap: int) -> None:
    for spec, ring, d in _matrix(cap):
        iso_chars = [lam for lam in dual_group(ring.additive_factors)
                     if check_conditions(ring, lam).iso]
        for lam in iso_chars:
            pair = schrodinger_pair(ring, d, lam)
            tag = f"commutant {spec} d={d} lam={lam.short_name()}"
            report.check(f"{tag} irreducible",
                         abs(commutant_dim(pair) - 1), 0.0)
    ring = parse_ring("zmod:2")
    lam = sym_iso_characters(ring)[0]
    pair = inflate(schrodinger_pair(ring, 1, lam), 2)
    report.check("commutant zmod:2 inflate k=2",
                 abs(commutant_dim(pair) - 4), 0.0)
    ring4 = parse_ring("zmod:4")
    lam2 = parse_character(ring4.additive_factors, "2")
    degenerate = schrodinger_pair(ring4, 2, lam2)
    report.check("commutant zmod:4 lam=2 d=2 degenerate",
                 abs(commutant_dim(degenerate) - 4), 0.0)


def _condition_checks(report: RunReport, cap: int) -> None:
    for spec in RING_SPECS:
        ring = parse_ring(spec)
        if ring.order > cap:
            continue
        bad = 0
        for lam in dual_group(ring.additive_factors):
            rep = check_conditions(ring, lam)
            if rep.sym and rep.faith and not rep.iso:
                bad += 1
        report.check(f"conditions {spec} sym+faith implies iso", bad, 0.0)
    ring4 = parse_ring("zmod:4")
    lam2 = parse_character(ring4.additive_factors, "2")
    rep = check_conditions(ring4, lam2)
    ok = (not rep.iso and not rep.faith
          and rep.iso_kernel == [0, 2] and rep.faith_witness_ideal == [0, 2])
    report.check("conditions zmod:4 lam=2 counterexample", 0 if ok else 1, 0.0)


def _induced_checks(report: RunReport, heis_cap: int) -> None:
    for spec, ring, d in _matrix(64):
        if ring.order ** (2 * d + 1) > heis_cap:
            continue
        for lam in dual_group(ring.additive_factors):
            reg = trace_table(regular_rep(ring, d, lam))
            ind = trace_table(induced_rep(ring, d, lam))
            worst = max(abs(reg[g] - ind[g]) for g in reg)
            report.check(
                f"induced {spec} d={d} lam={lam.short_name()} traces",
                worst, 1e-8)


def _approx_checks(report: RunReport) -> None:
    k_window = list(range(-5, 6))
    rows = convergence_study("golden", k_window, [8, 16, 32, 64])
    drift = max(max(b.eps_exact - a.eps_exact for a, b in zip(rows, rows[1:])),
                0.0)
    report.check("approx golden eps monotone", drift, 0.0)
    report.check("approx golden eps(64)", rows[-1].eps_exact, 0.70)
    gap = max(max(r.eps_exact - r.eps_bound for r in rows), 0.0)
    report.check("approx golden exact under bound", gap, 0.0)
    report.check("approx golden covered",
                 sum(r.uncovered_cells for r in rows), 0.0)
    rows38 = convergence_study("3/8", k_window, [8, 16, 32, 64])
    floor = min(r.eps_exact for r in rows38[1:])
    report.check("approx 3/8 positive floor", 0.0 if floor > 0.1 else 1.0, 0.0)


def suite(profile: str, seed: int = 0, command: list[str] | None = None) -> RunReport:
    """Run the verification matrix at the given profile."""
    if profile not in ("quick", "full"):
        raise StructureError(f"unknown suite profile {profile!r}")
    cap = 16 if profile == "quick" else 64
    heis_cap = 128 if profile == "quick" else 512
    seeds = range(2) if profile == "quick" else range(5)
    report = RunReport(command or ["suite", profile],
                       {"profile": profile, "cap": cap}, seed=seed)
    start = time.perf_counter()
    _ccr_checks(report, cap)
    _alignment_checks(report, cap)
    _witness_checks(report, cap)
    _decompose_checks(report, cap, seeds)
    _commutant_checks(report, cap)
    _condition_checks(report, cap)
    _induced_checks(report, heis_cap)
    _approx_checks(report)
    report.wall_time_s = time.perf_counter() - start
    return report
