import json

import numpy as np
import pytest

from ccrkit.approx import (build_grid_partition, certify_epsilon,
                           convergence_study, sample_orbit)
from ccrkit.characters import check_conditions, dual_group, sym_iso_characters
from ccrkit.errors import StructureError
from ccrkit.linalg import random_unitary
from ccrkit.pairs import conjugate, schrodinger_pair, verify_ccr
from ccrkit.rings import parse_ring
from ccrkit.serialize import (CSV_HEADER, condition_report_to_data, load_json,
                              load_pair, matrix_from_data, matrix_to_data,
                              pair_from_data, pair_to_data, save_json,
                              save_pair, study_rows_to_csv, witness_to_data)
from ccrkit.svn import svn_intertwiner


def test_matrix_round_trip():
    rng = np.random.default_rng(1)
    m = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    np.testing.assert_array_equal(matrix_from_data(matrix_to_data(m)), m)


def test_phase_pair_round_trip_is_bitwise(tmp_path):
    ring = parse_ring("zmod:2*zmod:3")
    pair = schrodinger_pair(ring, 1, sym_iso_characters(ring)[0])
    path = str(tmp_path / "pair.json")
    save_pair(path, pair)
    back = load_pair(path)
    assert back.ring == pair.ring and back.d == pair.d
    assert back.lam == pair.lam and back.dim == pair.dim
    assert back.u.den == pair.u.den
    np.testing.assert_array_equal(back.u.taus, pair.u.taus)
    np.testing.assert_array_equal(back.u.nums, pair.u.nums)
    np.testing.assert_array_equal(back.v.taus, pair.v.taus)
    np.testing.assert_array_equal(back.v.nums, pair.v.nums)
    assert verify_ccr(back) == 0.0


def test_dense_pair_round_trip_preserves_numerics(tmp_path):
    ring = parse_ring("zmod:3")
    pair = conjugate(schrodinger_pair(ring, 1, sym_iso_characters(ring)[0]),
                     random_unitary(3, seed=11))
    path = str(tmp_path / "dense.json")
    save_pair(path, pair)
    back = load_pair(path)
    assert not back.is_exact
    for a in range(3):
        np.testing.assert_array_equal(back.u.mat(a), pair.u.mat(a))
        np.testing.assert_array_equal(back.v.mat(a), pair.v.mat(a))
    assert verify_ccr(back) < 1e-13


def test_pair_file_is_valid_versioned_json(tmp_path):
    ring = parse_ring("zmod:5")
    pair = schrodinger_pair(ring, 1, sym_iso_characters(ring)[0])
    path = str(tmp_path / "p.json")
    save_pair(path, pair)
    with open(path) as fh:
        raw = fh.read()
    assert raw.endswith("\n")
    data = json.loads(raw)
    assert data["record"] == "ccr-pair"
    assert data["format"] == 1
    assert data["dim"] == 5


def test_load_rejects_wrong_record_and_version(tmp_path):
    bad1 = str(tmp_path / "a.json")
    save_json(bad1, {"record": "not-a-pair", "format": 1})
    with pytest.raises(StructureError, match="expected"):
        load_pair(bad1)
    bad2 = str(tmp_path / "b.json")
    save_json(bad2, {"record": "ccr-pair", "format": 99})
    with pytest.raises(StructureError, match="format version"):
        load_pair(bad2)
    assert load_json(bad1)["record"] == "not-a-pair"


def test_tampered_tables_fail_verification(tmp_path):
    ring = parse_ring("zmod:4")
    pair = schrodinger_pair(ring, 1, sym_iso_characters(ring)[0])
    path = str(tmp_path / "t.json")
    save_pair(path, pair)
    data = load_json(path)
    data["u"]["taus"][1] = data["u"]["taus"][2]
    tampered = pair_from_data(data)
    assert verify_ccr(tampered) > 0.5


def test_condition_report_data_fields():
    ring = parse_ring("zmod:4")
    lam = next(l for l in dual_group(ring.additive_factors)
               if not check_conditions(ring, l).iso and not l.is_trivial())
    data = condition_report_to_data(ring, lam, check_conditions(ring, lam))
    assert data["record"] == "condition-report"
    assert data["sym"] is True
    assert data["iso"] is False
    assert data["faith"] is False
    assert data["iso_kernel"] == [0, 2]
    assert data["faith_witness_ideal"] == [0, 2]
    assert data["sym_counterexample"] is None
    json.dumps(data)


def test_witness_data_embeds_small_matrices():
    ring = parse_ring("zmod:2")
    pair = schrodinger_pair(ring, 1, sym_iso_characters(ring)[0])
    w = svn_intertwiner(pair)
    data = witness_to_data(w)
    assert data["record"] == "equivalence-witness"
    assert data["dim"] == 8
    assert data["residual"] == 0.0
    got = np.array([[complex(re, im) for re, im in row]
                    for row in data["matrix"]])
    np.testing.assert_allclose(got, w.matrix(), atol=0)
    json.dumps(data)


def test_certificate_and_study_serialization():
    from ccrkit.serialize import assignment_to_data, certificate_to_data
    asg = sample_orbit("golden", build_grid_partition(8), 50)
    cert = certify_epsilon("golden", asg, range(-5, 6))
    cdata = certificate_to_data(cert)
    assert cdata["record"] == "eps-certificate"
    assert cdata["eps"] == cert.eps
    json.dumps(cdata)
    adata = assignment_to_data(asg)
    assert adata["record"] == "orbit-assignment"
    assert len(adata["edges"]) == 8
    json.dumps(adata)
    rows = convergence_study("golden", range(-5, 6), [8, 16])
    csv = study_rows_to_csv(rows)
    lines = csv.strip().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    assert lines[1].startswith("8,")
