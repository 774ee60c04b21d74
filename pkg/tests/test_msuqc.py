import json
import math

import numpy as np
import pytest

from tqpsim import msuqc, thermal
from tqpsim.msuqc import CircuitStep, LogicalCircuit
from tqpsim.thermal import ThermalSpec


def single_qubit(phi=0.0, theta=0.0):
    return LogicalCircuit(1, (CircuitStep((phi,), (theta,), ()),))


def test_empty_circuit_is_identity():
    circ = LogicalCircuit(1, ())
    assert msuqc.qubit_space_oracle(circ) == 1.0
    assert msuqc.run_pure(circ, [(0, 0)]).probability == pytest.approx(1.0, abs=1e-12)


def test_pure_x_rotation_bloch_oracle():
    # <0_L| e^{i theta X} |0_L> = cos(theta)
    for theta in (math.pi / 2, math.pi / 4, 0.3):
        circ = single_qubit(theta=theta)
        want = math.cos(theta) ** 2
        assert msuqc.qubit_space_oracle(circ) == pytest.approx(want, abs=1e-12)
        assert msuqc.run_pure(circ, [(0, 0)]).probability == pytest.approx(want, abs=1e-10)


def test_z_rotations_leave_a_at_one():
    for phi in (0.3, 1.2, -2.0):
        circ = single_qubit(phi=phi)
        assert msuqc.run_pure(circ, [(1, 2)]).probability == pytest.approx(1.0, abs=1e-10)


def test_oracle_two_qubit_entangler_value():
    # single gamma step on |00>: A = |cos(gamma)|^2 since ZZ|00> = |00>
    circ = LogicalCircuit(2, (CircuitStep((0, 0), (0, 0), (0.7,)),))
    assert msuqc.qubit_space_oracle(circ) == pytest.approx(1.0, abs=1e-12)
    circ2 = LogicalCircuit(2, (CircuitStep((0, 0), (math.pi / 4, 0), (math.pi / 4,)),))
    a = msuqc.qubit_space_oracle(circ2)
    r2 = msuqc.run_pure(circ2, [(0, 0), (0, 0)]).probability
    assert r2 == pytest.approx(a, abs=1e-10)


def test_pure_agrees_with_oracle_random_circuits():
    rng = np.random.default_rng(100)
    for _ in range(6):
        k = int(rng.integers(1, 3))
        circ = msuqc.random_circuit(rng, k, int(rng.integers(1, 4)))
        a = msuqc.qubit_space_oracle(circ)
        bases = [tuple((int(rng.integers(0, 2)), int(rng.integers(0, 2))) for _ in range(k))
                 for _ in range(3)]
        for b in bases:
            r = msuqc.run_pure(circ, b)
            assert abs(r.probability - a) < 1e-8


def test_basis_relabeling_invariance():
    rng = np.random.default_rng(5)
    circ = msuqc.random_circuit(rng, 1, 2)
    values = [msuqc.run_pure(circ, [b]).probability for b in ((0, 0), (1, 2), (2, 1))]
    assert max(values) - min(values) < 1e-10


def test_mixed_zero_temperature_reduces_to_pure():
    rng = np.random.default_rng(50)
    circ = msuqc.random_circuit(rng, 1, 2)
    a_pure = msuqc.run_pure(circ, [(0, 0)]).probability
    a_mixed = msuqc.run_mixed(circ, ThermalSpec(0.0), cutoff=12).probability
    assert abs(a_mixed - a_pure) < 1e-10


def test_mixed_single_qubit_equivalence():
    rng = np.random.default_rng(51)
    circ = msuqc.random_circuit(rng, 1, 2)
    a_oracle = msuqc.qubit_space_oracle(circ)
    d = msuqc.mixed_equivalence_cutoff(1.0)
    res = msuqc.run_mixed(circ, ThermalSpec(1.0), cutoff=d)
    assert res.method == "ensemble"
    assert abs(res.probability - a_oracle) < 1e-8


def test_mixed_two_qubit_entangler_against_oracle():
    circ = LogicalCircuit(2, (CircuitStep((0.4, -0.2), (0.5, 1.1), (math.pi / 4,)),))
    a_oracle = msuqc.qubit_space_oracle(circ)
    d = msuqc.mixed_equivalence_cutoff(0.5)
    res = msuqc.run_mixed(circ, ThermalSpec(0.5), cutoff=d)
    assert res.method == "factorized"
    assert abs(res.probability - a_oracle) < 1e-8


def test_mixed_methods_cross_validate():
    rng = np.random.default_rng(52)
    spec = ThermalSpec(0.4, cutoff=10, tail_tol=1e-3)
    circ = msuqc.random_circuit(rng, 1, 2)
    a_e = msuqc.run_mixed(circ, spec, cutoff=10, method="ensemble").probability
    a_d = msuqc.run_mixed(circ, spec, cutoff=10, method="density").probability
    assert abs(a_e - a_d) < 1e-10
    spec2 = ThermalSpec(0.15, cutoff=5, tail_tol=1e-2)
    circ2 = LogicalCircuit(2, (CircuitStep((0.3, 0.7), (0.2, -0.4), (0.6,)),))
    a_f = msuqc.run_mixed(circ2, spec2, cutoff=5, method="factorized").probability
    a_e2 = msuqc.run_mixed(circ2, spec2, cutoff=5, method="ensemble").probability
    assert abs(a_f - a_e2) < 1e-10


def test_equivalence_cutoff_grows_with_temperature():
    d_half = msuqc.mixed_equivalence_cutoff(0.5)
    d_two = msuqc.mixed_equivalence_cutoff(2.0)
    assert d_half < d_two
    q = 2.0 / 3.0
    assert q ** d_two < 1e-8


def test_circuit_validation_and_budget():
    with pytest.raises(msuqc.CircuitFormatError):
        LogicalCircuit(1, (CircuitStep((0.1, 0.2), (0.3,), ()),))
    with pytest.raises(msuqc.CircuitFormatError):
        LogicalCircuit(1, (CircuitStep((math.nan,), (0.0,), ()),))
    with pytest.raises(msuqc.DimensionBudgetError):
        msuqc.run_pure(LogicalCircuit(1, ()), [(5, 5)], cutoff=8)
    with pytest.raises(msuqc.DimensionBudgetError):
        msuqc.run_mixed(msuqc.random_circuit(np.random.default_rng(0), 2, 1),
                        ThermalSpec(1.0), cutoff=8)


def test_wire_format_round_trip_and_rejection(tmp_path):
    rng = np.random.default_rng(1)
    circ = msuqc.random_circuit(rng, 2, 2)
    path = tmp_path / "circuit.json"
    circ.dump(path)
    loaded = LogicalCircuit.load(path)
    assert loaded == circ
    doc = circ.to_json_dict()
    assert doc["version"] == msuqc.CIRCUIT_FORMAT_VERSION
    doc["extra"] = 1
    with pytest.raises(msuqc.CircuitFormatError):
        LogicalCircuit.from_json_dict(doc)
    doc2 = circ.to_json_dict()
    doc2["version"] = 99
    with pytest.raises(msuqc.CircuitFormatError):
        LogicalCircuit.from_json_dict(doc2)
    # version field optional on read (assumed current)
    doc3 = circ.to_json_dict()
    del doc3["version"]
    assert LogicalCircuit.from_json_dict(doc3) == circ


def test_result_metadata():
    circ = single_qubit(theta=0.4)
    res = msuqc.run_pure(circ, [(0, 1)])
    assert res.mode == "pure"
    assert res.basis_indices == ((0, 1),)
    assert 0.0 <= res.probability <= 1.0 + 1e-9
    resm = msuqc.run_mixed(circ, ThermalSpec(0.3))
    assert resm.mode == "mixed"
    assert resm.mean_excitation == 0.3
