import math

import numpy as np
import pytest

from tqpsim import fock, thermal
from tqpsim.fock import HybridState, SpaceLayout
from tqpsim.thermal import ThermalSpec


def test_thermal_state_zero_temperature():
    st = thermal.thermal_state(ThermalSpec(0.0))
    pops = st.populations()
    assert pops[0] == pytest.approx(1.0)
    assert pops[1:].max() == 0.0


def test_thermal_state_geometric_probabilities():
    st = thermal.thermal_state(ThermalSpec(1.0))
    p = st.populations()
    for n, want in enumerate((0.5, 0.25, 0.125)):
        assert p[n] == pytest.approx(want, abs=1e-7)


def test_thermal_state_mean_excitation_defining_property():
    for n_mean in (0.5, 1.0, 2.0, 4.0):
        st = thermal.thermal_state(ThermalSpec(n_mean, tail_tol=1e-12))
        n_op = fock.number(st.layout, 0)
        assert st.expectation(n_op).real == pytest.approx(n_mean, abs=1e-8)


def test_thermal_state_cutoff_too_small():
    with pytest.raises(thermal.CutoffError):
        thermal.thermal_state(ThermalSpec(2.0, cutoff=8))


def test_parity_project_vacuum_and_thermal():
    vac = thermal.thermal_state(ThermalSpec(0.0))
    post, p = thermal.parity_project(vac, 0, +1)
    assert p == pytest.approx(1.0)
    assert np.abs(post.data - vac.data).max() < 1e-14
    with pytest.raises(thermal.ProjectionError):
        thermal.parity_project(vac, 0, -1)

    th = thermal.thermal_state(ThermalSpec(1.0))
    post, p = thermal.parity_project(th, 0, +1)
    assert p == pytest.approx(2.0 / 3.0, abs=1e-8)  # (1 + 1/(2<n>+1)) / 2
    par = fock.parity(post.layout, 0)
    assert post.expectation(par).real == pytest.approx(1.0, abs=1e-14)


def test_parity_project_idempotent():
    th = thermal.thermal_state(ThermalSpec(1.5))
    once, _ = thermal.parity_project(th, 0, -1)
    twice, p2 = thermal.parity_project(once, 0, -1)
    assert p2 == pytest.approx(1.0, abs=1e-12)
    assert np.abs(twice.data - once.data).max() < 1e-12


def test_projected_branches_match_printed_geometric_forms():
    n_mean = 1.3
    th = thermal.thermal_state(ThermalSpec(n_mean))
    d = th.layout.mode_cutoffs[0]
    q = n_mean / (n_mean + 1.0)
    for sign in (+1, -1):
        post, _ = thermal.parity_project(th, 0, sign)
        pops = post.populations()
        offset = 0 if sign == +1 else 1
        # printed branch form: (1 - q^2) q^(2n) on |2n + offset>
        want = np.zeros(d)
        ns = np.arange(offset, d, 2)
        want[ns] = (1 - q * q) * q ** (ns - offset)
        want /= want.sum()
        assert np.abs(pops - want).max() < 1e-10
        assert np.abs(pops - thermal.even_odd_weights(n_mean, d, sign)).max() < 1e-12


def test_tqp_initial_state_zero_temperature_and_parities():
    pair0 = thermal.tqp_initial_state(ThermalSpec(0.0))
    pops = pair0.populations().reshape(pair0.layout.dims)
    assert pops[1, 0] == pytest.approx(1.0)
    pair = thermal.tqp_initial_state(ThermalSpec(2.0))
    lay = pair.layout
    z_l = fock.parity(lay, 1)
    p_first = fock.parity(lay, 0)
    assert pair.expectation(z_l).real == pytest.approx(1.0, abs=1e-13)
    assert pair.expectation(p_first).real == pytest.approx(-1.0, abs=1e-13)
    assert pair.expectation(p_first @ z_l).real == pytest.approx(-1.0, abs=1e-13)


def test_von_neumann_entropy_reference_values():
    lay = SpaceLayout(0, (4,))
    pure = HybridState.basis(lay, (), (2,))
    assert thermal.von_neumann_entropy(pure) == 0.0
    # thermal <n> = 1: (n+1)log2(n+1) - n log2 n = 2 bits
    th = thermal.thermal_state(ThermalSpec(1.0, tail_tol=1e-12))
    assert thermal.von_neumann_entropy(th) == pytest.approx(2.0, abs=1e-7)
    mixed = HybridState.density(SpaceLayout(0, (2,)), np.diag([0.5, 0.5]).astype(complex))
    assert thermal.von_neumann_entropy(mixed) == pytest.approx(1.0, abs=1e-14)
    bad = HybridState.density(lay, np.diag([1.2, -0.2, 0, 0]).astype(complex))
    with pytest.raises(fock.StateError):
        thermal.von_neumann_entropy(bad)


def test_entropy_report_reference_point():
    rep = thermal.entropy_report(ThermalSpec(1.0))
    assert rep.n_tilde == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert rep.s_thermal == pytest.approx(2.0, abs=1e-12)
    assert abs(rep.s_tqp - rep.s_tqp_spectral) < 1e-6
    assert rep.landauer_pure == rep.s_thermal
    assert rep.landauer_tqp == pytest.approx(2 * rep.s_thermal - rep.s_tqp, abs=1e-12)


def test_crossover_flags_and_landauer_ordering():
    low = thermal.entropy_report(ThermalSpec(0.5))
    high = thermal.entropy_report(ThermalSpec(1.5))
    assert not low.crossover_flag
    assert high.crossover_flag
    # 2 S_th - S_pair < S_th exactly when S_pair > S_th
    assert (high.landauer_tqp < high.landauer_pure) == high.crossover_flag
    assert (low.landauer_tqp < low.landauer_pure) == low.crossover_flag


def test_crossover_root_location():
    root = thermal.crossover_mean_excitation(tol=1e-4)
    assert 0.7 <= root <= 0.9
    assert thermal.tqp_entropy_bits(root + 0.01) > thermal.thermal_entropy_bits(root + 0.01)
    assert thermal.tqp_entropy_bits(root - 0.01) < thermal.thermal_entropy_bits(root - 0.01)


def test_two_mode_spectral_entropy_additivity():
    # the report uses per-branch entropies; validate against the eigenvalue
    # entropy of the actual two-mode pair state
    pair = thermal.tqp_initial_state(ThermalSpec(1.0))
    direct = thermal.von_neumann_entropy(pair)
    assert direct == pytest.approx(thermal.tqp_entropy_bits(1.0), abs=1e-6)


def test_closed_form_agreement_on_coarse_grid():
    for n in (0.05, 0.3, 0.7, 1.0, 2.0, 3.5, 5.0):
        rep = thermal.entropy_report(ThermalSpec(n))
        assert abs(rep.s_tqp - rep.s_tqp_spectral) < 1e-6
