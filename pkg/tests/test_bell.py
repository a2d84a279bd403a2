import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quditcorr.bell import (
    TSIRELSON,
    ChshSetting,
    SeparableSpec,
    chsh_sign_matrix,
    chsh_value,
    chsh_values,
    classical_B,
    laplace_check,
    mix_separable,
    optimize_chsh,
    ppt_check,
    product_unitaries,
    qudit32_interpretation,
    random_separable_spec,
    second_differences,
    stochastic_tomogram_matrix,
    tsirelson_setting,
)
from quditcorr.linalg import InvalidDensityError, random_density, random_pure_density, random_unitary
from quditcorr.tomography import tomogram_probs

unit = st.floats(0, 1, allow_nan=False)


def b_oracle(x, y, z, t):
    X, Y, Z, T = (2 * v - 1 for v in (x, y, z, t))
    return X * Z + X * T + Y * Z - Y * T


def test_sign_matrix():
    I = chsh_sign_matrix()
    assert I[0, 0] == 1 and I[3, 0] == -1
    assert I.sum() == 0
    np.testing.assert_array_equal(I[0], I[1])
    np.testing.assert_array_equal(I[1], I[2])
    assert set(np.unique(I)) == {-1.0, 1.0}
    np.testing.assert_array_equal(I.sum(axis=1), 0)


def test_stochastic_matrix(bell, mixed, rng):
    M = stochastic_tomogram_matrix(bell, [np.eye(4)] * 4)
    np.testing.assert_allclose(M, np.tile([[0.5], [0], [0], [0.5]], 4))
    us = [random_unitary(4, rng) for _ in range(4)]
    np.testing.assert_allclose(stochastic_tomogram_matrix(mixed, us), np.full((4, 4), 0.25), atol=1e-15)
    M = stochastic_tomogram_matrix(random_density(4, rng), us)
    np.testing.assert_allclose(M.sum(axis=0), 1, atol=1e-14)
    assert M.min() >= 0


def test_chsh_value_mixed(mixed, rng):
    for _ in range(20):
        assert abs(chsh_value(mixed, ChshSetting.random(rng))) < 1e-14


def test_chsh_value_tsirelson(bell):
    assert chsh_value(bell, tsirelson_setting()) == pytest.approx(2 * math.sqrt(2), abs=1e-6)


def test_chsh_correlator_form(bell, rng):
    # B = E(a,b) + E(a,c) + E(d,b) - E(d,c), E from the +-1 outcome products
    s = ChshSetting.random(rng)
    ua, ub, uc, ud = s.unitaries()
    parity = np.array([1, -1, -1, 1])

    def E(u1, u2):
        return parity @ tomogram_probs(bell, np.kron(u1, u2))

    oracle = E(ua, ub) + E(ua, uc) + E(ud, ub) - E(ud, uc)
    assert chsh_value(bell, s) == pytest.approx(oracle, abs=1e-14)
    paper = E(ua, ub) + E(ua, uc) + E(ud, ua) - E(ud, uc)
    assert chsh_value(bell, s, strict_paper_pairing=True) == pytest.approx(paper, abs=1e-14)


def test_chsh_product_states_bounded(rng):
    for _ in range(1000):
        rho = np.kron(random_pure_density(2, rng), random_pure_density(2, rng))
        assert abs(chsh_value(rho, ChshSetting.random(rng))) <= 2 + 1e-9


def test_chsh_fast_path_matches_reference(rng):
    rho = random_density(4, rng)
    X = rng.uniform(-np.pi, np.pi, (200, 12))
    fast = chsh_values(rho, X)
    ref = [chsh_value(rho, ChshSetting.from_array(x)) for x in X]
    np.testing.assert_allclose(fast, ref, atol=1e-13)


def test_tsirelson_ceiling(rng):
    X = rng.uniform(-np.pi, np.pi, (1000, 12))
    worst = 0.0
    for k in range(1000):
        rho = random_pure_density(4, rng) if k % 2 else random_density(4, rng)
        worst = max(worst, abs(chsh_values(rho, X[k : k + 1])[0]))
    assert worst <= TSIRELSON + 1e-9


def test_chsh_linear_in_state(rng):
    s = ChshSetting.random(rng)
    r1, r2 = random_density(4, rng), random_density(4, rng)
    p = 0.3
    assert chsh_value(p * r1 + (1 - p) * r2, s) == pytest.approx(p * chsh_value(r1, s) + (1 - p) * chsh_value(r2, s), abs=1e-14)


def test_chsh_rejects_invalid():
    with pytest.raises(InvalidDensityError):
        chsh_value(np.eye(4), ChshSetting())


def test_setting_roundtrip(rng):
    x = rng.normal(size=12)
    np.testing.assert_array_equal(ChshSetting.from_array(x).to_array(), x)
    with pytest.raises(ValueError):
        ChshSetting(a=(0, float("nan"), 0))
    assert len(product_unitaries(ChshSetting())) == 4


# -- classical B --------------------------------------------------------------------


def test_classical_examples():
    assert classical_B(1, 1, 1, 1) == pytest.approx(2)
    assert classical_B(0.5, 0.5, 0.5, 0.5) == pytest.approx(0)
    for c in itertools.product((0, 1), repeat=4):
        v = classical_B(*c)
        assert v == pytest.approx(b_oracle(*c), abs=1e-15)
        assert -2 <= v <= 2
    with pytest.raises(ValueError):
        classical_B(1.2, 0, 0, 0)
    assert classical_B(1.2, 0, 0, 0, allow_outside=True) == pytest.approx(b_oracle(1.2, 0, 0, 0))


@given(unit, unit, unit, unit)
@settings(max_examples=300, deadline=None)
def test_classical_matches_oracle_and_bound(x, y, z, t):
    v = classical_B(x, y, z, t)
    assert v == pytest.approx(b_oracle(x, y, z, t), abs=1e-14)
    assert abs(v) <= 2 + 1e-15


def test_classical_multilinear(rng):
    for _ in range(50):
        p = rng.uniform(0, 1, 4)
        for k in range(4):
            vals = []
            for s in (0.1, 0.4, 0.9):
                q = p.copy()
                q[k] = s
                vals.append(classical_B(*q))
            # collinear in the k-th coordinate
            assert (vals[1] - vals[0]) / 0.3 == pytest.approx((vals[2] - vals[1]) / 0.5, abs=1e-12)


def test_laplace(rng):
    rep = laplace_check(rng.uniform(0.05, 0.95, (100, 4)), 1e-3)
    assert rep.passed and rep.rhs <= 1e-6
    assert abs(second_differences([0.5] * 4, 1e-3).sum()) <= 1e-6
    for p in rng.uniform(0.05, 0.95, (20, 4)):
        assert np.max(np.abs(second_differences(p, 1e-3))) <= 1e-6


# -- separable states and PPT ---------------------------------------------------------


def test_mix_separable(rng):
    spec = SeparableSpec(np.array([1.0]), [(np.eye(2) / 2, np.eye(2) / 2)])
    np.testing.assert_allclose(mix_separable(spec), np.eye(4) / 4)
    for _ in range(50):
        rho = mix_separable(random_separable_spec(8, rng))
        assert abs(np.trace(rho) - 1) < 1e-14
        assert ppt_check(rho).is_ppt
    with pytest.raises(ValueError):
        SeparableSpec(np.array([0.5, 0.6]), [(np.eye(2) / 2,) * 2] * 2)


def test_ppt_examples(bell, mixed):
    r = ppt_check(bell)
    assert r.min_pt_eigenvalue == pytest.approx(-0.5, abs=1e-12) and not r.is_ppt
    r = ppt_check(mixed)
    assert r.is_ppt and r.min_pt_eigenvalue == pytest.approx(0.25)


def test_separable_bound_batch(rng):
    X = rng.uniform(-np.pi, np.pi, (100, 12))
    worst = 0.0
    for _ in range(200):
        rho = mix_separable(random_separable_spec(8, rng))
        worst = max(worst, np.max(np.abs(chsh_values(rho, X))))
    assert worst <= 2 + 1e-9


# -- optimizer ---------------------------------------------------------------------


def test_optimize_bell(bell):
    res = optimize_chsh(bell, restarts=32, rng_seed=1)
    assert abs(res.best_B - TSIRELSON) <= 1e-3
    assert res.best_B <= TSIRELSON + 1e-9
    assert abs(chsh_value(bell, res.best_setting)) == pytest.approx(res.best_B, abs=1e-12)


def test_optimize_mixed(mixed):
    assert optimize_chsh(mixed, restarts=4).best_B <= 1e-9


def test_optimize_separable(rng):
    for k in range(5):
        rho = mix_separable(random_separable_spec(8, rng))
        assert optimize_chsh(rho, restarts=8, rng_seed=k).best_B <= 2 + 1e-6


def test_optimize_not_below_initial(rng):
    rho = random_density(4, rng)
    init = ChshSetting.random(rng)
    res = optimize_chsh(rho, restarts=2, initial=init, max_evals=50)
    assert res.best_B >= abs(chsh_value(rho, init)) - 1e-15


def test_optimize_reproducible(bell):
    a = optimize_chsh(bell, restarts=4, rng_seed=5)
    b = optimize_chsh(bell, restarts=4, rng_seed=5)
    assert a.to_dict() == b.to_dict()


def test_witness_consistency(rng):
    # a Bell-like state that fails PPT is pushed past the separable bound
    psi = np.zeros(4, dtype=complex)
    psi[0], psi[3] = np.cos(0.5), np.sin(0.5)
    rho = np.outer(psi, psi.conj())
    assert not ppt_check(rho).is_ppt
    assert optimize_chsh(rho, restarts=16).best_B > 2


def test_strict_pairing_is_measured(bell):
    res = optimize_chsh(bell, restarts=16, strict_paper_pairing=True)
    assert res.strict_paper_pairing
    assert res.best_B > TSIRELSON


# -- spin-3/2 reading ----------------------------------------------------------------


def test_qudit32_interpretation(bell, rng):
    out = qudit32_interpretation(bell)
    assert out["qudit32"] == {"3/2": 0.5, "1/2": 0.0, "-1/2": 0.0, "-3/2": 0.5}
    assert set(out["qudit32"]) == {"3/2", "1/2", "-1/2", "-3/2"}
    for _ in range(20):
        rho, s = random_density(4, rng), ChshSetting.random(rng)
        out = qudit32_interpretation(rho, s)
        assert out["B_two_qubit"] == out["B_qudit32"]
        assert out["B_two_qubit"] == pytest.approx(chsh_value(rho, s), abs=1e-14)
