import numpy as np
import pytest

from layerwaves import localbranch as lb
from layerwaves import pencil as pc
from layerwaves import steady as st
from layerwaves.errors import ResonantHarmonicError

SQRT5 = float(np.sqrt(5.0))

# pitchfork curvature at the symmetric configuration (-1,1,-1,1), m=1,
# upper speed sqrt5; cross-checked against an amplitude-pinned
# continuation fit (agrees to 2e-5 relative)
CURVATURE_SYM_M1 = 0.15372967345311


def test_hessian_on_kernel_mode(sym_cfg):
    k = lb.kernel_state(1, sym_cfg, SQRT5, count=2)
    out = lb.hessian_action(sym_cfg, k, k)
    wsq = pc.reciprocal_sq_weights(sym_cfg, SQRT5)
    for i in range(4):
        # concentrated on the doubled harmonic with weight -m (a-c)^-2
        assert out[i].sin[0] == pytest.approx(0.0, abs=1e-15)
        assert out[i].sin[1] == pytest.approx(-1.0 * wsq[i])
        assert np.max(np.abs(out[i].sin[2:]), initial=0.0) == 0.0


def test_hessian_bilinear_symmetric(sym_cfg):
    rng = np.random.default_rng(0)
    h = st.InterfaceState.from_vector(2, 5, rng.standard_normal(20))
    g = st.InterfaceState.from_vector(2, 5, rng.standard_normal(20))
    zero = st.InterfaceState.zero(2, 5)
    assert all(f.max_abs() == 0.0 for f in lb.hessian_action(sym_cfg, h, zero))
    ab = lb.hessian_action(sym_cfg, h, g)
    ba = lb.hessian_action(sym_cfg, g, h)
    for a, b in zip(ab, ba):
        assert np.allclose(a.sin, b.sin, atol=1e-14)


def test_hessian_output_orthogonal_to_cokernel_profile(sym_cfg):
    # no content on the fundamental harmonic, so the range pairing is 0
    k = lb.kernel_state(1, sym_cfg, SQRT5, count=2)
    out = lb.hessian_action(sym_cfg, k, k)
    w = pc.cokernel_vector(1, sym_cfg, SQRT5)
    assert sum(w[i] * out[i].sin[0] for i in range(4)) == 0.0


def test_second_harmonic_correction_solves_linearized_equation(sym_cfg):
    n = 6
    theta = lb.second_harmonic_state(1, sym_cfg, SQRT5, count=n)
    kernel = lb.kernel_state(1, sym_cfg, SQRT5, count=n)
    J = st.jacobian(sym_cfg, SQRT5, st.InterfaceState.zero(1, n))
    lhs = J @ theta.as_vector()
    rhs = np.concatenate([h.with_count(n).sin
                          for h in lb.hessian_action(sym_cfg, kernel, kernel)])
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_second_harmonic_support(sym_cfg):
    theta = lb.second_harmonic_state(1, sym_cfg, SQRT5, count=8)
    for s in theta.series:
        assert np.max(np.abs(np.delete(s.cos, 1))) == 0.0
        assert s.cos[1] != 0.0


def test_second_harmonic_near_component_asymptotics(gen_cfg):
    # At the doubled mode the near component's diagonal entry stays O(1):
    # with gap g = (a_q - c) ~ (-1)^(k+1)/m^2 the entry 4 m^2 g + sign
    # tends to 3 (-1)^(k+1), so the amplitude tends to (2/3) g^-3, one
    # third of the naive diagonal-inverse prediction.
    m = 128
    roots = np.sort(pc.quartic_roots(m, gen_cfg).real)
    a = gen_cfg.as_array()
    for c_star in roots:
        q = int(np.argmin(np.abs(a - c_star)))
        t = lb.second_harmonic_amplitude(m, gen_cfg, c_star)
        g = a[q] - c_star
        assert t[q] == pytest.approx((2.0 / 3.0) / g ** 3, rel=0.1)


def test_resonant_doubled_mode_detected(sym_cfg):
    # a speed that makes the doubled mode itself singular trips the guard
    c_double = pc.bifurcation_speeds(2, sym_cfg).admissible()[-1]
    with pytest.raises(ResonantHarmonicError):
        lb.second_harmonic_amplitude(1, sym_cfg, c_double)


def test_curvature_value_and_sign_symmetric(sym_cfg):
    curv = lb.speed_curvature(1, sym_cfg, SQRT5)
    assert curv == pytest.approx(CURVATURE_SYM_M1, rel=1e-10)
    assert curv > 0.0  # supercritical: the speed exceeds both interfaces
    # mirror arm bifurcates downward
    assert lb.speed_curvature(1, sym_cfg, -SQRT5) == pytest.approx(
        -CURVATURE_SYM_M1, rel=1e-10)


def test_curvature_large_mode_asymptotics(gen_cfg):
    # curvature tends to -(1/3) (a_q - c)^-3: the sign rule
    # "supercritical iff c exceeds the nearest interface velocity"
    m = 128
    a = gen_cfg.as_array()
    for c_star in np.sort(pc.quartic_roots(m, gen_cfg).real):
        q = int(np.argmin(np.abs(a - c_star)))
        curv = lb.speed_curvature(m, gen_cfg, c_star)
        g = a[q] - c_star
        assert curv == pytest.approx(-(1.0 / 3.0) / g ** 3, rel=0.1)
        assert (curv > 0) == (c_star > a[q])


def test_classification_sign_rule_many_configs():
    rng = np.random.default_rng(12)
    m = 64
    found = 0
    while found < 5:
        lo1, lo2 = rng.uniform(-2.0, 2.0, 2)
        width = rng.uniform(0.3, 1.5)
        cfg = pc.classify_config([lo1, lo1 + width, lo2, lo2 + width])
        if cfg.regime != "generic":
            continue
        a = cfg.as_array()
        for c_star in pc.bifurcation_speeds(m, cfg).admissible():
            exp = lb.local_expansion(m, cfg, c_star)
            rule = ("supercritical" if c_star > a[exp.nearest_component]
                    else "subcritical")
            assert exp.pitchfork == rule
        found += 1


def test_nearest_component_tie_break(sym_cfg):
    # 0 is equidistant from all four interfaces; lower plus wins
    assert lb.nearest_component_index(sym_cfg, 0.0) == 0
    suc = pc.classify_config([0.0, 1.0, 1.0, 2.0])
    assert lb.nearest_component_index(suc, 1.0 + np.sqrt(3.0)) == 3
    # tie between upper plus (k=2) and lower minus (k=1): smaller k wins
    assert lb.nearest_component_index(suc, 1.0) == 2


def test_predictor_zero_and_shift_partner(sym_expansion):
    c0, state0 = lb.predictor(sym_expansion, 0.0, count=4)
    assert c0 == sym_expansion.c_star
    assert state0.max_abs() == 0.0

    cp, sp_state = lb.predictor(sym_expansion, 0.2, count=4)
    cm, sm_state = lb.predictor(sym_expansion, -0.2, count=4)
    assert cp == cm
    mirrored = sp_state.shifted(np.pi / sym_expansion.m)
    assert np.array_equal(mirrored.as_vector(), sm_state.as_vector())


def test_predictor_residual_quadratic_order(sym_expansion, sym_cfg):
    svals = np.array([1e-2, 1e-3, 1e-4])
    sups = []
    for s in svals:
        c, state = lb.predictor(sym_expansion, float(s), count=8)
        sups.append(np.max(np.abs(st.residual_vector(sym_cfg, c, state))))
    slope = np.polyfit(np.log(svals), np.log(sups), 1)[0]
    assert slope >= 1.9


def test_local_expansion_json(sym_expansion):
    obj = sym_expansion.to_json()
    assert obj["pitchfork"] == "supercritical"
    assert obj["nearest_component"] == "plus2"
    assert len(obj["kernel_vec"]) == 4
    assert obj["speed_curvature"] == pytest.approx(CURVATURE_SYM_M1, rel=1e-10)
