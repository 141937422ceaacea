import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from open_boson import DomainError, StabilityError, SystemParams, summarize
from open_boson import fokker_planck as fp

from helpers import temp_for


def params_for(n_s, gamma=1.0, **kw):
    t = temp_for(n_s)
    return SystemParams(temp_e=t, temp_c=t, gamma_e=gamma / 2, gamma_c=gamma / 2, **kw)


def test_gaussian_long_time_peak():
    p = SystemParams()
    n_s = summarize(p).n_s
    assert fp.gaussian_x(p, 2.0, 0.0, 60.0) == pytest.approx((math.pi * n_s) ** -0.5, rel=1e-12)


@pytest.mark.parametrize("t", [0.05, 0.7, 3.0])
def test_gaussian_normalized(t):
    p = SystemParams(gamma_e=0.6, gamma_c=1.7)
    st_ = fp.gaussian_state(p, 1.5, t)
    assert abs(st_.norm_check - 1.0) < 1e-10
    x = np.linspace(st_.center - 15 * math.sqrt(st_.variance_param), st_.center + 15 * math.sqrt(st_.variance_param), 20001)
    assert np.trapezoid(fp.gaussian_x(p, 1.5, x, t), x) == pytest.approx(1.0, abs=1e-10)


def test_gaussian_worked_example():
    p = params_for(2.0, gamma=1.0)
    state = fp.gaussian_state(p, 1.0, math.log(4.0))
    assert state.center == pytest.approx(0.5, rel=1e-12)
    assert state.variance_param == pytest.approx(0.75, rel=1e-12)
    assert fp.gaussian_x(p, 1.0, 0.5, math.log(4.0)) == pytest.approx(1 / math.sqrt(2 * math.pi * 0.75), rel=1e-12)


def test_gaussian_rejects_non_positive_time():
    with pytest.raises(DomainError):
        fp.gaussian_x(SystemParams(), 0.0, 0.0, 0.0)
    assert fp.gaussian_y is fp.gaussian_x


def test_gaussian_from_reduces_to_point_source():
    p = SystemParams()
    x = np.linspace(-3, 3, 7)
    assert np.allclose(fp.gaussian_from(p, 0.4, x, 0.8, 0.0), fp.gaussian_x(p, 0.4, x, 0.8), rtol=0, atol=1e-15)
    wide = fp.gaussian_from(p, 0.4, x, 0.8, 1e-12)
    assert np.allclose(wide, fp.gaussian_x(p, 0.4, x, 0.8), atol=1e-9)


def test_p_position_relation_and_moment():
    p = SystemParams(mass=2.0, omega_s=1.5)
    scale = math.sqrt(2 * p.hbar / (p.mass * p.omega_s))
    q = np.linspace(-10, 10, 40001)
    dens = fp.p_position(p, 1.2, q, 0.9)
    assert np.allclose(dens, fp.gaussian_x(p, 1.2 / scale, q / scale, 0.9) / scale, rtol=1e-14)
    assert np.trapezoid(dens, q) == pytest.approx(1.0, abs=1e-10)
    center, var = fp.propagated_moments(p, 1.2 / scale, 0.9)
    assert np.trapezoid(q * q * dens, q) == pytest.approx(scale ** 2 * (var + center ** 2), rel=1e-9)


def test_p_position_delta_limit():
    p = SystemParams()
    q = np.linspace(-1, 3, 400001)
    dens = fp.p_position(p, 1.0, q, 1e-7)
    assert q[np.argmax(dens)] == pytest.approx(1.0, abs=1e-4)
    assert np.trapezoid(np.abs(q - 1.0) * dens, q) < 1e-3


def test_p_momentum_normalization_and_variance():
    p = SystemParams(mass=0.5, omega_s=2.0)
    n_s = summarize(p).n_s
    x = np.linspace(-40, 40, 80001)
    dens = fp.p_momentum(p, 0.3, x, 50.0)
    assert np.trapezoid(dens, x) == pytest.approx(1.0, abs=1e-10)
    assert np.trapezoid(x * x * dens, x) == pytest.approx(p.hbar * p.mass * p.omega_s * n_s, rel=1e-9)


def test_steady_p_examples():
    p = params_for(1.0)
    assert fp.steady_p(p, 0.0) == pytest.approx(1 / math.pi, rel=1e-14)
    r = np.linspace(0, 1, 200001)
    assert np.trapezoid(fp.steady_p(p, r * r) * 2 * math.pi * r, r) == pytest.approx(1 - math.exp(-1), abs=1e-9)


def test_steady_p_second_moment():
    p = SystemParams()
    n_s = summarize(p).n_s
    r = np.linspace(0, 30 * math.sqrt(n_s), 400001)
    moment = np.trapezoid(r * r * fp.steady_p(p, r * r) * 2 * math.pi * r, r)
    assert moment == pytest.approx(n_s, abs=1e-8)


def test_steady_p_factorizes():
    p = SystemParams()
    xs = np.linspace(-3, 3, 13)
    xx, yy = np.meshgrid(xs, xs)
    prod = fp.gaussian_x(p, 1.0, xx, 80.0) * fp.gaussian_y(p, -0.5, yy, 80.0)
    assert np.allclose(prod, fp.steady_p(p, xx ** 2 + yy ** 2), rtol=1e-12, atol=0)


def test_steady_p_domain():
    with pytest.raises(DomainError):
        fp.steady_p(SystemParams(), -1.0)


def steady_grid(p, n_points=1024):
    lo, hi = fp.auto_grid(p, 0.0, n_points)
    x = np.linspace(lo, hi, n_points)
    return fp.GridDistribution(lo, hi, fp.gaussian_x(p, 0.0, x, 80.0))


def test_solver_fixed_point():
    p = SystemParams()
    init = steady_grid(p)
    out = fp.solve_fp(p, init, 2.0)
    assert out.l1_distance(init.values) < 1e-4


def test_solver_from_narrow_initial():
    p = SystemParams()
    out = fp.solve_fp(p, fp.narrow_initial(p, 1.0), 1.0)
    assert out.l1_distance(fp.gaussian_x(p, 1.0, out.x, 1.0)) < 1e-3
    assert abs(out.mass() - 1.0) < 1e-6


def test_solver_second_order():
    p = SystemParams()
    var0 = fp.NARROW_FRACTION * summarize(p).n_s
    errs = []
    for n in (1024, 2048):
        out = fp.solve_fp(p, fp.narrow_initial(p, 1.0, n), 1.0)
        errs.append(out.l1_distance(fp.gaussian_from(p, 1.0, out.x, 1.0, var0)))
    assert 3.2 <= errs[0] / errs[1] <= 4.8


def test_solver_zero_time_identity():
    p = SystemParams()
    init = steady_grid(p, 256)
    out = fp.solve_fp(p, init, 0.0)
    assert np.array_equal(out.values[1:-1], init.values[1:-1])


def test_solver_guards():
    p = SystemParams()
    init = steady_grid(p, 512)
    with pytest.raises(StabilityError) as info:
        fp.solve_fp(p, init, 1.0, dt=1.0)
    assert info.value.proposed_dt == pytest.approx(fp.max_stable_dt(p, init.dx))
    bad = fp.GridDistribution(init.x_min, init.x_max, 2 * init.values)
    with pytest.raises(DomainError):
        fp.solve_fp(p, bad, 1.0)
    with pytest.raises(DomainError):
        fp.narrow_initial(p, 1.0, 64)


def test_grid_csv(tmp_path):
    p = SystemParams()
    grid = steady_grid(p, 64)
    path = tmp_path / "fp.csv"
    grid.to_csv(path, 1.5, p)
    lines = path.read_text().splitlines()
    assert lines[:3] == ["# t=1.5", f"# params={p.digest()}", "x,value"]
    assert len(lines) == 3 + 64


def test_entropic_force_examples():
    p = SystemParams()
    s = summarize(p)
    decay = math.exp(-p.gamma * 0.8)
    assert fp.entropic_force(p, 2.0 * math.sqrt(decay), 2.0, 0.8) == pytest.approx(0.0, abs=1e-15)
    k = fp.steady_force_constant(p)
    assert k == pytest.approx(p.mass * p.omega_s * p.k_b * s.temp_sys / (p.hbar * s.n_s), rel=1e-14)
    assert fp.entropic_force(p, 0.7, 1.0, 60.0) == pytest.approx(-k * 0.7, rel=1e-12)


def test_entropic_force_is_log_gradient():
    p = SystemParams(gamma_e=0.4, gamma_c=1.3, temp_e=3.0, temp_c=1.5, mass=1.7)
    T = summarize(p).temp_sys
    q = np.linspace(-2, 2, 9)
    h = 1e-5
    grad = (np.log(fp.p_position(p, 0.6, q + h, 1.1)) - np.log(fp.p_position(p, 0.6, q - h, 1.1))) / (2 * h)
    assert np.allclose(fp.entropic_force(p, q, 0.6, 1.1), p.k_b * T * grad, rtol=1e-8, atol=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(0.05, 10))
def test_entropic_force_collinear(q1, q2, q3, t):
    p = SystemParams()
    f1, f2, f3 = (fp.entropic_force(p, q, 0.3, t) for q in (q1, q2, q3))
    cross = (f2 - f1) * (q3 - q1) - (f3 - f1) * (q2 - q1)
    scale = max(abs(f1), abs(f2), abs(f3), 1.0) * 10.0
    assert abs(cross) <= 1e-12 * scale


def test_hooke_limit():
    base = SystemParams(temp_e=2.0, temp_c=1.0)
    dev = fp.hooke_limit_check(base, [1, 10, 100, 1000])
    assert all(a > b for a, b in zip(dev, dev[1:]))
    assert dev[-1] < 1e-3
    assert dev[-1] == pytest.approx(3.334e-4, rel=1e-3)
    with pytest.raises(DomainError):
        fp.hooke_limit_check(base, [0.5])


def test_high_temperature_flag():
    assert not fp.high_temperature(SystemParams())
    assert fp.high_temperature(SystemParams(temp_e=200.0, temp_c=100.0))
