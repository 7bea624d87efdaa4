import numpy as np
import pytest

from llgfd import lemmas


def test_derive_matches_quadratic_form():
    coeffs = lemmas.derive_telescope_coeffs(seed=3)
    assert np.abs(lemmas._matching_residual(coeffs.alpha)).max() <= 1e-10


def test_fixture_loads_and_revalidates():
    coeffs = lemmas.load_telescope_coeffs()
    assert coeffs.alpha.shape == (10,)
    assert coeffs.alpha[0] != 0.0
    assert np.abs(lemmas._matching_residual(coeffs.alpha)).max() <= 1e-12


def test_scalar_identity_brute_force():
    a = lemmas.load_telescope_coeffs().alpha
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(1000):
        e3, e2, e1, e0 = rng.standard_normal(4)
        lhs = (11 / 6 * e3 - 3 * e2 + 1.5 * e1 - e0 / 3) * (2 * e3 - e2)
        rhs = (
            (a[0] * e3) ** 2
            - (a[0] * e2) ** 2
            + (a[1] * e3 + a[2] * e2) ** 2
            - (a[1] * e2 + a[2] * e1) ** 2
            + (a[3] * e3 + a[4] * e2 + a[5] * e1) ** 2
            - (a[3] * e2 + a[4] * e1 + a[5] * e0) ** 2
            + (a[6] * e3 + a[7] * e2 + a[8] * e1 + a[9] * e0) ** 2
        )
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30))
    assert worst <= 1e-10


def test_identity_annihilates_constants():
    # BDF3 weights sum against (2 - 1): both sides must vanish on constants
    a = lemmas.load_telescope_coeffs().alpha
    e = 1.23456
    rhs = (
        (a[0] * e) ** 2
        - (a[0] * e) ** 2
        + (a[1] * e + a[2] * e) ** 2
        - (a[1] * e + a[2] * e) ** 2
        + (a[3] * e + a[4] * e + a[5] * e) ** 2
        - (a[3] * e + a[4] * e + a[5] * e) ** 2
        + (a[6] * e + a[7] * e + a[8] * e + a[9] * e) ** 2
    )
    assert abs(rhs) < 1e-12  # so a7+a8+a9+a10 ~ 0


def test_identity_scale_invariant():
    coeffs = lemmas.load_telescope_coeffs()
    r1 = lemmas.check_telescope(coeffs, trials=5, seed=99)
    assert r1.passed
    # both sides are homogeneous quadratics: violations stay relative under
    # scaling, checked implicitly by using unit-scale random fields above and
    # the brute-force scalar check; here just assert the report structure
    d = r1.as_dict()
    assert d["lemma"] == "telescope-identity-1d"
    assert d["trials"] == 5


def test_telescoping_sum_over_time():
    """Summing the identity over n collapses the three difference groups."""
    a = lemmas.load_telescope_coeffs().alpha
    rng = np.random.default_rng(7)
    e = rng.standard_normal(20)

    def g1(x):
        return (a[0] * x) ** 2

    def g2(x, y):
        return (a[1] * x + a[2] * y) ** 2

    def g3(x, y, z):
        return (a[3] * x + a[4] * y + a[5] * z) ** 2

    def g4(x, y, z, w):
        return (a[6] * x + a[7] * y + a[8] * z + a[9] * w) ** 2

    lhs_sum = 0.0
    pos_sum = 0.0
    for n in range(3, 20):
        e3, e2, e1, e0 = e[n], e[n - 1], e[n - 2], e[n - 3]
        lhs_sum += (11 / 6 * e3 - 3 * e2 + 1.5 * e1 - e0 / 3) * (2 * e3 - e2)
        pos_sum += g4(e3, e2, e1, e0)
    boundary = (
        g1(e[19]) - g1(e[2])
        + g2(e[19], e[18]) - g2(e[2], e[1])
        + g3(e[19], e[18], e[17]) - g3(e[2], e[1], e[0])
    )
    rhs_sum = boundary + pos_sum
    assert abs(lhs_sum - rhs_sum) / max(abs(lhs_sum), abs(rhs_sum)) <= 1e-9


@pytest.mark.parametrize("dim,n", [(1, 16), (3, 8)])
def test_telescope_on_fields(dim, n):
    coeffs = lemmas.load_telescope_coeffs()
    rep = lemmas.check_telescope(coeffs, trials=20, dim=dim, n=n)
    assert rep.passed
    assert rep.max_violation <= 1e-10


@pytest.mark.parametrize("dim,n", [(1, 16), (3, 8)])
def test_operator_lemma_reports(dim, n):
    reports = lemmas.check_operator_lemmas(trials=25, dim=dim, n=n)
    by_name = {r.lemma: r for r in reports}
    assert len(by_name) == 7
    for r in reports:
        assert r.passed, f"{r.lemma}: {r.max_violation}"


def test_projection_stability_report():
    rep = lemmas.check_projection_stability(trials=200)
    assert rep.passed
    assert rep.max_violation == 0.0


def test_boundary_extrapolation_orders():
    reports = lemmas.check_boundary_extrapolation()
    assert all(r.passed for r in reports)
    got = {r.lemma: r for r in reports}
    assert "observed order 4.9" in got["boundary-extrapolation-a"].detail or \
           "observed order 5.0" in got["boundary-extrapolation-a"].detail
    assert "observed order 2.9" in got["boundary-extrapolation-b"].detail or \
           "observed order 3.0" in got["boundary-extrapolation-b"].detail


def test_boundary_extrapolation_constant_exact():
    assert lemmas.mirror_extrapolation_error(lambda z: 3.7 + 0.0 * z, 32) == 0.0


def test_probe_wall_derivatives():
    # numeric wall derivatives of the probes confirm the intended structure
    d = 1e-3

    def wall_derivs(f):
        z0 = 0.0
        d1 = (f(z0 + d) - f(z0 - d)) / (2 * d)
        d3 = (f(z0 + 2 * d) - 2 * f(z0 + d) + 2 * f(z0 - d) - f(z0 - 2 * d)) / (2 * d**3)
        return d1, d3

    # the d3 estimator carries its own O(d^2 f^(5)) truncation ~ 9e-3 here
    d1, d3 = wall_derivs(lemmas._probe_a)
    assert abs(d1) < 1e-6 and abs(d3) < 0.05
    # probe b: d1 estimator truncation d^2 f3/6 ~ 3e-5 with f3 = 6 pi^3
    d1, d3 = wall_derivs(lemmas._probe_b)
    assert abs(d1) < 1e-4 and abs(d3) > 1.0
