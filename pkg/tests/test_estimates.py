from fractions import Fraction
from math import isclose

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from flowdirac.estimates import (
    MIXTURE, SIGMA0, SIGMAM, SpinorProfile, deform_constants, deformed_eigenvalue, emomentum_3d,
    emomentum_3d_oracle, emomentum_sasakian, equality_report, friedrich_bound, harmonic_t, hijazi_bound_3d,
    profile_averages, remark_bound, sasakian_formula, scal_3d, upper_bound_3d, upper_bound_general,
    upper_bound_sasakian,
)
from flowdirac.models import ModelInstance, UnsupportedModel, catalog_lookup

F = Fraction
rat = st.fractions(min_value=-6, max_value=6, max_denominator=40)


def test_sasakian_bound_examples():
    for m in range(1, 5):
        a = F(-(m + 1), 2)
        assert upper_bound_sasakian(a, 0, m) == F((2 * m + 1) ** 2, 4)
        assert upper_bound_sasakian(0, 0, m, SpinorProfile.mixture(1, 1)) == F(m * m, 4)
    assert upper_bound_sasakian(0, 0, 1) == F(1, 4)
    with pytest.raises(ValueError):
        upper_bound_sasakian(1, 1, 2)


def test_remark_bound_examples():
    assert remark_bound(0, 0, 1) == F(1, 4)
    assert remark_bound(F(-3, 2), 0, 2) == F(25, 4)
    assert remark_bound(0, F(1, 2), 1) == F(5, 4)


def test_upper_bound_3d_examples():
    assert upper_bound_3d(-1, 0, 1) == F(9, 4)
    assert upper_bound_3d(0, F(1, 2), 0) == upper_bound_3d(0, F(-1, 2), 0) == 1
    assert upper_bound_3d(0, 0, 1) == F(1, 4)
    # sampled b with volume weights
    assert upper_bound_3d(0, 0, [1, 3], [1, 1]) == (F(1, 4) + F(9, 4)) / 2
    with pytest.raises(ValueError):
        upper_bound_3d(0, 0, [1], [-1])


def test_friedrich_examples():
    assert friedrich_bound(3, -2) == F(-3, 4)
    assert friedrich_bound(3, 6) == F(9, 4)
    assert friedrich_bound(7, 0) == 0
    with pytest.raises(ValueError):
        friedrich_bound(1, 1)


def test_emomentum_3d_examples():
    e = emomentum_3d(0, F(2, 3), 0)
    assert e.matrix[1][2] == -e.matrix[2][1] and e.matrix[0][0] == 0
    assert emomentum_3d(F(3), 0, 0).frobenius_sq == 9
    assert emomentum_3d(-1, 0, 1).frobenius_sq == F(3, 4)


def test_hijazi_examples():
    assert hijazi_bound_3d(-1, 0, 1) == F(9, 4)
    assert hijazi_bound_3d(0, 0, 1) == F(1, 4)
    assert hijazi_bound_3d(0, F(1, 2), 0) == 1


def test_hijazi_equals_upper_symbolically():
    a, b, c = sympy.symbols("alpha beta b")
    assert sympy.expand(hijazi_bound_3d(a, b, c) - upper_bound_3d(a, b, c)) == 0


@settings(max_examples=200, deadline=None)
@given(rat, rat, rat)
def test_hijazi_equals_upper_exact(a, b, c):
    assert hijazi_bound_3d(a, b, c) == upper_bound_3d(a, b, c)


@settings(max_examples=100, deadline=None)
@given(rat, rat, rat)
def test_emomentum_3d_against_spinor_oracle(a, b, c):
    assert emomentum_3d_oracle(a, b, c).matrix == emomentum_3d(a, b, c).matrix


def test_emomentum_3d_oracle_rep_independent(variant):
    for psi in ([1, 0], [0, 1], [2, 1 + 1j]):
        assert emomentum_3d_oracle(F(1, 3), F(-2, 5), F(7, 2), psi, variant).matrix == \
            emomentum_3d(F(1, 3), F(-2, 5), F(7, 2)).matrix


@settings(max_examples=100, deadline=None)
@given(rat, rat)
def test_friedrich_below_hijazi(x, b):
    for a, beta in ((x, 0), (0, x)):
        assert friedrich_bound(3, scal_3d(a, beta, b)) <= hijazi_bound_3d(a, beta, b)


@settings(max_examples=100, deadline=None)
@given(rat, st.integers(1, 5), st.fractions(0, 1, max_denominator=20))
def test_sasakian_bound_properties(a, m, w):
    prof = SpinorProfile.mixture(w, 1 - w)
    assert upper_bound_sasakian(a, 0, m) == (F(m, 2) - a) ** 2 == deformed_eigenvalue(m, a, 1)
    assert remark_bound(a, 0, m) >= upper_bound_sasakian(a, 0, m, prof)
    assert upper_bound_sasakian(0, a, m) == 4 * m * m * a * a + F(m * m, 4)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_sasakian_bound_matches_general_evaluator(m, variant):
    for prof in (SpinorProfile(), SpinorProfile(SIGMAM), SpinorProfile.mixture(1, 3)):
        om_sq, xo = profile_averages(m, prof, variant)
        a = F(5, 7)
        assert upper_bound_general(a, 0, 2 * m, om_sq, xo) == upper_bound_sasakian(a, 0, m, prof)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_emomentum_sasakian(m, variant):
    for a in (F(0), F(-1), F(3, 2)):
        for prof in (SpinorProfile(), SpinorProfile(SIGMAM), SpinorProfile.mixture(1, 1)):
            e = emomentum_sasakian(a, m, prof, variant)
            if m % 2 == 0 and not prof.pure:
                assert e.status == "not-a-solution"
                assert e.certificate["augmented_rank"] == e.certificate["rank"] + 1
            else:
                assert e.status == "solution"
                branch = SIGMAM if prof.w0 == 0 else SIGMA0
                assert e.matrix == sasakian_formula(a, m, branch).matrix


def test_emomentum_sasakian_examples():
    e = emomentum_sasakian(-1, 1)
    assert e.matrix == ((F(1, 2), 0, 0), (0, F(1, 2), 0), (0, 0, F(1, 2)))
    e = emomentum_sasakian(F(2, 3), 2)
    assert [e.matrix[i][i] for i in range(5)] == [-(F(2, 3) + 1)] + [F(1, 2)] * 4


def test_profile_validation():
    assert SpinorProfile.mixture(2, 6).w0 == F(1, 4)
    assert SpinorProfile(MIXTURE, 0, 1).pure
    with pytest.raises(ValueError):
        SpinorProfile.mixture(-1, 2)
    with pytest.raises(ValueError):
        SpinorProfile("sigma7")


def test_deform_constants():
    assert deform_constants(F(3), F(2), 1) == (3, 2)
    assert deform_constants(F(3), F(2), F(4, 9)) == (F(27, 4), 3)
    m, a = 3, F(5, 2)
    assert deform_constants(a, 0, 2 * a / m) == (F(m, 2), 0)
    a2, b2 = deform_constants(1.0, 1.0, 2.0)
    assert isclose(a2, 0.5) and isclose(b2, 2 ** -0.5)
    with pytest.raises(ValueError):
        deform_constants(1, 1, 0)


def test_deformed_eigenvalue():
    for m in range(1, 5):
        assert deformed_eigenvalue(m, F(-(m + 1), 2), F(3)) == (F(m, 2) + F(m + 1, 6)) ** 2
        assert deformed_eigenvalue(m, 0, F(7)) == F(m * m, 4)
    assert deformed_eigenvalue(2, F(3), harmonic_t(2, F(3))) == 0
    assert isclose(deformed_eigenvalue(2, 1.0, 1e9), 1.0, rel_tol=1e-8)


def test_harmonic_t_examples():
    assert harmonic_t(2, F(3)) == 3
    assert harmonic_t(2, F(3), SIGMAM) is None
    assert harmonic_t(1, 0) is None
    assert harmonic_t(1, F(-1), SIGMAM) is None
    assert harmonic_t(2, F(-1), SIGMAM) == 1


@settings(max_examples=100, deadline=None)
@given(rat, st.integers(1, 6), st.sampled_from([SIGMA0, SIGMAM]))
def test_harmonic_t_is_positive_and_harmonic(a, m, branch):
    t = harmonic_t(m, a, branch)
    if t is not None:
        assert t > 0
        assert deformed_eigenvalue(m, a, t, branch) == 0


def test_report_heisenberg():
    r = equality_report(catalog_lookup("heisenberg").model)
    assert r.lambda1.coeff == F(1, 4)
    assert r.lower == {"friedrich": F(-3, 4), "hijazi": F(1, 4)}
    assert r.flags["dim3"] and r.flags["hijazi"] and not r.flags["friedrich"]


def test_report_torus_trivial_spin():
    r = equality_report(catalog_lookup("torus-trivial").model)
    assert r.lambda1.coeff == 0 and r.upper["dim3"] == 1
    assert not any(v for k, v in r.flags.items() if k in ("dim3", "friedrich", "hijazi"))
    assert r.to_json()["gaps"]["dim3"]["exact"] == "1"


def test_report_sphere_quotient():
    r = equality_report(catalog_lookup("sphere-quotient").model)
    assert r.lambda1.coeff == F(9, 4)
    assert all(r.flags[k] for k in ("dim3", "hijazi", "friedrich"))


def test_report_requires_lambda1():
    with pytest.raises(UnsupportedModel):
        equality_report(ModelInstance("DeformedSphere", {"m": 1, "t": 2}))


def test_report_float_tolerance():
    from math import pi

    alpha = 1.3
    m = ModelInstance("Torus", {"basis": [[pi / alpha, 0, 0], [0, 1, 0], [0, 0, 1]], "alpha": alpha}, (1, 0, 0))
    r = equality_report(m)
    assert r.flags["dim3"] and r.flags["tks_admissible"]
