import json
import random
from fractions import Fraction
from math import pi

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowdirac.models import (
    EXPLICIT, LAMBDA1_ONLY, NONE, FlowData, ModelConfigError, ModelInstance, UnsupportedModel, admits_tks,
    capability, catalog, dirac_square_spectrum, lambda1, model_from_json, scal_from_flow, torus_fourier_oracle,
)
from flowdirac.quantities import PI2, UNIT

CUBE = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def bieberbach(i, d1=0, H=1, L=1, S=1, T=0, unit="pi", spin=None):
    p = {"i": i, "H": H, "L": L, "length_unit": unit}
    if i == 2:
        p.update(S=S, T=T)
    return ModelInstance("Bieberbach", p, spin or (d1, 0, 0))


def test_catalog_contents():
    entries = {e.name: e for e in catalog()}
    assert len(entries) >= 9
    assert entries["heisenberg"].lambda1 == Fraction(1, 4)
    assert entries["sphere-quotient"].lambda1 == Fraction(9, 4)
    assert entries["psl2-quotient"].capability == NONE
    kinds = {e.model.kind for e in entries.values()}
    assert kinds >= {"Torus", "Bieberbach", "Heisenberg", "ProductS1S2", "RoundSphere", "SphereQuotient",
                     "DeformedSphere", "PSL2Quotient"}
    assert {e.model.params.get("i") for e in entries.values() if e.model.kind == "Bieberbach"} == {2, 3, 4, 5}
    for e in entries.values():
        assert capability(e.model) == e.capability
        json.dumps(e.to_json())


def test_json_round_trip():
    m = bieberbach(2, 1, Fraction(3, 2), 2, Fraction(1, 3), Fraction(-7, 5))
    doc = json.loads(json.dumps(m.to_json()))
    assert model_from_json(doc) == m
    t = ModelInstance("Torus", {"basis": [[Fraction(1, 2), 0, 0], [0, 1.5, 0], [0, 0, 1]]}, (1, 0, 1))
    assert model_from_json(json.dumps(t.to_json())) == t


@pytest.mark.parametrize("doc", [
    {"kind": "Torus", "params": {"basis": CUBE}, "spin": [0, 0, 0], "extra": 1},
    {"kind": "Torus", "params": {"basis": CUBE, "colour": 1}},
    {"kind": "Torus", "params": {}},
    {"kind": "Bieberbach", "params": {"i": 6, "H": 1, "L": 1}},
    {"kind": "Bieberbach", "params": {"i": 3, "H": 1, "L": -1}},
    {"kind": "Torus", "params": {"basis": CUBE}, "spin": [0, 2, 0]},
    {"kind": "Sphere"},
    "not json",
])
def test_bad_json_rejected(doc):
    with pytest.raises(ModelConfigError):
        model_from_json(doc if isinstance(doc, str) else json.dumps(doc))


def test_torus_examples():
    alpha = 1.7
    m = ModelInstance("Torus", {"basis": [[pi / alpha, 0, 0], [0, 1, 0], [0, 0, 1]]}, (1, 0, 0))
    lam = lambda1(m)
    assert abs(float(lam.value) - alpha ** 2) < 1e-12 * alpha ** 2
    assert lam.indices == (("torus", (0, 0, 0)),) or ("torus", (-1, 0, 0)) in lam.indices
    assert lambda1(ModelInstance("Torus", {"basis": CUBE})).value.coeff == 0
    sl = torus_fourier_oracle(CUBE, (0, 0, 0), 8 * pi ** 2 + 1e-6)
    assert sl.flat_values()[:8] == [0] + [4] * 6 + [8]
    assert sl.unit == PI2
    assert torus_fourier_oracle(CUBE, (1, 1, 1), 50).values[0] == 3


def test_degenerate_torus():
    with pytest.raises(ModelConfigError):
        torus_fourier_oracle([[1, 0, 0], [2, 0, 0], [0, 0, 1]], (0, 0, 0), 10)


def test_bieberbach_examples():
    assert lambda1(bieberbach(2, 0, H=2, unit="1")).value.coeff == Fraction(1, 4)
    assert lambda1(bieberbach(3, 1, H=1, L=1)).value.coeff == 4
    assert lambda1(bieberbach(3, 1, H=1, L=2)).value.coeff == Fraction(4, 3)
    assert lambda1(bieberbach(4, 1, H=1, L=1)).value.coeff == 5
    assert lambda1(bieberbach(5, 1, H=1, L=1)).value.coeff == Fraction(31, 3)
    assert lambda1(bieberbach(5, 1, H=1, L=3)).value.coeff == Fraction(1) + Fraction(28, 27)


def test_g2_lowest_is_mu_family():
    lam = lambda1(bieberbach(2, 0, H=1, L=1, S=1))
    assert lam.value.coeff == 1
    assert lam.indices == (("mu", (0,)),)
    # first family at (k, l, m) = (0, 0, 1) is strictly larger
    assert dirac_square_spectrum(bieberbach(2, 0), 6).values[1] == 5


def test_index_sets_respected():
    sl = dirac_square_spectrum(bieberbach(3, 0, H=1, L=1), 60)
    for ix in sl.indices:
        for fam, (k, *rest) in ((f, t) for f, t in ix):
            if fam == "F1":
                l, m = rest
                assert l >= 1 and 0 <= m <= l - 1
    sl = dirac_square_spectrum(bieberbach(2, 0, H=1, L=1), 60)
    for ix in sl.indices:
        for fam, t in ix:
            if fam == "F1":
                assert t[2] >= 1 or (t[2] == 0 and t[1] >= 1)


@pytest.mark.parametrize("i", [2, 3, 4, 5])
def test_delta1_zero_float_mode(i):
    rng = random.Random(i)
    for _ in range(15):
        H, L, S, T = (rng.uniform(0.1, 10) for _ in range(4))
        m = bieberbach(i, 0, H, L, S, T, unit="1")
        v = lambda1(m).value
        assert v.unit == PI2
        assert abs(v.coeff - 1 / H ** 2) <= 1e-12 / H ** 2


def test_unsupported_spin_structures():
    with pytest.raises(UnsupportedModel):
        dirac_square_spectrum(bieberbach(4, spin=(0, 1, 0)), 10)
    with pytest.raises(UnsupportedModel):
        lambda1(bieberbach(2, spin=(0, 0, 1)))
    with pytest.raises(UnsupportedModel):
        dirac_square_spectrum(ModelInstance("Heisenberg", {}), 10)
    with pytest.raises(UnsupportedModel):
        lambda1(ModelInstance("PSL2Quotient", {}))


def test_empty_slice_when_cutoff_small():
    sl = dirac_square_spectrum(bieberbach(3, 1), Fraction(1, 10))
    assert sl.values == [] and "families" in sl.certificate


def test_cutoff_must_be_positive():
    with pytest.raises(ValueError):
        dirac_square_spectrum(bieberbach(3), 0)


@pytest.mark.parametrize("model", [
    bieberbach(2, 1, Fraction(3, 2), Fraction(2, 3), Fraction(5, 4), Fraction(1, 3)),
    bieberbach(3, 1, Fraction(1, 2), 2),
    bieberbach(4, 0, 1, Fraction(3, 2)),
    bieberbach(5, 1, 2, 1),
    ModelInstance("Torus", {"basis": [[1, Fraction(1, 3), 0], [0, 2, 1], [Fraction(1, 2), 0, 1]],
                            "length_unit": "pi"}, (1, 0, 1)),
])
def test_doubling_cutoff_finds_nothing_new(model):
    small = dirac_square_spectrum(model, 20)
    big = dirac_square_spectrum(model, 40)
    below = [(v, sorted(ix)) for v, ix in zip(big.values, big.indices) if v <= 20]
    assert below == [(v, sorted(ix)) for v, ix in zip(small.values, small.indices)]


@pytest.mark.parametrize("c", [Fraction(2), Fraction(1, 3)])
def test_scaling(c):
    a = bieberbach(3, 1, Fraction(3, 2), Fraction(4, 5))
    b = bieberbach(3, 1, c * Fraction(3, 2), c * Fraction(4, 5))
    va = dirac_square_spectrum(a, 30).values
    vb = dirac_square_spectrum(b, 30 / c ** 2).values
    assert [v / c ** 2 for v in va] == vb


@pytest.mark.parametrize("model", [bieberbach(i, d) for i in (2, 3, 4, 5) for d in (0, 1)])
def test_lambda1_is_head_of_spectrum(model):
    lam = lambda1(model).value
    assert dirac_square_spectrum(model, lam.coeff * 3).values[0] == lam.coeff


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(-2, 2, max_denominator=5), min_size=9, max_size=9),
       st.tuples(*[st.integers(0, 1)] * 3))
def test_oracle_matches_formula(entries, spin):
    basis = [entries[0:3], entries[3:6], entries[6:9]]
    basis = [[x + (3 if i == j else 0) for j, x in enumerate(row)] for i, row in enumerate(basis)]
    m = ModelInstance("Torus", {"basis": basis, "length_unit": "pi"}, spin)
    assert dirac_square_spectrum(m, 30).flat_values() == torus_fourier_oracle(basis, spin, 30, "pi").flat_values()


def test_admits_tks_examples():
    assert admits_tks(bieberbach(2, 0, H=1), 1).admits  # H = pi/alpha
    assert admits_tks(bieberbach(2, 0, H=Fraction(1, 2)), 2).admits
    assert admits_tks(bieberbach(5, 1, H=-5), 1).admits
    assert not admits_tks(bieberbach(5, 1, H=1), 1).admits
    assert not admits_tks(bieberbach(4, spin=(0, 1, 0)), 1).admits
    assert not admits_tks(bieberbach(2, spin=(1, 1, 0)), 1).admits
    assert admits_tks(bieberbach(3, 1, H=4), 1).admits
    assert admits_tks(bieberbach(4, 1, H=5, unit="1"), pi).admits  # float path
    out = admits_tks(bieberbach(3, 0), 0)
    assert not out.applicable and out.admits is None
    t = ModelInstance("Torus", {"basis": [[1, 0, 0], [0, 2, 0], [0, 0, 1]], "length_unit": "pi"}, (1, 0, 0))
    assert admits_tks(t, 1).admits
    assert not admits_tks(ModelInstance("Torus", t.params, (1, 0, 1)), 1).admits  # a3 is orthogonal to xi
    assert not admits_tks(ModelInstance("Torus", {"basis": CUBE, "length_unit": "pi"}, (0, 0, 0)), 1).admits
    with pytest.raises(UnsupportedModel):
        admits_tks(ModelInstance("Heisenberg", {}), 1)


def test_scal_from_flow():
    assert scal_from_flow(-1, 0, 1) == 6
    assert scal_from_flow(0, 0, 1) == -2
    assert scal_from_flow(0, Fraction(3, 2), 0) == 8 * Fraction(9, 4)


def test_flow_data_validation():
    assert FlowData(2, 1, 0, Fraction(1, 2)).b_scalar == Fraction(1, 2)
    with pytest.raises(ModelConfigError):
        FlowData(2, 1, 1, 1, sasakian=True)
    with pytest.raises(ModelConfigError):
        FlowData(4, 1, 0, 1)
    assert capability(ModelInstance("RoundSphere", {"m": 2})) == LAMBDA1_ONLY
    assert capability(bieberbach(3)) == EXPLICIT
    assert lambda1(ModelInstance("RoundSphere", {"m": 3})).value.unit == UNIT
