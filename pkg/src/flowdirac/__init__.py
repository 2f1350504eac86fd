"""Clifford algebra, symbolic spinor calculus, model spectra and eigenvalue bounds for Riemannian flows."""

from .clifford import CliffordRep, SkewForm, build_rep, omega_eigendecomposition, two_form_action, vector_action
from .estimates import (
    BoundReport, EnergyMomentum, SpinorProfile, deform_constants, deformed_eigenvalue, emomentum_3d,
    emomentum_sasakian, equality_report, friedrich_bound, harmonic_t, hijazi_bound_3d, remark_bound,
    upper_bound_3d, upper_bound_sasakian,
)
from .models import (
    FlowData, ModelInstance, SpectrumSlice, admits_tks, catalog, dirac_square_spectrum, lambda1,
    model_from_json, scal_from_flow, torus_fourier_oracle,
)
from .spinor_calculus import SpinorExpr, covariant_derivative, dirac, normalize, verify_dirac, verify_dirac_square

__version__ = "0.1.0"
