"""Upper and lower bounds for the first eigenvalue of ``D^2`` and their comparison.

Upper bounds come from a transversal Killing spinor; lower bounds are the
Friedrich and Hijazi inequalities.  Everything is exact for rational input.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt, sqrt

import sympy

from . import _exact as ex
from .clifford import SkewForm, block_spinor, build_rep, omega_eigendecomposition, two_form_matrix
from .models import (
    LAMBDA1_ONLY, FlowData, UnsupportedModel, admits_tks, capability, default_flow, lambda1,
    model_scal,
)
from .quantities import DEFAULT_RTOL, Quantity, format_number, is_exact, q_equal, q_sub

SIGMA0 = "sigma0"
SIGMAM = "sigmam"
MIXTURE = "mixture"


@dataclass(frozen=True)
class SpinorProfile:
    """How a spinor in ``Sigma_0 + Sigma_m`` splits: squared-norm weights ``w0 + wm = 1``."""

    branch: str = SIGMA0
    w0: object = None
    wm: object = None

    def __post_init__(self):
        if self.branch == SIGMA0:
            w = (Fraction(1), Fraction(0))
        elif self.branch == SIGMAM:
            w = (Fraction(0), Fraction(1))
        elif self.branch == MIXTURE:
            if self.w0 is None or self.wm is None:
                raise ValueError("mixture needs both weights")
            w = (self.w0, self.wm)
            if w[0] < 0 or w[1] < 0:
                raise ValueError("weights must be nonnegative")
            total = w[0] + w[1]
            if not total > 0:
                raise ValueError("weights must not both vanish")
            if is_exact(total):
                w = (Fraction(w[0]) / total, Fraction(w[1]) / total)
            else:
                w = (w[0] / total, w[1] / total)
        else:
            raise ValueError(f"unknown branch {self.branch!r}")
        object.__setattr__(self, "w0", w[0])
        object.__setattr__(self, "wm", w[1])

    @classmethod
    def mixture(cls, w0, wm):
        return cls(MIXTURE, w0, wm)

    @property
    def pure(self):
        return self.w0 == 0 or self.wm == 0

    def to_json(self):
        return {"branch": self.branch, "w0": format_number(self.w0), "wm": format_number(self.wm)}


def _sign(m):
    return 1 if m % 2 == 0 else -1


# --------------------------------------------------------------------------
# upper bounds


def upper_bound_general(alpha, beta, n, omega_sq, xi_omega):
    """Raw upper bound for a minimal flow and a unit-norm transversal Killing spinor.

    ``omega_sq`` and ``xi_omega`` are the volume averages of ``|Omega.psi|^2``
    and ``Re<xi.Omega.psi, psi>``; they must be supplied by the caller.
    """
    return alpha * alpha + n * n * beta * beta + Fraction(1, 4) * omega_sq + alpha * xi_omega


def upper_bound_sasakian(alpha, beta, m, profile=SpinorProfile()):
    if m < 1:
        raise ValueError("m must be at least 1")
    if alpha * beta != 0 and not (not is_exact(alpha * beta) and abs(alpha * beta) < 1e-12):
        raise ValueError("Sasakian bound needs alpha*beta = 0")
    term = alpha * (-m * profile.w0 + _sign(m) * m * profile.wm)
    return alpha * alpha + 4 * m * m * beta * beta + Fraction(m * m, 4) + term


def remark_bound(alpha, beta, m):
    if m < 1:
        raise ValueError("m must be at least 1")
    best = max((alpha + _sign(r) * Fraction(2 * r - m, 2)) ** 2 for r in range(m + 1))
    return 4 * m * m * beta * beta + best


def upper_bound_3d(alpha, beta, b, weights=None):
    """``4 beta^2 + avg (b/2 - alpha)^2``; ``b`` may be sampled values with volume ``weights``."""
    if weights is None:
        return 4 * beta * beta + (Fraction(1, 2) * b - alpha) ** 2 if is_exact(b) else 4 * beta * beta + (b / 2 - alpha) ** 2
    if len(weights) != len(b):
        raise ValueError("need one weight per sample of b")
    if any(w < 0 for w in weights):
        raise ValueError("negative volume weight")
    total = sum(weights)
    if not total > 0:
        raise ValueError("weights must not all vanish")
    avg = sum(w * (Fraction(1, 2) * x - alpha) ** 2 if is_exact(x) else w * (x / 2 - alpha) ** 2
              for w, x in zip(weights, b))
    return 4 * beta * beta + avg / total


def profile_averages(m, profile, variant="standard"):
    """``(avg |Omega.psi|^2, avg Re<xi.Omega.psi, psi>)`` for a unit spinor with this profile.

    Computed through an explicit representation; the cross terms between the
    two blocks are checked to vanish.
    """
    rep = build_rep(2 * m + 1, variant)
    spaces = omega_eigendecomposition(rep, SkewForm.complex_structure(m))
    om = two_form_matrix(rep, SkewForm.complex_structure(m))
    xi_om = rep.gammas[0] @ om
    blocks = [block_spinor(spaces[0]), block_spinor(spaces[m])]
    sq, xo = [], []
    for p in blocks:
        norm = ex.to_fraction(ex.inner(p, p))
        sq.append(ex.to_fraction(ex.inner(om @ p, om @ p)) / norm)
        xo.append(_real_part(ex.inner(xi_om @ p, p)) / norm)
    p0, pm = blocks
    if ex.inner(xi_om @ p0, pm).x or ex.inner(om @ p0, om @ pm).x:
        raise ArithmeticError("blocks are not orthogonal")
    w = (profile.w0, profile.wm)
    return w[0] * sq[0] + w[1] * sq[1], w[0] * xo[0] + w[1] * xo[1]


# --------------------------------------------------------------------------
# lower bounds


def friedrich_bound(n_plus_1, inf_scal):
    if n_plus_1 < 2:
        raise ValueError("dimension must be at least 2")
    n = n_plus_1 - 1
    return Fraction(n_plus_1, 4 * n) * inf_scal


def scal_3d(alpha, beta, b):
    return 2 * (4 * beta * beta - b * b - 4 * alpha * b)


@dataclass(frozen=True)
class EnergyMomentum:
    """Bilinear form ``E(X, Y)`` in the frame ``(xi, e_1, ..., e_n)``: ``matrix[a][c] = E(e_a, e_c)``."""

    matrix: tuple
    frobenius_sq: object
    status: str = "solution"
    certificate: dict = field(default_factory=dict)

    @classmethod
    def from_rows(cls, rows, status="solution", certificate=None):
        rows = tuple(tuple(r) for r in rows)
        fro = sum(x * x for r in rows for x in r)
        return cls(rows, fro, status, certificate or {})

    def to_json(self):
        return {"matrix": [[format_number(x) for x in r] for r in self.matrix],
                "frobenius_sq": format_number(self.frobenius_sq), "status": self.status,
                "certificate": self.certificate}


def emomentum_3d(alpha, beta, b):
    half_b = Fraction(1, 2) * b if is_exact(b) else b / 2
    return EnergyMomentum.from_rows([
        [-(half_b + alpha), 0, 0],
        [0, half_b, -beta],
        [0, beta, half_b],
    ])


def _derivative_matrices(rep, alpha, beta, h):
    """Operators ``psi -> nabla_{e_a} psi`` from the transversal Killing spinor rules (kappa = 0)."""
    n = rep.n
    g = rep.gammas
    om = two_form_matrix(rep, h)
    out = [(g[0].scale(alpha) + om.scale(Fraction(1, 2)))]
    for j in range(1, n + 1):
        hj = ex.GMatrix.zeros(rep.spinor_dim, rep.spinor_dim)
        for k, c in h.image(j).items():
            hj = hj + g[k].scale(c)
        out.append((g[0] @ g[j]).scale(beta) + (g[0] @ hj).scale(Fraction(1, 2)))
    return out


def _real_part(z):
    return Fraction(int(z.x.numerator), int(z.x.denominator))


def emomentum_from_spinor(rep, alpha, beta, h, psi):
    """``E(X, Y) = Re<Y . nabla_X psi, psi> / |psi|^2`` evaluated in a concrete representation."""
    nab = _derivative_matrices(rep, alpha, beta, h)
    norm = ex.to_fraction(ex.inner(psi, psi))
    rows = []
    for a in range(rep.dim):
        d = nab[a] @ psi
        rows.append([_real_part(ex.inner(rep.gammas[c] @ d, psi)) / norm for c in range(rep.dim)])
    return EnergyMomentum.from_rows(rows)


def emomentum_3d_oracle(alpha, beta, b, psi=None, variant="standard"):
    """:func:`emomentum_3d` recomputed from the spinor rules in an explicit representation."""
    rep = build_rep(3, variant)
    psi = ex.GMatrix.from_entries([1, 0]) if psi is None else ex.as_gmatrix(psi)
    return emomentum_from_spinor(rep, alpha, beta, SkewForm.complex_structure(1, b), psi)


def hijazi_bound_3d(alpha, beta, b):
    return Fraction(1, 4) * scal_3d(alpha, beta, b) + emomentum_3d(alpha, beta, b).frobenius_sq


def _rat(q):
    return sympy.Rational(int(q.numerator), int(q.denominator))


def _solve_vector(rep, psi, target):
    """Real vector ``V`` with ``V . psi = target`` exactly, or ``None``; plus the two ranks."""
    cols = [rep.gammas[a] @ psi for a in range(rep.dim)]
    rows = []
    for i in range(rep.spinor_dim):
        for part in ("x", "y"):
            row = [_rat(getattr(c.entry(i), part)) for c in cols]
            row.append(_rat(getattr(target.entry(i), part)))
            rows.append(row)
    aug = sympy.Matrix(rows)
    a = aug[:, :-1]
    ra, raug = a.rank(), aug.rank()
    if ra != raug:
        return None, ra, raug
    sol, params = a.gauss_jordan_solve(aug[:, -1])
    sol = sol.subs({p: 0 for p in params})
    return [Fraction(int(v.p), int(v.q)) for v in sol], ra, raug


def _sasakian_spinor(rep, m, profile):
    spaces = omega_eigendecomposition(rep, SkewForm.complex_structure(m))
    p0, pm = block_spinor(spaces[0]), block_spinor(spaces[m])
    n0, nm = ex.to_fraction(ex.inner(p0, p0)), ex.to_fraction(ex.inner(pm, pm))
    # squared-norm weights w0, wm need sqrt(w/n); pick coefficients whose squares are rational multiples
    c0, cm = _sqrt_exact(profile.w0 / n0), _sqrt_exact(profile.wm / nm)
    if c0 is None or cm is None:
        # keep the mixture genuine but exact: the equation is linear, so only which blocks occur matters
        c0 = Fraction(1) if profile.w0 else Fraction(0)
        cm = Fraction(1) if profile.wm else Fraction(0)
    return p0.scale(c0) + pm.scale(cm)


def _sqrt_exact(x):
    x = Fraction(x)
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def emomentum_sasakian(alpha, m, profile=SpinorProfile(), variant="standard"):
    """Energy-momentum tensor of an ``(alpha, 0)``-transversal Killing spinor on a Sasakian manifold.

    The equation ``nabla_X psi = -E(X) . psi`` is solved exactly for each frame
    vector ``X`` in a concrete representation.  When it has a solution the
    tensor is returned (and compared with ``diag(-(alpha + m/2), 1/2, ...)``);
    otherwise the status is ``"not-a-solution"`` with the rank witness.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if not is_exact(alpha):
        raise ValueError("alpha must be rational here")
    alpha = Fraction(alpha)
    rep = build_rep(2 * m + 1, variant)
    h = SkewForm.complex_structure(m)
    psi = _sasakian_spinor(rep, m, profile)
    nab = _derivative_matrices(rep, alpha, 0, h)
    rows, witness = [], {}
    for a in range(rep.dim):
        sol, ra, raug = _solve_vector(rep, psi, -(nab[a] @ psi))
        if sol is None:
            witness = {"direction": a, "rank": ra, "augmented_rank": raug,
                       "reason": "nabla psi is not a real Clifford multiple of psi"}
            return EnergyMomentum((), None, "not-a-solution", witness)
        rows.append(sol)
    expected = sasakian_formula(alpha, m, SIGMAM if profile.w0 == 0 else SIGMA0)
    if tuple(tuple(r) for r in rows) != expected.matrix:
        raise ArithmeticError("solved tensor disagrees with the closed form")
    return EnergyMomentum.from_rows(rows, certificate={"residual": 0, "rank": rep.dim})


def sasakian_formula(alpha, m, branch=SIGMA0):
    """Closed form ``diag(-(alpha + s m/2), s/2, ..., s/2)``, ``s = -1`` only on ``Sigma_m`` for even ``m``."""
    s = -1 if (branch == SIGMAM and m % 2 == 0) else 1
    size = 2 * m + 1
    rows = [[Fraction(0)] * size for _ in range(size)]
    rows[0][0] = -(alpha + s * Fraction(m, 2))
    for j in range(1, size):
        rows[j][j] = Fraction(s, 2)
    return EnergyMomentum.from_rows(rows)


def hijazi_bound_sasakian(alpha, m, scal, branch=SIGMA0):
    return Fraction(1, 4) * scal + sasakian_formula(alpha, m, branch).frobenius_sq


# --------------------------------------------------------------------------
# deformations


def deform_constants(alpha, beta, t):
    if not t > 0:
        raise ValueError("t must be positive")
    if is_exact(t) and is_exact(alpha):
        a = Fraction(alpha) / Fraction(t)
    else:
        a = alpha / t
    root = _sqrt_exact(t) if is_exact(t) else None
    if beta == 0:
        b = Fraction(0) if is_exact(beta) else 0.0
    elif root is not None and is_exact(beta):
        b = Fraction(beta) / root
    else:
        b = beta / sqrt(t)
    return a, b


def deformed_eigenvalue(m, alpha, t, branch=SIGMA0):
    a, _ = deform_constants(alpha, 0, t)
    half = Fraction(m, 2)
    if branch == SIGMA0:
        return (half - a) ** 2
    if branch == SIGMAM:
        return (half + _sign(m) * a) ** 2
    raise ValueError(f"unknown branch {branch!r}")


def harmonic_t(m, alpha, branch=SIGMA0):
    """The deformation parameter making the branch harmonic, or ``None``."""
    if branch == SIGMA0:
        s = 1
    elif branch == SIGMAM:
        s = -_sign(m)  # (-1)^{m+1}
    else:
        raise ValueError(f"unknown branch {branch!r}")
    if not s * alpha > 0:
        return None
    return Fraction(2 * s, m) * alpha if is_exact(alpha) else 2 * s * alpha / m


# --------------------------------------------------------------------------
# report


@dataclass
class BoundReport:
    model: str
    lambda1: Quantity
    upper: dict
    lower: dict
    scal: object
    flags: dict
    tolerance: float
    gaps: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    flow: dict = field(default_factory=dict)

    def to_json(self):
        def q(x):
            return None if x is None else Quantity(x).to_json()

        return {
            "model": self.model,
            "lambda1": self.lambda1.to_json(),
            "upper": {k: q(v) for k, v in self.upper.items()},
            "lower": {k: q(v) for k, v in self.lower.items()},
            "scal": None if self.scal is None else format_number(self.scal),
            "flags": self.flags,
            "tolerance": self.tolerance,
            "gaps": {k: q_sub(v, self.lambda1).to_json() if v is not None else None
                     for k, v in self.gaps.items()},
            "flow": self.flow,
            "notes": self.notes,
        }


def equality_report(model, flow=None, profile=None, tolerance=DEFAULT_RTOL):
    """Compare every applicable bound with ``lambda_1`` for a catalog model."""
    if capability(model) not in ("explicit", LAMBDA1_ONLY):
        raise UnsupportedModel(f"{model.label}: lambda_1 is not available")
    lam = lambda1(model).value
    flow = flow or default_flow(model)
    if not isinstance(flow, FlowData):
        raise TypeError("flow must be FlowData")
    profile = profile or SpinorProfile()
    notes = []
    upper, lower, flags = {}, {}, {}

    def sharp(x):
        return q_equal(lam, Quantity(x), tolerance)

    if flow.n == 2:
        upper["dim3"] = upper_bound_3d(flow.alpha, flow.beta, flow.b_scalar)
    if flow.sasakian:
        upper["sasakian"] = upper_bound_sasakian(flow.alpha, flow.beta, flow.m, profile)
        upper["remark"] = remark_bound(flow.alpha, flow.beta, flow.m)
    if model.kind in ("Torus", "Bieberbach"):
        tks = admits_tks(model, flow.alpha)
        flags["tks_admissible"] = tks.admits
        if tks.admits is False:
            notes.append("spin structure does not carry the transversal Killing spinor; upper bounds are formal")

    scal = model_scal(model, flow)
    dim = flow.n + 1
    if scal is not None:
        lower["friedrich"] = friedrich_bound(dim, scal)
    attained = any(sharp(v) for k, v in upper.items() if k in ("dim3", "sasakian"))
    if attained:
        if flow.n == 2:
            lower["hijazi"] = hijazi_bound_3d(flow.alpha, flow.beta, flow.b_scalar)
        elif flow.sasakian and scal is not None and (flow.m % 2 or profile.pure):
            lower["hijazi"] = hijazi_bound_sasakian(flow.alpha, flow.m, scal,
                                                       SIGMAM if profile.w0 == 0 else SIGMA0)
    if "hijazi" not in lower:
        lower["hijazi"] = None
        notes.append("Hijazi bound with the transversal Killing spinor needs it to be an eigenspinor; not evaluated")

    for k, v in upper.items():
        flags[k] = sharp(v)
    for k, v in lower.items():
        if v is None:
            flags[k] = None
        elif k == "friedrich" and not v > 0:
            # a nonpositive bound says nothing about the spectrum
            flags[k] = False
            flags["friedrich_informative"] = False
        else:
            flags[k] = sharp(v)
    if flow.n == 2:
        flags["dim3_equals_hijazi"] = (upper["dim3"] == hijazi_bound_3d(flow.alpha, flow.beta, flow.b_scalar)
                                       if is_exact(flow.alpha) and is_exact(flow.beta) and is_exact(flow.b_scalar)
                                       else q_equal(upper["dim3"], hijazi_bound_3d(flow.alpha, flow.beta, flow.b_scalar),
                                                    tolerance))
    gaps = {k: v for k, v in upper.items()}
    return BoundReport(model.label, lam, upper, lower, scal, flags, tolerance, gaps, notes, flow.to_json())
