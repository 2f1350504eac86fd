"""Model manifolds: catalog, explicit Dirac spectra and spin-structure checks.

Flat models (tori and the Bieberbach quotients ``G_i \\ R^3``) have explicit
spectra of ``D^2``.  Each spectral family is a sum of nonnegative squares of
affine forms in integer indices, so every index tuple whose value stays below a
cutoff satisfies one-variable inequalities that pin each index to a finite
range.  :func:`dirac_square_spectrum` enumerates exactly those ranges and
returns the ranges as a completeness certificate.

Lengths (``H, L, S, T`` or torus basis entries) may be given in units of 1 or
of ``pi`` (``length_unit``); eigenvalues are then reported in units of ``pi^2``
or 1 respectively, exactly when the parameters are rational.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd, pi, sqrt

import numpy as np
import sympy

from .clifford import SkewForm
from .quantities import PI2, UNIT, Quantity, format_number, is_exact, parse_number

KINDS = (
    "Torus", "Bieberbach", "Heisenberg", "ProductS1S2", "RoundSphere",
    "SphereQuotient", "DeformedSphere", "PSL2Quotient",
)

EXPLICIT = "explicit"
LAMBDA1_ONLY = "lambda1-only"
NONE = "none"

CONGRUENCE_RTOL = 1e-9


class ModelConfigError(ValueError):
    """Malformed model description."""


class UnsupportedModel(Exception):
    """The model lacks the requested capability (spectrum, lambda_1, ...)."""


_PARAMS = {
    "Torus": {"basis", "length_unit", "xi", "alpha"},
    "Bieberbach": {"i", "H", "L", "S", "T", "length_unit", "alpha"},
    "Heisenberg": {"r"},
    "ProductS1S2": {"beta"},
    "RoundSphere": {"m"},
    "SphereQuotient": {"gamma"},
    "DeformedSphere": {"m", "t"},
    "PSL2Quotient": {"alpha", "gamma"},
}

_REQUIRED = {
    "Torus": {"basis"},
    "Bieberbach": {"i", "H", "L"},
    "RoundSphere": {"m"},
    "DeformedSphere": {"m", "t"},
}


@dataclass(frozen=True)
class FlowData:
    """Algebraic data of a homogeneous minimal flow carrying a transversal Killing spinor."""

    n: int
    alpha: object
    beta: object = 0
    b: object = None
    h: SkewForm = None
    sasakian: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ModelConfigError("codimension n must be positive")
        if self.h is None and self.b is not None:
            if self.n != 2:
                raise ModelConfigError("scalar O'Neill data b only makes sense for n = 2")
            object.__setattr__(self, "h", SkewForm.complex_structure(1, self.b))
        if self.h is None:
            object.__setattr__(self, "h", SkewForm.zero(self.n))
        if self.h.n != self.n:
            raise ModelConfigError("h has the wrong size")
        if self.sasakian:
            if self.n % 2 or not self.h.square_is_minus_identity():
                raise ModelConfigError("Sasakian flow needs h^2 = -Id on an even-rank Q")
            if self.alpha * self.beta != 0:
                raise ModelConfigError("Sasakian flows with a transversal Killing spinor have alpha*beta = 0")

    @property
    def m(self):
        return self.n // 2 if self.n % 2 == 0 else None

    @property
    def b_scalar(self):
        if self.n != 2:
            return None
        return self.h.omega(1, 2)

    def to_json(self):
        out = {"n": self.n, "alpha": format_number(self.alpha), "beta": format_number(self.beta),
               "sasakian": self.sasakian}
        if self.n == 2:
            out["b"] = format_number(self.b_scalar)
        return out


@dataclass(frozen=True)
class ModelInstance:
    kind: str
    params: dict = field(default_factory=dict)
    spin: tuple = (0, 0, 0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModelConfigError(f"unknown model kind {self.kind!r}")
        unknown = set(self.params) - _PARAMS[self.kind]
        if unknown:
            raise ModelConfigError(f"unknown parameters for {self.kind}: {sorted(unknown)}")
        missing = _REQUIRED.get(self.kind, set()) - set(self.params)
        if missing:
            raise ModelConfigError(f"missing parameters for {self.kind}: {sorted(missing)}")
        spin = tuple(self.spin)
        if len(spin) != 3 or any(d not in (0, 1) for d in spin):
            raise ModelConfigError("spin structure must be three values in {0, 1}")
        object.__setattr__(self, "spin", spin)
        unit = self.params.get("length_unit", "1")
        if unit not in ("1", "pi"):
            raise ModelConfigError("length_unit must be '1' or 'pi'")
        if self.kind == "Bieberbach":
            if self.params["i"] not in (2, 3, 4, 5):
                raise ModelConfigError("Bieberbach case i must be 2, 3, 4 or 5")
            if self.params["H"] == 0:
                raise ModelConfigError("H must be nonzero")
            for key in ("L", "S"):
                if key in self.params and not self.params[key] > 0:
                    raise ModelConfigError(f"{key} must be positive")
            if self.params["i"] == 2 and "S" not in self.params:
                raise ModelConfigError("case i=2 needs S (and optionally T)")
        if self.kind == "Torus":
            basis = self.params["basis"]
            if len(basis) != 3 or any(len(row) != 3 for row in basis):
                raise ModelConfigError("torus basis must be 3 vectors in R^3")
        if self.kind in ("RoundSphere", "DeformedSphere"):
            if not isinstance(self.params["m"], int) or self.params["m"] < 1:
                raise ModelConfigError("m must be a positive integer")
        if self.kind == "DeformedSphere" and not self.params["t"] > 0:
            raise ModelConfigError("t must be positive")

    @property
    def length_unit(self):
        return self.params.get("length_unit", "1")

    @property
    def eigen_unit(self):
        return PI2 if self.length_unit == "1" else UNIT

    @property
    def label(self):
        if self.kind == "Bieberbach":
            return f"G{self.params['i']}"
        if self.kind in ("RoundSphere", "DeformedSphere"):
            return f"{self.kind}(m={self.params['m']})"
        return self.kind

    def to_json(self):
        params = {}
        for k, v in self.params.items():
            if k == "basis":
                params[k] = [[format_number(x) for x in row] for row in v]
            elif k == "xi":
                params[k] = [format_number(x) for x in v]
            elif isinstance(v, str):
                params[k] = v
            else:
                params[k] = format_number(v)
        return {"kind": self.kind, "params": params, "spin": list(self.spin)}


def model_from_json(doc):
    """Parse ``{"kind": ..., "params": {...}, "spin": [d1, d2, d3]}``; unknown fields are rejected."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ModelConfigError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelConfigError("model description must be a JSON object")
    unknown = set(doc) - {"kind", "params", "spin"}
    if unknown:
        raise ModelConfigError(f"unknown fields: {sorted(unknown)}")
    if "kind" not in doc:
        raise ModelConfigError("missing 'kind'")
    raw = doc.get("params", {})
    if not isinstance(raw, dict):
        raise ModelConfigError("'params' must be an object")
    params = {}
    try:
        for k, v in raw.items():
            if k == "basis":
                params[k] = [[parse_number(x) for x in row] for row in v]
            elif k == "xi":
                params[k] = [parse_number(x) for x in v]
            elif k in ("length_unit", "gamma"):
                params[k] = str(v)
            elif k in ("i", "m", "r"):
                if not isinstance(v, int) or isinstance(v, bool):
                    raise ModelConfigError(f"{k} must be an integer")
                params[k] = v
            else:
                params[k] = parse_number(v)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ModelConfigError):
            raise
        raise ModelConfigError(str(exc)) from exc
    spin = doc.get("spin", [0, 0, 0])
    if not isinstance(spin, list):
        raise ModelConfigError("'spin' must be a list")
    return ModelInstance(doc["kind"], params, tuple(spin))


# --------------------------------------------------------------------------
# exact one-variable range finding


def _sq_range(weight, a, c, budget):
    """Integers x with ``weight * (a*x + c)^2 <= budget`` (weight > 0, a != 0)."""
    if budget < 0:
        return []
    radius = sqrt(float(budget) / float(weight)) / abs(float(a))
    center = -float(c) / float(a)
    lo = floor(center - radius) - 1
    hi = ceil(center + radius) + 1
    return [x for x in range(lo, hi + 1) if weight * (a * x + c) ** 2 <= budget]


@dataclass
class SpectrumSlice:
    """Eigenvalues of ``D^2`` below a cutoff, with attaining indices.

    ``values`` are coefficients in ``unit`` (exact when the metric is
    rational).  ``indices[j]`` lists ``(family, index tuple)`` pairs attaining
    ``values[j]``; their count is the lattice multiplicity, not a claim about
    the multiplicity of the eigenspace.
    """

    model: str
    unit: str
    cutoff: object
    values: list
    indices: list
    certificate: dict

    def quantities(self):
        return [Quantity(v, self.unit) for v in self.values]

    def floats(self):
        return [float(q) for q in self.quantities()]

    def multiplicities(self):
        return [len(ix) for ix in self.indices]

    def flat_values(self):
        """Values repeated by lattice multiplicity (a sorted multiset)."""
        out = []
        for v, ix in zip(self.values, self.indices):
            out.extend([v] * len(ix))
        return out

    def head(self, count=1):
        return self.quantities()[:count]

    def to_json(self, count=None):
        rows = []
        for v, ix in list(zip(self.values, self.indices))[:count]:
            q = Quantity(v, self.unit)
            rows.append({**q.to_json(), "attained_by": [{"family": f, "index": list(t)} for f, t in ix]})
        return {
            "model": self.model,
            "unit": self.unit,
            "cutoff": format_number(self.cutoff),
            "values": rows,
            "certificate": self.certificate,
        }


def _group(pairs, exact):
    """Sort ``(value, index)`` pairs and merge equal values."""
    if exact:
        buckets = {}
        for v, ix in pairs:
            buckets.setdefault(v, []).append(ix)
        values = sorted(buckets)
        return values, [sorted(buckets[v]) for v in values]
    pairs = sorted(pairs, key=lambda p: (p[0], p[1]))
    values, indices = [], []
    for v, ix in pairs:
        if values and abs(v - values[-1]) <= 1e-12 * max(1.0, abs(v)):
            indices[-1].append(ix)
        else:
            values.append(v)
            indices.append([ix])
    return values, indices


# --------------------------------------------------------------------------
# Bieberbach families


def _bieberbach_families(model):
    p = model.params
    i = p["i"]
    d1, d2, d3 = model.spin
    if i == 2 and (d2 or d3):
        raise UnsupportedModel("G2 spectrum is only known for delta2 = delta3 = 0")
    if i == 4 and d2:
        raise UnsupportedModel("G4 spectrum is only known for delta2 = 0")
    if i in (3, 4, 5) and d3:
        raise UnsupportedModel(f"G{i} has no third spin parameter; use delta3 = 0")
    if i in (3, 5) and d2:
        raise UnsupportedModel(f"G{i} has no second spin parameter; use delta2 = 0")
    H, L = p["H"], p["L"]
    wH = 4 / H ** 2 if not is_exact(H) else Fraction(4) / Fraction(H) ** 2
    wL = 4 / L ** 2 if not is_exact(L) else Fraction(4) / Fraction(L) ** 2
    half = Fraction(1, 2)
    if i == 2:
        S, T = p["S"], p.get("T", 0)
        wS = 4 / S ** 2 if not is_exact(S) else Fraction(4) / Fraction(S) ** 2
        slope = T / L if not (is_exact(T) and is_exact(L)) else Fraction(T) / Fraction(L)
        k_shift = half
        m_term = (lambda l: (wS, 1, -slope * l))
        in_index_set = (lambda l, m: m >= 1 or (m == 0 and l >= 1))
        l_pred = (lambda l: True)
        mu = (2, half + d1)
    elif i == 3:
        k_shift = half if d1 == 0 else 0
        m_term = (lambda l: (wL / 3, 2, -l))  # 4/(3L^2) (l - 2m)^2 = 4/(3L^2) (2m - l)^2
        in_index_set = (lambda l, m: 0 <= m <= l - 1)
        l_pred = (lambda l: l >= 1)
        mu = (4, half) if d1 == 0 else (3, 2)
    elif i == 4:
        k_shift = half
        m_term = (lambda l: (wL, 1, -l))
        in_index_set = (lambda l, m: 0 <= m <= 2 * l - 1)
        l_pred = (lambda l: l >= 1)
        mu = (4, half + 2 * d1)
    else:
        k_shift = half
        m_term = (lambda l: (wL / 3, 1, -2 * l))
        in_index_set = (lambda l, m: 0 <= m <= l - 1)
        l_pred = (lambda l: l >= 1)
        mu = (6, half + 3 * d1)

    def first_family(budget, cert):
        out = []
        ks = _sq_range(wH, 1, k_shift, budget)
        cert["k"] = [min(ks), max(ks)] if ks else []
        l_seen = []
        examined = 0
        for k in ks:
            vk = wH * (k + k_shift) ** 2
            ls = [l for l in _sq_range(wL, 1, 0, budget - vk) if l_pred(l)]
            l_seen.extend(ls)
            for l in ls:
                vl = vk + wL * l * l
                w, a, c = m_term(l)
                for m in _sq_range(w, a, c, budget - vl):
                    examined += 1
                    if not in_index_set(l, m):
                        continue
                    val = vl + w * (a * m + c) ** 2
                    if val <= budget:
                        out.append((val, ("F1", (k, l, m))))
        cert["l"] = [min(l_seen), max(l_seen)] if l_seen else []
        cert["m"] = "for each (k, l): integers m with the m-summand below the remaining budget"
        cert["examined"] = examined
        return out

    def mu_family(budget, cert):
        a, c = mu
        mus = _sq_range(wH, a, c, budget)
        cert["mu"] = [min(mus), max(mus)] if mus else []
        return [(wH * (a * u + c) ** 2, ("mu", (u,))) for u in mus]

    def seed():
        a, c = mu
        u = round(-float(c) / a)
        return min(wH * (a * x + c) ** 2 for x in (u - 1, u, u + 1))

    return {"F1": first_family, "mu": mu_family}, seed


# --------------------------------------------------------------------------
# tori


def _exact_matrix(rows):
    return all(is_exact(x) for row in rows for x in row)


def _inverse(rows):
    if _exact_matrix(rows):
        m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else sympy.Integer(x)
                           for x in row] for row in rows])
        if m.det() == 0:
            raise ModelConfigError("degenerate lattice basis")
        inv = m.inv()
        return [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(3)] for i in range(3)]
    a = np.array(rows, dtype=float)
    if abs(np.linalg.det(a)) < 1e-14 * max(1.0, np.abs(a).max()) ** 3:
        raise ModelConfigError("degenerate lattice basis")
    return np.linalg.inv(a).tolist()


def _gram(rows):
    return [[sum(rows[i][k] * rows[j][k] for k in range(3)) for j in range(3)] for i in range(3)]


def _udu(q):
    """``q = U^T diag(d) U`` with ``U`` unit upper triangular (``q`` symmetric positive definite)."""
    n = len(q)
    d = [0] * n
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for k in range(n):
        d[k] = q[k][k] - sum(u[i][k] ** 2 * d[i] for i in range(k))
        if not d[k] > 0:
            raise ModelConfigError("degenerate lattice basis")
        for j in range(k + 1, n):
            u[k][j] = (q[k][j] - sum(u[i][k] * d[i] * u[i][j] for i in range(k))) / d[k]
    return d, u


def _common_denominator(rows):
    den = 1
    for row in rows:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    return den, [[int(x * den) for x in row] for row in rows]


def _torus_formula_pairs(basis, spin, budget, cert):
    """Values ``4 u^T G^{-1} u`` with ``u = k + delta/2`` and ``G`` the Gram matrix.

    Writing ``4 G^{-1} = U^T D U`` turns the form into
    ``sum_k D_k (u_k + sum_{j>k} U_kj u_j)^2``; the last coordinate is bounded
    by its own square, then each earlier one given the later ones.  Ranges are
    found in floating point with slack (so they can only grow) and every
    candidate is then tested exactly.
    """
    exact = _exact_matrix(basis)
    ginv = _inverse(_gram(basis))
    q = [[4 * x for x in row] for row in ginv]
    d, up = _udu([[float(x) for x in row] for row in q])
    sh = [x / 2 for x in spin]
    fb = float(budget) * (1 + 1e-9) + 1e-12
    if exact:
        den, qn = _common_denominator([[Fraction(x) for x in row] for row in q])
        limit = Fraction(budget) * 4 * den  # v = 2u is integral: v^T qn v <= 4 den budget

    def value(v):
        if exact:
            num = sum(v[i] * qn[i][j] * v[j] for i in range(3) for j in range(3))
            return num <= limit, Fraction(num, 4 * den)
        u = [x / 2 for x in v]
        val = sum(u[i] * q[i][j] * u[j] for i in range(3) for j in range(3))
        return val <= budget, val

    out = []
    examined = 0
    k2_range = _sq_range(d[2], 1, sh[2], fb)
    cert["k3"] = [min(k2_range), max(k2_range)] if k2_range else []
    cert["k1, k2"] = "for each later index: integers inside the completed-square bound"
    for k2 in k2_range:
        u2 = k2 + sh[2]
        r2 = fb - d[2] * u2 * u2
        for k1 in _sq_range(d[1], 1, sh[1] + up[1][2] * u2, r2 * (1 + 1e-9) + 1e-12):
            u1 = k1 + sh[1]
            t1 = u1 + up[1][2] * u2
            r1 = r2 - d[1] * t1 * t1
            for k0 in _sq_range(d[0], 1, sh[0] + up[0][1] * u1 + up[0][2] * u2, r1 * (1 + 1e-9) + 1e-12):
                examined += 1
                keep, val = value((2 * k0 + spin[0], 2 * k1 + spin[1], 2 * k2 + spin[2]))
                if keep:
                    out.append((val, ("torus", (k0, k1, k2))))
    cert["examined"] = examined
    return out


def torus_fourier_oracle(basis, spin, cutoff, length_unit="1"):
    """Independent enumeration of ``4 pi^2 |b* + (1/2) sum delta_j b_j*|^2`` over the dual lattice.

    Candidates come from a floating-point Fincke-Pohst search on the QR
    factor of the explicit dual basis; each candidate is then re-evaluated
    from the dual vectors themselves (exactly, for rational bases) and
    filtered against the cutoff.
    """
    basis = [list(row) for row in basis]
    exact = _exact_matrix(basis)
    dual = _inverse(basis)  # columns are the dual vectors b_j*
    unit_value = pi ** 2 if length_unit == "1" else 1.0
    budget = (Fraction(cutoff) / 1 if is_exact(cutoff) and length_unit == "pi" else None)
    if budget is None:
        budget = float(cutoff) / unit_value
    shift = [Fraction(d, 2) if exact else d / 2 for d in spin]
    v = np.array(dual, dtype=float)
    _, r = np.linalg.qr(v)
    limit = float(budget) / 4.0 * (1 + 1e-9) + 1e-12
    found = []

    def search(level, partial_u, acc):
        # coordinates are fixed from the last one down to the first
        if level < 0:
            found.append(tuple(partial_u))
            return
        centre = 0.0
        for j in range(level + 1, 3):
            centre += r[level, j] * float(partial_u[j] + shift[j])
        rll = r[level, level]
        rem = limit - acc
        if rem < 0:
            return
        span = sqrt(rem) / abs(rll)
        mid = -centre / rll - float(shift[level])
        for k in range(floor(mid - span) - 1, ceil(mid + span) + 2):
            t = rll * (k + float(shift[level])) + centre
            if acc + t * t <= limit:
                partial_u[level] = k
                search(level - 1, partial_u, acc + t * t)
        partial_u[level] = 0

    search(2, [0, 0, 0], 0.0)
    pairs = []
    if exact:
        den, dn = _common_denominator(dual)
    for ks in found:
        v = [2 * ks[j] + spin[j] for j in range(3)]
        if exact:
            # p = dual u = (dn v) / (2 den), value 4|p|^2 = |dn v|^2 / den^2
            p = [sum(dn[i][j] * v[j] for j in range(3)) for i in range(3)]
            val = Fraction(sum(x * x for x in p), den * den)
        else:
            p = [sum(dual[i][j] * v[j] / 2 for j in range(3)) for i in range(3)]
            val = 4 * sum(x * x for x in p)
        if val <= budget:
            pairs.append((val, ("dual", ks)))
    values, indices = _group(pairs, exact)
    unit = PI2 if length_unit == "1" else UNIT
    return SpectrumSlice("Torus(oracle)", unit, cutoff, values, indices,
                         {"method": "Fincke-Pohst on dual basis", "candidates": len(found)})


# --------------------------------------------------------------------------
# public spectral interface


def _cutoff_budget(model, cutoff):
    if not cutoff > 0:
        raise ValueError("cutoff must be positive")
    if model.eigen_unit == UNIT:
        return Fraction(cutoff) if is_exact(cutoff) else float(cutoff)
    return float(cutoff) / pi ** 2


def _enumerate(model, budget):
    cert = {"budget": format_number(budget) if is_exact(budget) else float(budget), "families": {}}
    if model.kind == "Torus":
        fc = {}
        pairs = _torus_formula_pairs(model.params["basis"], model.spin, budget, fc)
        cert["families"]["torus"] = fc
        exact = _exact_matrix(model.params["basis"])
    elif model.kind == "Bieberbach":
        families, _ = _bieberbach_families(model)
        pairs = []
        for name, fam in families.items():
            fc = {}
            pairs.extend(fam(budget, fc))
            cert["families"][name] = fc
        p = model.params
        exact = all(is_exact(p[k]) for k in ("H", "L", "S", "T") if k in p)
    else:
        raise UnsupportedModel(f"{model.kind} has no explicit spectrum")
    cert["argument"] = ("every family is a sum of nonnegative squares; an index tuple below the "
                        "budget has each square below it, which bounds each index to the listed range")
    return _group(pairs, exact), cert


def dirac_square_spectrum(model, cutoff):
    """All eigenvalues of ``D^2`` up to ``cutoff`` (absolute units) with a completeness certificate."""
    budget = _cutoff_budget(model, cutoff)
    (values, indices), cert = _enumerate(model, budget)
    return SpectrumSlice(model.label, model.eigen_unit, cutoff, values, indices, cert)


@dataclass(frozen=True)
class Lambda1:
    value: Quantity
    indices: tuple
    certificate: dict
    source: str


def _seed(model):
    if model.kind == "Torus":
        exact = _exact_matrix(model.params["basis"])
        shift = [Fraction(d, 2) if exact else d / 2 for d in model.spin]
        ginv = _inverse(_gram(model.params["basis"]))
        return 4 * sum(shift[i] * ginv[i][j] * shift[j] for i in range(3) for j in range(3))
    _, seed = _bieberbach_families(model)
    return seed()


def lambda1(model):
    """Smallest eigenvalue of ``D^2``, self-certified for explicit models."""
    cap = capability(model)
    if cap == NONE:
        raise UnsupportedModel(f"{model.label}: lowest eigenvalue not available")
    if cap == LAMBDA1_ONLY:
        entry = _STORED[model.kind](model)
        return Lambda1(Quantity(entry), (), {"stored": True}, "stored")
    bound = _seed(model)
    (values, indices), cert = _enumerate(model, bound)
    cert["seed"] = format_number(bound) if is_exact(bound) else float(bound)
    return Lambda1(Quantity(values[0], model.eigen_unit), tuple(indices[0]), cert, "enumeration")


# --------------------------------------------------------------------------
# stored data for models whose spectrum is only known through its bottom


def _sphere_lambda1(model):
    m = model.params["m"]
    return Fraction((2 * m + 1) ** 2, 4)


_STORED = {
    "ProductS1S2": lambda model: Fraction(1),
    "RoundSphere": _sphere_lambda1,
    "SphereQuotient": lambda model: Fraction(9, 4),
    "Heisenberg": lambda model: Fraction(1, 4),
}


def capability(model):
    if model.kind in ("Torus", "Bieberbach"):
        return EXPLICIT
    if model.kind in _STORED:
        return LAMBDA1_ONLY
    return NONE


def scal_from_flow(alpha, beta, b):
    """Scalar curvature of a minimal 3-dimensional flow: ``2(4 beta^2 - b^2 - 4 alpha b)``."""
    return 2 * (4 * beta * beta - b * b - 4 * alpha * b)


def default_flow(model):
    """Flow data carrying the model's transversal Killing spinor, where known."""
    k, p = model.kind, model.params
    if k in ("Torus", "Bieberbach"):
        if "alpha" not in p:
            raise UnsupportedModel(f"{model.label}: give 'alpha' to fix the transversal Killing spinor")
        return FlowData(2, p["alpha"], 0, 0)
    if k == "Heisenberg":
        return FlowData(2, 0, 0, 1, sasakian=True)
    if k == "ProductS1S2":
        return FlowData(2, 0, p.get("beta", Fraction(1, 2)), 0)
    if k == "SphereQuotient":
        return FlowData(2, -1, 0, 1, sasakian=True)
    if k == "RoundSphere":
        m = p["m"]
        return FlowData(2 * m, Fraction(-(m + 1), 2), 0, h=SkewForm.complex_structure(m), sasakian=True)
    if k == "DeformedSphere":
        m, t = p["m"], p["t"]
        a = Fraction(-(m + 1), 2) / t if is_exact(t) else -(m + 1) / (2 * t)
        return FlowData(2 * m, a, 0, h=SkewForm.complex_structure(m), sasakian=True)
    if k == "PSL2Quotient":
        return FlowData(2, p.get("alpha", 1), 0, 1, sasakian=True)
    raise UnsupportedModel(k)  # pragma: no cover


def model_scal(model, flow=None):
    """Constant scalar curvature of the model (``None`` if unknown)."""
    k = model.kind
    if k in ("Torus", "Bieberbach"):
        return 0
    if k == "RoundSphere":
        m = model.params["m"]
        return 2 * m * (2 * m + 1)
    flow = flow or default_flow(model)
    if flow.n == 2 and k != "DeformedSphere":
        return scal_from_flow(flow.alpha, flow.beta, flow.b_scalar)
    return None


# --------------------------------------------------------------------------
# transversal Killing spinor conditions


@dataclass(frozen=True)
class TKSCheck:
    applicable: bool
    admits: object
    residues: dict
    conditions: tuple


def _is_integer(x):
    if is_exact(x):
        return Fraction(x).denominator == 1
    return abs(x - round(x)) <= CONGRUENCE_RTOL * max(1.0, abs(x))


def _over_pi(length, model, alpha):
    """``length * alpha / pi`` (exact when lengths are in units of pi and inputs rational)."""
    if model.length_unit == "pi":
        if is_exact(length) and is_exact(alpha):
            return Fraction(length) * Fraction(alpha)
        return float(length) * float(alpha)
    return float(length) * float(alpha) / pi


_BIEBERBACH_CONGRUENCE = {2: (2, 4), 3: (3, 6), 4: (4, 8), 5: (6, 12)}


def admits_tks(model, alpha):
    """Spin-structure conditions for an ``(alpha, 0)``-transversal Killing spinor on a flat model."""
    if model.kind not in ("Torus", "Bieberbach"):
        raise UnsupportedModel("conditions are only available for flat models")
    if alpha == 0:
        return TKSCheck(False, None, {}, ("alpha = 0: congruences degenerate",))
    residues, conds = {}, []
    ok = True
    if model.kind == "Torus":
        xi = model.params.get("xi", [1, 0, 0])
        norm2 = sum(x * x for x in xi)
        if not (norm2 == 1 if all(is_exact(x) for x in xi) else abs(norm2 - 1) < 1e-12):
            raise ModelConfigError("flow direction xi must be a unit vector")
        for j, (row, d) in enumerate(zip(model.params["basis"], model.spin), start=1):
            proj = sum(a * x for a, x in zip(row, xi))
            x = _over_pi(proj, model, alpha)
            q = (x - d) / 2
            residues[f"a{j}"] = format_number(q) if is_exact(q) else float(q)
            conds.append(f"<a{j}, xi> = (pi/alpha)(delta{j} + 2*j)")
            ok = ok and _is_integer(q)
        return TKSCheck(True, ok, residues, tuple(conds))
    i = model.params["i"]
    d1, d2, d3 = model.spin
    if i == 2 and (d2 or d3):
        ok = False
        conds.append("delta2 = delta3 = 0 required")
    if i == 4 and d2:
        ok = False
        conds.append("delta2 = 0 required")
    c, period = _BIEBERBACH_CONGRUENCE[i]
    x = _over_pi(model.params["H"], model, alpha)
    q = (x - (1 + c * d1)) / period
    residues["H"] = format_number(q) if is_exact(q) else float(q)
    conds.append(f"H = (pi/alpha)(1 + {c}*delta1) mod {period}*pi/alpha")
    ok = ok and _is_integer(q)
    return TKSCheck(True, ok, residues, tuple(conds))


# --------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    model: ModelInstance
    capability: str
    note: str
    lambda1: object = None
    known_eigenvalue: object = None

    def to_json(self):
        out = {"name": self.name, "model": self.model.to_json(), "capability": self.capability,
               "note": self.note}
        if self.lambda1 is not None:
            out["lambda1"] = format_number(self.lambda1)
        if self.known_eigenvalue is not None:
            out["known_eigenvalue"] = format_number(self.known_eigenvalue)
        return out


def catalog():
    """Every model used in the examples, with what can be computed for it."""
    pi_unit = {"length_unit": "pi"}
    one = Fraction(1)
    entries = [
        CatalogEntry("torus-trivial", ModelInstance("Torus", {"basis": [[2, 0, 0], [0, 1, 0], [0, 0, 1]],
                                                               "alpha": one, **pi_unit}, (0, 0, 0)),
                     EXPLICIT, "flat torus, trivial spin structure: harmonic spinors, bound not attained"),
        CatalogEntry("torus-spin100", ModelInstance("Torus", {"basis": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                                                               "alpha": one, **pi_unit}, (1, 0, 0)),
                     EXPLICIT, "flat torus with a1 = (pi/alpha, 0, 0), delta = (1, 0, 0): lambda_1 = alpha^2"),
    ]
    for i in (2, 3, 4, 5):
        params = {"i": i, "H": one, "L": one, "alpha": one, **pi_unit}
        if i == 2:
            params.update(S=one, T=0)
        entries.append(CatalogEntry(f"G{i}", ModelInstance("Bieberbach", params, (0, 0, 0)), EXPLICIT,
                                    f"Bieberbach quotient G{i}\\R^3, H = pi/alpha"))
    entries += [
        CatalogEntry("heisenberg", ModelInstance("Heisenberg", {"r": 1}), LAMBDA1_ONLY,
                     "Heisenberg nilmanifold, transversally parallel spinors, Scal = -2", Fraction(1, 4)),
        CatalogEntry("s1xs2", ModelInstance("ProductS1S2", {}), LAMBDA1_ONLY,
                     "Riemannian product S^1 x S^2, (0, 1/2)-transversal Killing spinor", Fraction(1)),
        CatalogEntry("sphere-m1", ModelInstance("RoundSphere", {"m": 1}), LAMBDA1_ONLY,
                     "round S^3 of curvature 1", Fraction(9, 4)),
        CatalogEntry("sphere-quotient", ModelInstance("SphereQuotient", {"gamma": "Gamma"}), LAMBDA1_ONLY,
                     "Gamma\\S^3 with the spin structure carrying (-1, 0)-transversal Killing spinors",
                     Fraction(9, 4)),
        CatalogEntry("deformed-sphere", ModelInstance("DeformedSphere", {"m": 1, "t": 2}), NONE,
                     "D-homothetic S^3: (m/2 + (m+1)/(2t))^2 is an eigenvalue, lambda_1 unknown",
                     None, Fraction(1, 4) * (1 + Fraction(2, 2)) ** 2),
        CatalogEntry("psl2-quotient", ModelInstance("PSL2Quotient", {"alpha": one, "gamma": "Gamma"}), NONE,
                     "Gamma\\~PSL_2(R) (alpha > 0); no spectrum available"),
    ]
    return entries


def catalog_lookup(name):
    for entry in catalog():
        if entry.name == name:
            return entry
    raise ModelConfigError(f"no catalog entry named {name!r}")


def deformed_sphere_eigenvalue(model):
    m, t = model.params["m"], model.params["t"]
    return (Fraction(m, 2) + Fraction(m + 1, 2) / t) ** 2 if is_exact(t) else (m / 2 + (m + 1) / (2 * t)) ** 2
