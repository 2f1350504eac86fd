"""Concrete complex Clifford algebra and spinor linear algebra.

Conventions used throughout the package:

* generators square to ``-1``: ``g_i g_j + g_j g_i = -2 delta_ij``;
* every generator is skew-Hermitian, so ``<X.psi, psi>`` is purely imaginary;
* frame index 0 is the flow direction ``xi``, indices ``1..n`` are ``e_1..e_n``;
* in odd dimension ``2k+1`` the complex volume element
  ``i^(k+1) g_0 g_1 ... g_2k`` acts as the identity (for ``dim == 3`` this is
  ``-xi.e1.e2 = Id``).

All matrices are exact (entries in ``{0, +-1, +-i}`` for the generators); see
:mod:`flowdirac._exact`.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from . import _exact as ex

MAX_DIM = 11

GMatrix = ex.GMatrix

_SIGMA1 = GMatrix.from_entries([[0, 1], [1, 0]])
_SIGMA2 = GMatrix.from_entries([[0, -1j], [1j, 0]])
_SIGMA3 = GMatrix.from_entries([[1, 0], [0, -1]])


def _kron(a, b):
    # generators have integer entries, so den stays 1
    re = np.kron(a.re, b.re) - np.kron(a.im, b.im)
    im = np.kron(a.re, b.im) + np.kron(a.im, b.re)
    return GMatrix(re, im, a.den * b.den)


@dataclass(frozen=True, eq=False)
class CliffordRep:
    """A complex matrix representation of the Clifford algebra of R^dim."""

    dim: int
    spinor_dim: int
    gammas: tuple
    convention_tag: str
    variant: str = "standard"
    _complex: tuple = field(default=None, repr=False)

    @property
    def n(self):
        """Rank of the normal bundle Q (number of transversal directions)."""
        return self.dim - 1

    def gamma(self, index):
        return self.gammas[index]

    def complex_gammas(self):
        return self._complex

    def word_matrix(self, word):
        """Matrix of the Clifford product ``g_{w_0} g_{w_1} ...`` (left to right)."""
        out = GMatrix.eye(self.spinor_dim)
        for k in word:
            out = out @ self.gammas[k]
        return out

    def volume_element(self):
        """The complex volume element ``i^floor((dim+1)/2) g_0 ... g_{dim-1}``."""
        phase = ex.I ** ((self.dim + 1) // 2)
        return self.word_matrix(range(self.dim)).scale(phase)


def _even_generators(dim, variant):
    if dim == 0:
        return []
    first, second = (_SIGMA1, _SIGMA2) if variant == "standard" else (_SIGMA2, _SIGMA1)
    if dim == 2:
        return [first.scale(ex.I), second.scale(ex.I)]
    lower = _even_generators(dim - 2, variant)
    size = lower[0].shape[0]
    gens = [_kron(g, _SIGMA3) for g in lower]
    gens.append(_kron(GMatrix.eye(size), first.scale(ex.I)))
    gens.append(_kron(GMatrix.eye(size), second.scale(ex.I)))
    return gens


def _alt_conjugator(size):
    # cyclic shift composed with a diagonal of fourth roots of unity
    u = np.zeros((size, size), dtype=object)
    u[:, :] = 0
    for k in range(size):
        u[(k + 1) % size, k] = (1, 1j, -1, -1j)[k % 4]
    return GMatrix.from_entries(u)


@lru_cache(maxsize=None)
def build_rep(dim, variant="standard"):
    """Build generators for ``dim`` in ``1..11`` with the package conventions.

    ``variant="alt"`` gives a second, differently arranged representation
    (different tensor roles, conjugated by a unitary monomial matrix) used to
    check that results do not depend on the matrix convention.
    """
    if not isinstance(dim, (int, np.integer)) or not 1 <= dim <= MAX_DIM:
        raise ValueError(f"dimension must be an integer in 1..{MAX_DIM}, got {dim!r}")
    if variant not in ("standard", "alt"):
        raise ValueError(f"unknown representation variant {variant!r}")
    dim = int(dim)
    even = _even_generators(dim - dim % 2, variant)
    size = 2 ** (dim // 2)
    if dim % 2:
        product = GMatrix.eye(size)
        for g in even:
            product = product @ g
        ident = GMatrix.eye(size)
        minus_ident = -ident
        gens = None
        # sign branch is picked by the volume-element test, not hard-coded
        for c in (ex.ONE, -ex.ONE, ex.I, -ex.I):
            xi = product.scale(c)
            if xi @ xi != minus_ident:
                continue
            trial = [xi] + even
            vol = ident
            for g in trial:
                vol = vol @ g
            vol = vol.scale(ex.I ** ((dim + 1) // 2))
            if vol == ident:
                gens = trial
                break
        if gens is None:  # pragma: no cover - construction always has a branch
            raise RuntimeError("no sign branch satisfies the volume normalisation")
    else:
        gens = even
    if variant == "alt" and size > 1:
        u = _alt_conjugator(size)
        ud = u.dagger()
        gens = [u @ g @ ud for g in gens]
    gens = tuple(gens)
    tag = f"omega=i^{(dim + 1) // 2}*g0...g{dim - 1}" + ("=Id" if dim % 2 else "")
    return CliffordRep(
        dim=dim,
        spinor_dim=size,
        gammas=gens,
        convention_tag=tag,
        variant=variant,
        _complex=tuple(g.to_complex() for g in gens),
    )


@dataclass(frozen=True, eq=False)
class SkewForm:
    """Skew-symmetric endomorphism ``h`` of Q, stored as a matrix acting on columns.

    ``h(e_j) = sum_k entries[k, j] e_k`` and ``Omega(e_j, e_k) = entries[k, j]``.
    """

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=object)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("skew form must be a square matrix")
        for (i, j), v in np.ndenumerate(a):
            if v + a[j, i] != 0:
                raise ValueError("matrix is not skew-symmetric")
        object.__setattr__(self, "entries", a)

    @property
    def n(self):
        return self.entries.shape[0]

    def omega(self, j, k):
        """``Omega(e_j, e_k) = g(h(e_j), e_k)`` with 1-based frame indices."""
        return self.entries[k - 1, j - 1]

    def image(self, j):
        """Coefficients of ``h(e_j)`` as ``{frame index: coefficient}``."""
        col = self.entries[:, j - 1]
        return {k + 1: c for k, c in enumerate(col) if c != 0}

    def square_is_minus_identity(self):
        sq = self.entries.dot(self.entries)
        n = self.n
        return all(sq[i, j] == (-1 if i == j else 0) for i in range(n) for j in range(n))

    @classmethod
    def zero(cls, n):
        return cls(np.zeros((n, n), dtype=int).astype(object))

    @classmethod
    def complex_structure(cls, m, scale=1):
        """``scale * J`` with ``J(e_{2a-1}) = e_{2a}``, ``J(e_{2a}) = -e_{2a-1}``."""
        a = np.zeros((2 * m, 2 * m), dtype=object)
        a[:, :] = 0
        for k in range(m):
            a[2 * k + 1, 2 * k] = scale
            a[2 * k, 2 * k + 1] = -scale
        return cls(a)

    @classmethod
    def from_upper(cls, n, values):
        """Build from the strictly upper entries ``Omega_jk`` (j < k), row-major."""
        a = np.zeros((n, n), dtype=object)
        a[:, :] = 0
        it = iter(values)
        for j in range(n):
            for k in range(j + 1, n):
                w = next(it)
                # Omega_{j+1,k+1} = entries[k, j]
                a[k, j] = w
                a[j, k] = -w
        return cls(a)


def _is_exact(s):
    return isinstance(s, GMatrix) or (np.asarray(s).dtype == object)


def as_spinor(rep, s):
    """Normalise a spinor argument: exact input becomes a GMatrix vector."""
    if isinstance(s, GMatrix):
        out = s
    elif np.asarray(s).dtype == object or np.issubdtype(np.asarray(s).dtype, np.integer):
        out = GMatrix.from_entries(s)
    else:
        out = np.asarray(s, dtype=complex)
    if out.shape != (rep.spinor_dim,):
        raise ValueError(f"spinor must have length {rep.spinor_dim}, got shape {out.shape}")
    return out


def _vector_matrix(rep, v):
    v = list(v)
    if len(v) != rep.dim:
        raise ValueError(f"vector must have length {rep.dim}, got {len(v)}")
    out = GMatrix.zeros(rep.spinor_dim, rep.spinor_dim)
    for a, c in enumerate(v):
        if c:
            out = out + rep.gammas[a].scale(c)
    return out


def vector_action(rep, v, s):
    """Clifford multiplication ``v . s`` for a real vector ``v`` in the frame (xi, e_1, ...).

    Exact when both ``v`` and ``s`` are exact (ints, Fractions, GMatrix);
    otherwise evaluated in complex floating point.
    """
    s = as_spinor(rep, s)
    exact = isinstance(s, GMatrix) and all(not isinstance(c, float) for c in v)
    if exact:
        return _vector_matrix(rep, v) @ s
    if len(v) != rep.dim:
        raise ValueError(f"vector must have length {rep.dim}, got {len(v)}")
    s = s.to_complex() if isinstance(s, GMatrix) else s
    out = np.zeros(rep.spinor_dim, dtype=complex)
    for a, c in enumerate(v):
        out += complex(c) * (rep.complex_gammas()[a] @ s)
    return out


def two_form_matrix(rep, h):
    """Matrix of ``Omega . `` = ``sum_{j<k} Omega_jk e_j e_k`` (exact)."""
    h = h if isinstance(h, SkewForm) else SkewForm(h)
    if h.n != rep.n:
        raise ValueError(f"skew form must be {rep.n}x{rep.n} for dimension {rep.dim}")
    out = GMatrix.zeros(rep.spinor_dim, rep.spinor_dim)
    for j in range(1, h.n + 1):
        for k in range(j + 1, h.n + 1):
            w = h.omega(j, k)
            if w:
                out = out + (rep.gammas[j] @ rep.gammas[k]).scale(w)
    return out


def two_form_action(rep, h, s):
    """Clifford action of the 2-form ``Omega(Z, W) = g(h(Z), W)`` on a spinor."""
    s = as_spinor(rep, s)
    mat = two_form_matrix(rep, h)
    if isinstance(s, GMatrix):
        return mat @ s
    return mat.to_complex() @ s


@dataclass(frozen=True, eq=False)
class OmegaEigenspace:
    r: int
    eigenvalue: complex
    multiplicity: int
    projector: GMatrix
    xi_eigenvalue: complex


def omega_eigendecomposition(rep, h):
    """Split spinors into eigenspaces of ``Omega`` for an almost-Hermitian ``h``.

    Projectors come from the product formula over the eigenvalues
    ``i(2r - m)``, ``r = 0..m``, so everything stays exact.  Each block also
    records the scalar by which ``xi`` acts on it (``None`` if it is not
    scalar there).
    """
    h = h if isinstance(h, SkewForm) else SkewForm(h)
    if rep.dim % 2 == 0:
        raise ValueError("eigendecomposition requires odd dimension 2m+1")
    if h.n != rep.n:
        raise ValueError(f"skew form must be {rep.n}x{rep.n}")
    if not h.square_is_minus_identity():
        raise ValueError("h is not almost-Hermitian (h^2 != -Id)")
    m = rep.n // 2
    a = two_form_matrix(rep, h)
    ident = GMatrix.eye(rep.spinor_dim)
    lams = [ex.QQ_I(0, 2 * r - m) for r in range(m + 1)]
    shifted = [a - ident.scale(lam) for lam in lams]
    spaces = []
    for r, lam in enumerate(lams):
        proj = ident
        denom = ex.ONE
        for s, other in enumerate(lams):
            if s != r:
                proj = proj @ shifted[s]
                denom = denom * (lam - other)
        proj = proj.scale(ex.ONE / denom)
        if a @ proj != proj.scale(lam):
            raise ArithmeticError("projector does not land in the eigenspace")
        mult = ex.to_fraction(proj.trace())
        xi_p = rep.gammas[0] @ proj
        xi_val = None
        if mult:
            candidate = xi_p.trace() / ex.gauss(mult)
            if xi_p == proj.scale(candidate):
                xi_val = ex.to_complex(candidate)
        spaces.append(OmegaEigenspace(
            r=r,
            eigenvalue=ex.to_complex(lam),
            multiplicity=int(mult),
            projector=proj,
            xi_eigenvalue=xi_val,
        ))
    return spaces


def expected_multiplicities(m):
    return [comb(m, r) for r in range(m + 1)]


def block_spinor(space, column=None):
    """A nonzero exact spinor in the image of the block's projector."""
    proj = space.projector
    cols = range(proj.shape[1]) if column is None else [column]
    for c in cols:
        v = proj[:, c]
        if not v.is_zero():
            return v
    raise ValueError("empty eigenspace")
