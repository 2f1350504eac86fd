"""Exact Gaussian-rational scalars and matrices.

Scalars are elements of sympy's ``QQ_I`` domain.  Matrices and vectors are
:class:`GMatrix`: integer numerators for the real and imaginary parts over a
shared positive denominator.  Numerators live in numpy object arrays of Python
ints, so products never overflow and ``@`` stays fast enough for 32x32 spinor
matrices.
"""

from fractions import Fraction
from math import gcd
from numbers import Rational

import numpy as np
from sympy.polys.domains import QQ, QQ_I

ZERO = QQ_I(0, 0)
ONE = QQ_I(1, 0)
I = QQ_I(0, 1)


def _q(x):
    if isinstance(x, Rational):
        return QQ(int(x.numerator), int(x.denominator))
    if isinstance(x, float) and x.is_integer():
        return QQ(int(x), 1)
    if type(x).__name__ == "mpq":
        return x
    raise TypeError(f"not an exact rational: {x!r}")


def gauss(re, im=0):
    """Build a Gaussian rational from exact real and imaginary parts."""
    if type(re).__name__ == "GaussianRational":
        return re
    if isinstance(re, complex):
        re, im = re.real, re.imag
    return QQ_I(_q(re), _q(im))


def conj(z):
    return QQ_I(z.x, -z.y)


def to_fraction(x):
    """An exact real scalar as a Fraction (imaginary part must vanish)."""
    if type(x).__name__ == "GaussianRational":
        if x.y:
            raise ValueError(f"{x} is not real")
        x = x.x
    return Fraction(int(x.numerator), int(x.denominator))


def to_complex(z):
    return complex(float(z.x), float(z.y))


def _ints(a):
    out = np.empty(np.shape(a), dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = int(v)
    return out


def _array_gcd(a):
    g = 0
    for v in a.flat:
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


class GMatrix:
    """Exact Gaussian-rational matrix or vector: ``(re + i*im) / den``."""

    __slots__ = ("re", "im", "den")
    __array_priority__ = 1000

    def __init__(self, re, im, den=1):
        if den <= 0:
            raise ValueError("denominator must be positive")
        self.re = re
        self.im = im
        self.den = den
        self._reduce()

    def _reduce(self):
        if self.den == 1:
            return
        g = gcd(_array_gcd(self.re), _array_gcd(self.im), self.den)
        if g > 1:
            self.re = self.re // g
            self.im = self.im // g
            self.den //= g

    @classmethod
    def from_entries(cls, a):
        """From an array-like of ints, Fractions, integer complexes or QQ_I values."""
        a = np.asarray(a, dtype=object)
        vals = [gauss(v) for v in a.flat]
        den = 1
        for z in vals:
            den = den * int(z.x.denominator) // gcd(den, int(z.x.denominator))
            den = den * int(z.y.denominator) // gcd(den, int(z.y.denominator))
        re = np.array([int(z.x * den) for z in vals] or [], dtype=object).reshape(a.shape)
        im = np.array([int(z.y * den) for z in vals] or [], dtype=object).reshape(a.shape)
        return cls(re, im, den)

    @classmethod
    def zeros(cls, *shape):
        z = np.zeros(shape, dtype=int).astype(object)
        return cls(z, z.copy(), 1)

    @classmethod
    def eye(cls, n):
        return cls(np.eye(n, dtype=int).astype(object), np.zeros((n, n), dtype=int).astype(object), 1)

    @property
    def shape(self):
        return self.re.shape

    def copy(self):
        return GMatrix(self.re.copy(), self.im.copy(), self.den)

    def __matmul__(self, other):
        re = self.re.dot(other.re) - self.im.dot(other.im)
        im = self.re.dot(other.im) + self.im.dot(other.re)
        return GMatrix(_ints(re), _ints(im), self.den * other.den)

    def _common(self, other):
        d = self.den * other.den // gcd(self.den, other.den)
        a, b = d // self.den, d // other.den
        return d, a, b

    def __add__(self, other):
        d, a, b = self._common(other)
        return GMatrix(self.re * a + other.re * b, self.im * a + other.im * b, d)

    def __sub__(self, other):
        d, a, b = self._common(other)
        return GMatrix(self.re * a - other.re * b, self.im * a - other.im * b, d)

    def __neg__(self):
        return GMatrix(-self.re, -self.im, self.den)

    def scale(self, c):
        """Multiply by an exact scalar (int, Fraction, integer complex or QQ_I)."""
        c = gauss(c)
        x, y = c.x, c.y
        cd = int(x.denominator) * int(y.denominator) // gcd(int(x.denominator), int(y.denominator))
        xn, yn = int(x * cd), int(y * cd)
        return GMatrix(self.re * xn - self.im * yn, self.re * yn + self.im * xn, self.den * cd)

    def dagger(self):
        return GMatrix(self.re.T.copy(), -self.im.T, self.den)

    def is_zero(self):
        return not any(self.re.flat) and not any(self.im.flat)

    def __eq__(self, other):
        if not isinstance(other, GMatrix) or self.shape != other.shape:
            return NotImplemented if not isinstance(other, GMatrix) else False
        return (self - other).is_zero()

    __hash__ = None

    def __getitem__(self, idx):
        return GMatrix(np.asarray(self.re[idx], dtype=object), np.asarray(self.im[idx], dtype=object), self.den)

    def entry(self, *idx):
        return QQ_I(QQ(int(self.re[idx]), self.den), QQ(int(self.im[idx]), self.den))

    def trace(self):
        n = min(self.shape)
        return QQ_I(QQ(int(sum(self.re[k, k] for k in range(n))), self.den),
                    QQ(int(sum(self.im[k, k] for k in range(n))), self.den))

    def to_complex(self):
        return (self.re.astype(float) + 1j * self.im.astype(float)) / self.den

    def __repr__(self):
        return f"GMatrix(shape={self.shape}, den={self.den})"


def as_gmatrix(a):
    return a if isinstance(a, GMatrix) else GMatrix.from_entries(a)


def inner(u, v):
    """Hermitian product ``<u, v>`` of exact vectors, conjugate-linear in ``v``."""
    re = u.re.dot(v.re) + u.im.dot(v.im)
    im = u.im.dot(v.re) - u.re.dot(v.im)
    d = u.den * v.den
    return QQ_I(QQ(int(re), d), QQ(int(im), d))


def random_rational(rng, max_den=97, span=3):
    """A random rational in [-span, span] with denominator at most ``max_den``."""
    den = int(rng.integers(1, max_den + 1))
    num = int(rng.integers(-span * den, span * den + 1))
    return Fraction(num, den)
