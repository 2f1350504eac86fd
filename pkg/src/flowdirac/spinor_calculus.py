"""Symbolic Clifford-word calculus on a formal transversal Killing spinor.

A :class:`SpinorExpr` is a finite sum ``sum_w c_w E_w . psi`` where ``E_w`` is a
Clifford word in the frame ``(xi, e_1, ..., e_n)`` (index 0 is ``xi``) and
``psi`` is an ``(alpha, beta)``-transversal Killing spinor on a minimal flow
(``kappa = 0``) with parallel O'Neill tensor.  Covariant derivatives are taken
at a point where the transversal frame is parallel, which reduces every
derivative to the algebraic rules of :class:`DerivativeRuleTable`.

Coefficients may be Fractions (numeric trials) or elements of a sympy
polynomial ring (fully formal runs); anything supporting ``+``, ``*`` and
truthiness-as-nonzero works.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from . import _exact as ex
from .clifford import SkewForm, build_rep


def _mul_generator(i, word):
    """``g_i * E_word`` in canonical form: returns ``(sign, new_word)``."""
    sign = 1
    pos = 0
    for pos, k in enumerate(word):
        if k >= i:
            break
    else:
        pos = len(word)
    if pos % 2:
        sign = -sign
    if pos < len(word) and word[pos] == i:
        return -sign, word[:pos] + word[pos + 1:]
    return sign, word[:pos] + (i,) + word[pos:]


def multiply_words(left, right):
    """Canonical product of two canonical words: ``(sign, word)``."""
    sign = 1
    word = tuple(right)
    for i in reversed(left):
        s, word = _mul_generator(i, word)
        sign *= s
    return sign, word


def reduce_sequence(seq):
    """Reduce an arbitrary product ``g_{s_0} g_{s_1} ...`` to ``(sign, canonical word)``."""
    sign, word = 1, ()
    for i in reversed(tuple(seq)):
        s, word = _mul_generator(i, word)
        sign *= s
    return sign, word


class SpinorExpr:
    """Normalised linear combination of canonical Clifford words applied to psi."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for w, c in (terms or {}).items():
            if c:
                self.terms[tuple(w)] = c

    @classmethod
    def psi(cls, one=Fraction(1)):
        return cls({(): one})

    @classmethod
    def from_raw(cls, raw):
        """Build from ``[(coeff, sequence of frame indices), ...]`` with any ordering."""
        out = {}
        for c, seq in raw:
            sign, w = reduce_sequence(seq)
            out[w] = out.get(w, 0) + sign * c
        return cls(out)

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return SpinorExpr(out)

    def __sub__(self, other):
        return self + other * -1

    def __neg__(self):
        return self * -1

    def __mul__(self, c):
        return SpinorExpr({w: v * c for w, v in self.terms.items()})

    __rmul__ = __mul__

    def left_word(self, word, coeff=1):
        """``coeff * E_word . self`` for a canonical word."""
        out = {}
        for w, c in self.terms.items():
            sign, nw = multiply_words(word, w)
            val = c * coeff * sign
            out[nw] = out[nw] + val if nw in out else val
        return SpinorExpr(out)

    def left_vector(self, vec):
        """``v . self`` where ``vec`` is ``{frame index: coefficient}``."""
        out = SpinorExpr()
        for i, c in vec.items():
            out = out + self.left_word((i,), c)
        return out

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, SpinorExpr) and (self - other).is_zero()

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def words(self):
        return sorted(self.terms, key=lambda w: (len(w), w))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in self.words():
            name = ".".join("xi" if k == 0 else f"e{k}" for k in w) or "1"
            parts.append(f"({self.terms[w]})*{name}")
        return " + ".join(parts) + " . psi"


def normalize(expr):
    """Canonical form of an expression or of raw ``(coeff, sequence)`` terms."""
    if isinstance(expr, SpinorExpr):
        return SpinorExpr.from_raw([(c, w) for w, c in expr.terms.items()])
    return SpinorExpr.from_raw(expr)


def omega_expr(h, one=Fraction(1)):
    """``Omega . psi = sum_{j<k} Omega_jk e_j e_k . psi``."""
    out = {}
    for j in range(1, h.n + 1):
        for k in range(j + 1, h.n + 1):
            w = h.omega(j, k)
            if w:
                out[(j, k)] = w * one
    return SpinorExpr(out)


@dataclass(frozen=True)
class DerivativeRuleTable:
    """First-order rules at a transversally normal point, ``kappa = 0``, ``grad h = 0``.

    ``corrupt`` flips the sign of the ``Omega``-term in the xi-derivative of psi;
    it exists only as a negative control for the verifier.
    """

    alpha: object
    beta: object
    h: SkewForm
    one: object = Fraction(1)
    corrupt: bool = False

    @property
    def n(self):
        return self.h.n

    def frame_derivative(self, direction, index):
        """``nabla^M_{direction}`` of the frame field ``index`` as ``{index: coeff}``."""
        if direction == 0 and index == 0:
            return {}
        if index == 0:
            return self.h.image(direction)
        if direction == 0:
            return self.h.image(index)
        w = self.h.omega(direction, index)
        return {0: -w} if w else {}

    def spinor_derivative(self, direction):
        """``nabla^M_{direction} psi`` as an expression in psi."""
        half = self.one / 2
        if direction == 0:
            om = omega_expr(self.h, self.one) * (-half if self.corrupt else half)
            return SpinorExpr({(0,): self.alpha * self.one}) + om
        # beta xi.e_j.psi + 1/2 xi.h(e_j).psi
        out = SpinorExpr({(0, direction): self.beta * self.one})
        for k, c in self.h.image(direction).items():
            out = out + SpinorExpr.psi(self.one).left_word((0, k) if k > 0 else (0,), c * half)
        return out


def covariant_derivative(expr, direction, rules):
    """Leibniz rule over each word of ``expr`` using the rule table."""
    n = rules.n
    if not 0 <= direction <= n:
        raise ValueError(f"direction must be in 0..{n}, got {direction}")
    dpsi = rules.spinor_derivative(direction)
    out = SpinorExpr()
    for w, c in expr.terms.items():
        for pos, idx in enumerate(w):
            for k, dc in rules.frame_derivative(direction, idx).items():
                raw = w[:pos] + (k,) + w[pos + 1:]
                sign, nw = reduce_sequence(raw)
                out = out + SpinorExpr({nw: c * dc * sign})
        out = out + dpsi.left_word(w, c)
    return out


def dirac(expr, rules):
    """``D = xi . nabla_xi + sum_j e_j . nabla_{e_j}`` applied to ``expr``."""
    out = SpinorExpr()
    for a in range(rules.n + 1):
        out = out + covariant_derivative(expr, a, rules).left_word((a,))
    return out


def dirac_formula(rules):
    """Closed form ``D psi = -alpha psi + n beta xi.psi - 1/2 xi.Omega.psi``."""
    one = rules.one
    om = omega_expr(rules.h, one)
    return (SpinorExpr({(): -rules.alpha * one, (0,): rules.n * rules.beta * one})
            + om.left_word((0,), -one / 2))


def dirac_square_formula(rules):
    """Closed form of ``D^2 psi`` for ``kappa = 0``, ``grad h = 0``."""
    one = rules.one
    a, b, n = rules.alpha * one, rules.beta * one, rules.n
    om = omega_expr(rules.h, one)
    return (SpinorExpr({(): a * a + n * n * b * b, (0,): -2 * n * a * b})
            + om.left_word((), 2 * b)
            + om.left_word((0,), a)
            + _omega_square(om) * (-one / 4))


def _omega_square(om):
    out = SpinorExpr()
    for w, c in om.terms.items():
        out = out + om.left_word(w, c)
    return out


@dataclass
class Verdict:
    equation: str
    n: int
    passed: bool
    residual: SpinorExpr
    lhs: SpinorExpr
    rhs: SpinorExpr


def verify_dirac(n, h, alpha, beta, one=Fraction(1), corrupt=False):
    rules = DerivativeRuleTable(alpha, beta, h if isinstance(h, SkewForm) else SkewForm(h), one, corrupt)
    if rules.n != n:
        raise ValueError("h has the wrong size")
    lhs = dirac(SpinorExpr.psi(one), rules)
    rhs = dirac_formula(rules)
    res = lhs - rhs
    return Verdict("dirac", n, res.is_zero(), res, lhs, rhs)


def verify_dirac_square(n, h, alpha, beta, one=Fraction(1), corrupt=False):
    """Check ``D(D psi)`` against the closed form; the verdict holds iff the residual is 0."""
    if n % 2 or not 2 <= n <= 8:
        raise ValueError("n must be even and at most 8")
    rules = DerivativeRuleTable(alpha, beta, h if isinstance(h, SkewForm) else SkewForm(h), one, corrupt)
    if rules.n != n:
        raise ValueError("h has the wrong size")
    lhs = dirac(dirac(SpinorExpr.psi(one), rules), rules)
    rhs = dirac_square_formula(rules)
    res = lhs - rhs
    return Verdict("dirac2", n, res.is_zero(), res, lhs, rhs)


def formal_parameters(n):
    """Polynomial ring ``QQ[alpha, beta, w_jk]`` and a generic skew form over it."""
    names = ["alpha", "beta"] + [f"w{j}{k}" for j, k in combinations(range(1, n + 1), 2)]
    R, *gens = ring(",".join(names), QQ)
    alpha, beta, *ws = gens
    return R, alpha, beta, SkewForm.from_upper(n, ws)


def random_skew(n, rng, max_den=97):
    vals = [ex.random_rational(rng, max_den) for _ in combinations(range(n), 2)]
    return SkewForm.from_upper(n, vals)


def evaluate(expr, rep):
    """Exact operator matrix ``sum_w c_w E_w`` through a concrete representation."""
    out = ex.GMatrix.zeros(rep.spinor_dim, rep.spinor_dim)
    for w, c in expr.terms.items():
        out = out + rep.word_matrix(w).scale(c)
    return out


def evaluate_raw(raw, rep):
    """Matrix of unreduced terms, multiplying generators in the given order."""
    out = ex.GMatrix.zeros(rep.spinor_dim, rep.spinor_dim)
    for c, seq in raw:
        out = out + rep.word_matrix(seq).scale(c)
    return out


def reduce_dim3(expr):
    """Coefficients of ``(psi, xi.psi, e1.psi, e2.psi)`` using ``-xi.e1.e2 = Id``.

    Only meaningful for n = 2; words of length two or three are traded for
    their duals (``e1 e2 = xi``, ``xi e1 = e2``, ``xi e2 = -e1``, ``xi e1 e2 = -1``).
    """
    dual = {
        (): ((), 1), (0,): ((0,), 1), (1,): ((1,), 1), (2,): ((2,), 1),
        (1, 2): ((0,), 1), (0, 1): ((2,), 1), (0, 2): ((1,), -1), (0, 1, 2): ((), -1),
    }
    out = {(): 0, (0,): 0, (1,): 0, (2,): 0}
    for w, c in expr.terms.items():
        target, sign = dual[w]
        out[target] = out[target] + sign * c
    return out[()], out[(0,)], out[(1,)], out[(2,)]


def eigen_relation_dim3(alpha, beta, b, one=Fraction(1)):
    """``D^2 psi = c_psi psi + c_xi xi.psi`` on a 3-dimensional flow with ``h = bJ``.

    Returns ``(c_psi, c_xi)``; with ``alpha*beta = 0`` this is
    ``(alpha^2 + 4 beta^2 + b^2/4 - b alpha, 2 b beta)``.
    """
    rules = DerivativeRuleTable(alpha, beta, SkewForm.complex_structure(1, b), one)
    d2 = dirac(dirac(SpinorExpr.psi(one), rules), rules)
    c0, cxi, c1, c2 = reduce_dim3(d2)
    if c1 or c2:
        raise ArithmeticError("unexpected transversal component in D^2 psi")
    return c0, cxi


def apply_to_block(expr, m, r=0, variant="standard"):
    """Evaluate ``expr`` on the ``Sigma_r`` block of the Sasakian splitting.

    Returns ``(c, spinor)`` when the result is ``c * spinor`` for a nonzero
    block spinor, else ``(None, spinor)``.
    """
    from .clifford import block_spinor, omega_eigendecomposition

    rep = build_rep(2 * m + 1, variant)
    spaces = omega_eigendecomposition(rep, SkewForm.complex_structure(m))
    psi = block_spinor(spaces[r])
    out = evaluate(expr, rep) @ psi
    k = next(i for i in range(psi.shape[0]) if psi.re[i] or psi.im[i])
    c = out.entry(k) / psi.entry(k)
    if out == psi.scale(c):
        return c, psi
    return None, psi


def random_raw_expression(dim, rng, terms=5, max_len=6, max_den=97):
    raw = []
    for _ in range(terms):
        length = int(rng.integers(0, max_len + 1))
        seq = tuple(int(x) for x in rng.integers(0, dim, size=length))
        raw.append((ex.random_rational(rng, max_den), seq))
    return raw


def run_trials(equation, n, trials, seed, corrupt=False, beta_zero=False):
    """Random exact-rational trials plus one formal run; returns a summary dict."""
    if equation == "dirac":
        check = verify_dirac
    elif equation == "dirac2":
        check = verify_dirac_square
    else:
        raise ValueError(f"unknown equation {equation!r}")
    rng = np.random.default_rng(seed)
    failures = 0
    max_terms = 0
    for _ in range(trials):
        a = ex.random_rational(rng)
        b = Fraction(0) if beta_zero else ex.random_rational(rng)
        h = random_skew(n, rng)
        v = check(n, h, a, b, corrupt=corrupt)
        if not v.passed:
            failures += 1
            max_terms = max(max_terms, len(v.residual))
    formal = None
    if equation == "dirac" or n <= 4:
        R, fa, fb, fh = formal_parameters(n)
        v = check(n, fh, fa, fb, one=R.one, corrupt=corrupt)
        formal = v.passed
        if not v.passed:
            max_terms = max(max_terms, len(v.residual))
    return {
        "equation": equation,
        "n": n,
        "trials": trials,
        "seed": seed,
        "failures": failures,
        "formal": formal,
        "max_residual_terms": max_terms,
        "passed": failures == 0 and formal is not False,
    }
