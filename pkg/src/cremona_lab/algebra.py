"""Exact rational arithmetic and sparse multivariate polynomials.

Everything in the package is built on two types defined here:

* ``mpq`` from :mod:`gmpy2` is the scalar type (always reduced, positive
  denominator).  :func:`Q` converts ints, strings such as ``"-3/7"`` and
  :class:`fractions.Fraction` values.
* :class:`MPoly` is an immutable sparse polynomial over ``mpq`` in an ordered
  tuple of named variables.

Large products, exact quotients, compositions and gcds run on FLINT
(``python-flint``) multivariate polynomials; the dictionary form stays the
canonical representation.  The Sylvester resultant, discriminant and first
subresultant are implemented here directly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import flint
from flint.utils.flint_exceptions import DomainError
import gmpy2
from gmpy2 import mpq

__all__ = [
    "Q",
    "MPoly",
    "RationalFunction",
    "AlgebraError",
    "VariableMismatch",
    "NotDivisible",
    "DegenerateResultant",
    "exact_divide",
    "divides",
    "ord_divide",
    "resultant",
    "discriminant",
    "subresultant1",
    "squarefree_data",
    "poly_gcd",
    "univariate_gcd",
    "rational_roots",
    "bareiss_det",
]


class AlgebraError(ValueError):
    pass


class VariableMismatch(AlgebraError):
    pass


class NotDivisible(AlgebraError, ArithmeticError):
    pass


class DegenerateResultant(AlgebraError):
    pass


def Q(value) -> mpq:
    """Coerce ``value`` to an exact rational."""
    if isinstance(value, mpq):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        return mpq(text)
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact rationals")
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {value!r} to a rational")


def _grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class MPoly:
    """Sparse polynomial with ``mpq`` coefficients.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    coefficients.  Instances are hashable and compare equal iff they have the
    same variables and the same terms.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple[int, ...], object] | None = None):
        self.vars = tuple(vars)
        clean: dict[tuple[int, ...], mpq] = {}
        n = len(self.vars)
        if terms:
            for exp, coef in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != n:
                    raise VariableMismatch(f"exponent {exp} does not match variables {self.vars}")
                if any(e < 0 for e in exp):
                    raise AlgebraError(f"negative exponent {exp}")
                c = Q(coef)
                if c:
                    clean[exp] = clean.get(exp, mpq(0)) + c
                    if not clean[exp]:
                        del clean[exp]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple[str, ...], terms: dict) -> "MPoly":
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "MPoly":
        return cls._raw(tuple(vars), {})

    @classmethod
    def const(cls, value, vars: Sequence[str]) -> "MPoly":
        vars = tuple(vars)
        c = Q(value)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def var(cls, name: str, vars: Sequence[str]) -> "MPoly":
        vars = tuple(vars)
        if name not in vars:
            raise VariableMismatch(f"{name!r} not in {vars}")
        exp = tuple(1 if v == name else 0 for v in vars)
        return cls._raw(vars, {exp: mpq(1)})

    @classmethod
    def gens(cls, vars: Sequence[str]) -> tuple["MPoly", ...]:
        return tuple(cls.var(v, vars) for v in vars)

    @classmethod
    def parse(cls, text: str, vars: Sequence[str]) -> "MPoly":
        """Parse a polynomial expression such as ``"x^2 - 3/7*y"``."""
        import sympy

        vars = tuple(vars)
        symbols = [sympy.Symbol(v) for v in vars]
        local = {name: sym for name, sym in zip(vars, symbols)}
        expr = sympy.sympify(text.replace("^", "**"), locals=local, rational=True)
        extra = expr.free_symbols - set(symbols)
        if extra:
            raise VariableMismatch(f"unknown symbols {sorted(map(str, extra))} for variables {vars}")
        poly = sympy.Poly(expr, *symbols, domain="QQ")
        return cls(vars, {exp: mpq(int(c.p), int(c.q)) for exp, c in poly.terms()})

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise AlgebraError(f"{self} is not constant")
        return self.terms.get((0,) * len(self.vars), mpq(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (or total degree); -1 for zero."""
        if var is None:
            return self.total_degree()
        i = self._index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def involves(self, var: str) -> bool:
        i = self._index(var)
        return any(e[i] for e in self.terms)

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise VariableMismatch(f"{var!r} not in {self.vars}") from None

    def sorted_terms(self) -> list[tuple[tuple[int, ...], mpq]]:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[tuple[int, ...], mpq]:
        if not self.terms:
            raise AlgebraError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def coeffs_in(self, var: str) -> list["MPoly"]:
        """Coefficients ``[c_0, ..., c_d]`` of ``self`` viewed as a polynomial in ``var``.

        The coefficients keep the full variable tuple (``var`` just does not occur).
        """
        i = self._index(var)
        d = self.degree(var)
        buckets: list[dict] = [{} for _ in range(max(d + 1, 0))]
        for exp, c in self.terms.items():
            k = exp[i]
            buckets[k][exp[:i] + (0,) + exp[i + 1:]] = c
        return [MPoly._raw(self.vars, b) for b in buckets]

    def leading_coeff(self, var: str) -> "MPoly":
        coeffs = self.coeffs_in(var)
        if not coeffs:
            return MPoly.zero(self.vars)
        return coeffs[-1]

    def content_scalar(self) -> mpq:
        """Positive rational c with self / c having coprime integer coefficients."""
        if not self.terms:
            return mpq(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gmpy2.gcd(num, c.numerator)
            den = gmpy2.lcm(den, c.denominator)
        return mpq(num, den)

    def primitive(self) -> "MPoly":
        """Integer-coefficient primitive associate with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content_scalar()
        if self.leading_term()[1] < 0:
            c = -c
        return self.scale(1 / c)

    def monic(self) -> "MPoly":
        if not self.terms:
            return self
        return self.scale(1 / self.leading_term()[1])

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "MPoly") -> None:
        if self.vars != other.vars:
            raise VariableMismatch(f"variable lists differ: {self.vars} vs {other.vars}")

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            self._check(other)
            return other
        return MPoly.const(other, self.vars)

    def __add__(self, other) -> "MPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return MPoly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MPoly":
        return (-self) + other

    def scale(self, factor) -> "MPoly":
        c = Q(factor)
        if not c:
            return MPoly.zero(self.vars)
        return MPoly._raw(self.vars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        if self.vars and len(self.terms) * len(other.terms) > _FLINT_CUTOFF:
            return _from_flint(_to_flint(self) * _to_flint(other), self.vars)
        if len(self.terms) > len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out: dict = {}
        get = out.get
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return MPoly._raw(self.vars, {e: c for e, c in out.items() if c})

    def __rmul__(self, other) -> "MPoly":
        return self.__mul__(other)

    def __pow__(self, k: int) -> "MPoly":
        if not isinstance(k, int) or k < 0:
            raise AlgebraError("only nonnegative integer powers are supported")
        result = MPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, mpq, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution ----------------------------------------

    def diff(self, var: str) -> "MPoly":
        i = self._index(var)
        out = {}
        for exp, c in self.terms.items():
            k = exp[i]
            if k:
                out[exp[:i] + (k - 1,) + exp[i + 1:]] = c * k
        return MPoly._raw(self.vars, out)

    def evaluate(self, point) -> mpq:
        """Evaluate at a full point (sequence aligned with ``vars`` or a name mapping)."""
        if isinstance(point, Mapping):
            values = [Q(point[v]) for v in self.vars]
        else:
            values = [Q(p) for p in point]
            if len(values) != len(self.vars):
                raise VariableMismatch("point has wrong dimension")
        total = mpq(0)
        for exp, c in self.terms.items():
            term = c
            for v, e in zip(values, exp):
                if e:
                    term *= v**e
            total += term
        return total

    def specialize(self, values: Mapping[str, object]) -> "MPoly":
        """Substitute rational values for some variables (variable tuple unchanged)."""
        idx = {self._index(v): Q(x) for v, x in values.items()}
        out: dict = {}
        for exp, c in self.terms.items():
            e = list(exp)
            for i, x in idx.items():
                if e[i]:
                    c = c * x ** e[i]
                    e[i] = 0
            if c:
                key = tuple(e)
                s = out.get(key, 0) + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return MPoly._raw(self.vars, out)

    def substitute(self, images: Mapping[str, "MPoly"] | Sequence["MPoly"], target_vars: Sequence[str] | None = None) -> "MPoly":
        """Compose with polynomials.

        ``images`` gives, for every variable of ``self`` (as a sequence aligned
        with ``vars`` or a mapping by name), a polynomial over a common target
        variable tuple.  Variables missing from a mapping are kept as themselves
        and must then exist in the target tuple.
        """
        if isinstance(images, Mapping):
            if target_vars is None:
                sample = next(iter(images.values()), None)
                target_vars = sample.vars if sample is not None else self.vars
            target_vars = tuple(target_vars)
            seq = [images[v] if v in images else MPoly.var(v, target_vars) for v in self.vars]
        else:
            seq = list(images)
            if len(seq) != len(self.vars):
                raise VariableMismatch("wrong number of substitution images")
            if target_vars is None:
                target_vars = seq[0].vars if seq else self.vars
            target_vars = tuple(target_vars)
        for img in seq:
            if img.vars != target_vars:
                raise VariableMismatch("substitution images must share a variable tuple")
        if self.vars and target_vars and len(self.terms) > 1:
            ctx = _flint_ctx(target_vars)
            out = _to_flint(self).compose(*[_to_flint(img) for img in seq], ctx=ctx)
            return _from_flint(out, target_vars)
        power_cache: list[dict[int, MPoly]] = [{0: MPoly.const(1, target_vars), 1: img} for img in seq]

        def power(i: int, k: int) -> MPoly:
            cache = power_cache[i]
            if k not in cache:
                half = power(i, k // 2)
                p = half * half
                if k % 2:
                    p = p * seq[i]
                cache[k] = p
            return cache[k]

        total: dict = {}
        for exp, c in self.terms.items():
            term = MPoly.const(c, target_vars)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            for te, tc in term.terms.items():
                s = total.get(te, 0) + tc
                if s:
                    total[te] = s
                else:
                    total.pop(te, None)
        return MPoly._raw(target_vars, total)

    def with_vars(self, new_vars: Sequence[str]) -> "MPoly":
        """Re-express over another variable tuple containing every variable used."""
        new_vars = tuple(new_vars)
        pos = {v: i for i, v in enumerate(new_vars)}
        used = [i for i in range(len(self.vars)) if any(e[i] for e in self.terms)]
        for i in used:
            if self.vars[i] not in pos:
                raise VariableMismatch(f"variable {self.vars[i]!r} missing from {new_vars}")
        out = {}
        for exp, c in self.terms.items():
            e = [0] * len(new_vars)
            for i in used:
                e[pos[self.vars[i]]] = exp[i]
            out[tuple(e)] = c
        return MPoly._raw(new_vars, out)

    def rename(self, mapping: Mapping[str, str]) -> "MPoly":
        return MPoly._raw(tuple(mapping.get(v, v) for v in self.vars), dict(self.terms))

    # -- output -----------------------------------------------------------

    def __repr__(self) -> str:
        return f"MPoly({self.vars!r}, {str(self)!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                (v if e == 1 else f"{v}^{e}") for v, e in zip(self.vars, exp) if e
            )
            if not mono:
                text = str(c)
            elif c == 1:
                text = mono
            elif c == -1:
                text = "-" + mono
            else:
                coef = str(c)
                if c.denominator != 1:
                    coef = f"({coef})"
                text = f"{coef}*{mono}"
            parts.append(text)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [{"exp": list(e), "coef": str(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MPoly":
        if not isinstance(data, Mapping) or set(data) != {"vars", "terms"}:
            raise AlgebraError("polynomial object must have exactly the keys 'vars' and 'terms'")
        vars = data["vars"]
        if not isinstance(vars, list) or not all(isinstance(v, str) for v in vars):
            raise AlgebraError("'vars' must be a list of strings")
        if len(set(vars)) != len(vars):
            raise AlgebraError("duplicate variable names")
        terms: dict = {}
        for t in data["terms"]:
            if not isinstance(t, Mapping) or set(t) != {"exp", "coef"}:
                raise AlgebraError("each term must have exactly the keys 'exp' and 'coef'")
            if not isinstance(t["coef"], str):
                raise AlgebraError("coefficients must be 'p/q' strings")
            exp = tuple(t["exp"])
            if exp in terms:
                raise AlgebraError(f"duplicate exponent {list(exp)}")
            terms[exp] = Q(t["coef"])
        return cls(vars, terms)


# ---------------------------------------------------------------------------
# division


def _monomial_divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def exact_divide(f: MPoly, g: MPoly) -> MPoly:
    """Return ``q`` with ``f == q * g``; raise :class:`NotDivisible` otherwise."""
    f._check(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return f
    if g.is_constant():
        return f.scale(1 / g.constant_value())
    # cheap degree screen
    for i, v in enumerate(f.vars):
        if max(e[i] for e in f.terms) < max(e[i] for e in g.terms):
            raise NotDivisible(f"degree in {v} too small")
    try:
        return _from_flint(_to_flint(f) / _to_flint(g), f.vars)
    except DomainError:
        raise NotDivisible(f"{g} does not divide {f}") from None


def divides(g: MPoly, f: MPoly) -> bool:
    try:
        exact_divide(f, g)
    except NotDivisible:
        return False
    return True


def ord_divide(f: MPoly, d: MPoly) -> int:
    """Largest ``k`` with ``d**k`` dividing ``f`` (``d`` assumed irreducible)."""
    f._check(d)
    if f.is_zero():
        raise AlgebraError("order of the zero polynomial is undefined")
    if d.is_constant():
        raise AlgebraError("order along a constant is undefined")
    k = 0
    while True:
        try:
            f = exact_divide(f, d)
        except NotDivisible:
            return k
        k += 1


# ---------------------------------------------------------------------------
# gcd


_FLINT_CUTOFF = 24


@lru_cache(maxsize=None)
def _flint_ctx(vars: tuple[str, ...]):
    return flint.fmpq_mpoly_ctx.get(vars, "deglex")


def _to_flint(p: MPoly):
    fq = flint.fmpq
    return _flint_ctx(p.vars).from_dict(
        {e: fq(int(c.numerator), int(c.denominator)) for e, c in p.terms.items()}
    )


def _from_flint(elem, vars: tuple[str, ...]) -> MPoly:
    return MPoly._raw(
        vars, {tuple(int(k) for k in e): mpq(int(c.p), int(c.q)) for e, c in elem.to_dict().items()}
    )


def poly_gcd(f: MPoly, g: MPoly) -> MPoly:
    """Greatest common divisor, normalised to be monic in graded-lex order.

    ``gcd(0, 0)`` is 0.
    """
    f._check(g)
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_constant() or g.is_constant():
        return MPoly.const(1, f.vars)
    h = _from_flint(_to_flint(f).gcd(_to_flint(g)), f.vars)
    return h.monic()


def _univariate_var(f: MPoly, var: str | None) -> str:
    if var is not None:
        return var
    used = [v for v in f.vars if f.involves(v)]
    if len(used) > 1:
        raise AlgebraError(f"{f} is not univariate")
    return used[0] if used else (f.vars[0] if f.vars else "")


def _uni_coeffs(f: MPoly, var: str) -> list[mpq]:
    i = f._index(var)
    out = [mpq(0)] * (f.degree(var) + 1 if f.terms else 0)
    for exp, c in f.terms.items():
        if any(e for j, e in enumerate(exp) if j != i):
            raise AlgebraError(f"{f} is not univariate in {var}")
        out[exp[i]] = c
    return out


def _uni_poly(coeffs: list[mpq], var: str, vars: tuple[str, ...]) -> MPoly:
    i = vars.index(var)
    n = len(vars)
    out = {}
    for k, c in enumerate(coeffs):
        if c:
            e = [0] * n
            e[i] = k
            out[tuple(e)] = c
    return MPoly._raw(vars, out)


def _to_fmpq_poly(f: MPoly, var: str):
    return flint.fmpq_poly([flint.fmpq(int(c.numerator), int(c.denominator)) for c in _uni_coeffs(f, var)])


def _from_fmpq_poly(p, var: str, vars: tuple[str, ...]) -> MPoly:
    return _uni_poly([mpq(int(c.p), int(c.q)) for c in p.coeffs()], var, vars)


def univariate_gcd(f: MPoly, g: MPoly, var: str | None = None) -> MPoly:
    """Monic gcd of two univariate polynomials."""
    f._check(g)
    if var is None:
        used = {v for p in (f, g) for v in p.vars if p.involves(v)}
        if len(used) > 1:
            raise AlgebraError("polynomials are not univariate in a common variable")
        var = used.pop() if used else f.vars[0]
    if f.is_zero() and g.is_zero():
        return MPoly.zero(f.vars)
    h = _to_fmpq_poly(f, var).gcd(_to_fmpq_poly(g, var))
    return _from_fmpq_poly(h, var, f.vars).monic()


def squarefree_data(f: MPoly, var: str | None = None) -> tuple[MPoly, bool]:
    """Squarefree part ``f / gcd(f, f')`` and whether ``f`` is already squarefree."""
    if f.is_zero():
        raise AlgebraError("squarefree part of zero is undefined")
    var = _univariate_var(f, var)
    if f.is_constant():
        return f, True
    g = univariate_gcd(f, f.diff(var), var)
    part = exact_divide(f, g)
    return part, g.degree(var) == 0


def rational_roots(f: MPoly, var: str | None = None) -> list[mpq]:
    """Distinct rational roots of a nonzero univariate polynomial, ascending."""
    if f.is_zero():
        raise AlgebraError("every rational is a root of zero")
    var = _univariate_var(f, var)
    if f.is_constant():
        return []
    roots = []
    for fac, _mult in _to_fmpq_poly(f, var).factor()[1]:
        if fac.degree() == 1:
            b, a = fac.coeffs()
            r = -b / a
            roots.append(mpq(int(r.p), int(r.q)))
    return sorted(set(roots))


# ---------------------------------------------------------------------------
# determinants and resultants


def bareiss_det(matrix: Sequence[Sequence[MPoly]]) -> MPoly:
    """Fraction-free determinant of a square matrix of polynomials."""
    n = len(matrix)
    if n == 0:
        raise AlgebraError("empty matrix")
    vars = matrix[0][0].vars
    m = [list(row) for row in matrix]
    if any(len(row) != n for row in m):
        raise AlgebraError("matrix is not square")
    sign = 1
    prev = MPoly.const(1, vars)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return MPoly.zero(vars)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = exact_divide(num, prev)
            m[i][k] = MPoly.zero(vars)
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def sylvester_matrix(f: MPoly, g: MPoly, var: str) -> list[list[MPoly]]:
    cf = list(reversed(f.coeffs_in(var)))
    cg = list(reversed(g.coeffs_in(var)))
    m, n = len(cf) - 1, len(cg) - 1
    size = m + n
    zero = MPoly.zero(f.vars)
    rows = []
    for i in range(n):
        rows.append([zero] * i + cf + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + cg + [zero] * (size - n - 1 - i))
    return rows


def resultant(f: MPoly, g: MPoly, var: str) -> MPoly:
    """Sylvester resultant of ``f`` and ``g`` eliminating ``var``."""
    f._check(g)
    f._index(var)
    if f.is_zero() or g.is_zero():
        return MPoly.zero(f.vars)
    m, n = f.degree(var), g.degree(var)
    if m == 0 and n == 0:
        raise DegenerateResultant(f"both polynomials are constant in {var}")
    if m == 0:
        return f**n
    if n == 0:
        return g**m
    return bareiss_det(sylvester_matrix(f, g, var))


def discriminant(f: MPoly, var: str) -> MPoly:
    """Discriminant in ``var`` of a polynomial monic in ``var`` of degree >= 2."""
    d = f.degree(var)
    if d < 2:
        raise AlgebraError(f"discriminant needs degree >= 2 in {var}, got {d}")
    if f.leading_coeff(var) != MPoly.const(1, f.vars):
        raise AlgebraError(f"{f} is not monic in {var}")
    r = resultant(f, f.diff(var), var)
    return -r if (d * (d - 1) // 2) % 2 else r


def subresultant1(f: MPoly, g: MPoly, var: str) -> MPoly:
    """Principal first subresultant coefficient of ``f`` and ``g`` in ``var``.

    It is the determinant of the Sylvester matrix with the last two columns
    collapsed in the standard way: rows ``x^{n-2} f .. f, x^{m-2} g .. g``
    restricted to the leading ``m + n - 2`` columns.  ``f`` and ``g`` share
    exactly one root (counted once) iff the resultant vanishes and this does not.
    """
    m, n = f.degree(var), g.degree(var)
    if m < 1 or n < 1 or m + n < 3:
        raise DegenerateResultant("first subresultant needs degrees with m + n >= 3")
    cf = list(reversed(f.coeffs_in(var)))
    cg = list(reversed(g.coeffs_in(var)))
    size = m + n - 1
    zero = MPoly.zero(f.vars)
    rows = []
    for i in range(n - 1):
        rows.append([zero] * i + cf + [zero] * (size - m - 1 - i))
    for i in range(m - 1):
        rows.append([zero] * i + cg + [zero] * (size - n - 1 - i))
    # square (m+n-2) principal block: drop the last column
    square = [row[: m + n - 2] for row in rows]
    return bareiss_det(square)


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """Reduced quotient ``num / den`` of polynomials over a shared variable tuple.

    The denominator is normalised to be monic in graded-lex order; zero is
    stored as ``0 / 1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly | None = None, reduce: bool = True):
        if den is None:
            den = MPoly.const(1, num.vars)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = num, MPoly.const(1, num.vars)
        elif reduce:
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = exact_divide(num, g)
                den = exact_divide(den, g)
        lead = den.leading_term()[1]
        if lead != 1:
            num = num.scale(1 / lead)
            den = den.scale(1 / lead)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, value, vars: Sequence[str]) -> "RationalFunction":
        return cls(MPoly.const(value, vars))

    @classmethod
    def var(cls, name: str, vars: Sequence[str]) -> "RationalFunction":
        return cls(MPoly.var(name, vars))

    @classmethod
    def parse(cls, text: str, vars: Sequence[str]) -> "RationalFunction":
        """Parse ``"num"`` or ``"num / den"`` where the slash splits at top level once."""
        import sympy

        vars = tuple(vars)
        symbols = [sympy.Symbol(v) for v in vars]
        expr = sympy.sympify(text.replace("^", "**"), locals=dict(zip(vars, symbols)), rational=True)
        n, d = sympy.fraction(sympy.together(expr))
        return cls(MPoly.parse(str(n), vars), MPoly.parse(str(d), vars))

    @property
    def vars(self) -> tuple[str, ...]:
        return self.num.vars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def __add__(self, other) -> "RationalFunction":
        other = _as_ratfunc(other, self.vars)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-_as_ratfunc(other, self.vars))

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + other

    def __mul__(self, other) -> "RationalFunction":
        other = _as_ratfunc(other, self.vars)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = _as_ratfunc(other, self.vars)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __pow__(self, k: int) -> "RationalFunction":
        if k < 0:
            return RationalFunction(self.den**-k, self.num**-k)
        return RationalFunction(self.num**k, self.den**k, reduce=False)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, MPoly):
            return self.den == 1 and self.num == other
        if isinstance(other, (int, mpq, Fraction)):
            return self.den == 1 and self.num == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def diff(self, var: str) -> "RationalFunction":
        return RationalFunction(
            self.num.diff(var) * self.den - self.num * self.den.diff(var), self.den * self.den
        )

    def substitute(self, images: Sequence["RationalFunction"]) -> "RationalFunction":
        """Compose with rational functions given for every variable, in order."""
        if len(images) != len(self.vars):
            raise VariableMismatch("wrong number of substitution images")
        target = images[0].vars
        images = [_as_ratfunc(im, target) for im in images]
        common = MPoly.const(1, target)
        for im in images:
            common = _lcm(common, im.den)
        # homogenise numerator and denominator to a common degree in the image denominators
        deg = max(self.num.total_degree(), self.den.total_degree(), 0)
        polys = [exact_divide(im.num * common, im.den) for im in images]

        def homog(p: MPoly) -> MPoly:
            out = MPoly.zero(target)
            for exp, c in p.terms.items():
                term = MPoly.const(c, target) * common ** (deg - sum(exp))
                for poly, e in zip(polys, exp):
                    if e:
                        term = term * poly**e
                out = out + term
            return out

        return RationalFunction(homog(self.num), homog(self.den))

    def evaluate(self, point) -> mpq:
        d = self.den.evaluate(point)
        if not d:
            raise ZeroDivisionError("point lies on the pole locus")
        return self.num.evaluate(point) / d

    def __repr__(self) -> str:
        return f"RationalFunction({self})"

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "RationalFunction":
        if not isinstance(data, Mapping) or set(data) - {"num", "den"} or "num" not in data:
            raise AlgebraError("rational function object must have keys 'num' and optional 'den'")
        num = MPoly.from_json(data["num"])
        den = MPoly.from_json(data["den"]) if "den" in data else None
        return cls(num, den)


def _lcm(a: MPoly, b: MPoly) -> MPoly:
    return exact_divide(a * b, poly_gcd(a, b)).monic()


def _as_ratfunc(value, vars: Sequence[str]) -> RationalFunction:
    if isinstance(value, RationalFunction):
        if value.vars != tuple(vars):
            raise VariableMismatch("rational functions over different variables")
        return value
    if isinstance(value, MPoly):
        return RationalFunction(value)
    return RationalFunction.const(value, vars)
