"""Exact univariate polynomial, rational-function and Laurent-series arithmetic.

Everything in this module is exact.  Coefficients are ``int``/
``fractions.Fraction`` values, or — for two-variable work — nested
:class:`RationalFunction` instances used as scalars (a rational function of
``z`` whose coefficients are rational functions of a spectator variable).
There is no floating point anywhere.

The module also provides truncated Laurent series with precision tracking
(:class:`LaurentSeries`), series with a formal logarithm attached
(:class:`LogLaurentSeries`) and a small exact linear solver used by the
fitting routines elsewhere in the package.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

Scalar = Union[int, Fraction, "RationalFunction"]


def invert_scalar(c: Scalar) -> Scalar:
    """Multiplicative inverse of a coefficient, never falling into floats."""
    if isinstance(c, int):
        return Fraction(1, c)
    return 1 / c


class Poly:
    """Dense univariate polynomial over an exact (duck-typed) field.

    Coefficients are stored low degree first and trailing zeroes are
    trimmed, so the zero polynomial has an empty coefficient list.  ``int``
    and ``Fraction`` coefficients mix freely; a :class:`RationalFunction`
    may also appear as a coefficient, which is how functions of two
    variables are represented.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Scalar] = ()):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = cs

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with the convention that the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def valuation(self) -> Optional[int]:
        """Index of the lowest non-zero coefficient (None for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs))

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Union["Poly", Scalar]) -> "Poly":
        if isinstance(other, Poly):
            if self.is_zero or other.is_zero:
                return Poly()
            out: List[Scalar] = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return Poly(out)
        return self.scale(other)

    def __rmul__(self, other: Scalar) -> "Poly":
        return self.scale(other)

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative polynomial power")
        out = Poly([1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, c: Scalar) -> "Poly":
        return Poly([c * a for a in self.coeffs])

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        if not isinstance(other, Poly):
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        qsize = len(rem) - len(other.coeffs) + 1
        q: List[Scalar] = [0] * max(qsize, 0)
        dinv = invert_scalar(other.coeffs[-1])
        while len(rem) >= len(other.coeffs) and rem:
            f = rem[-1] * dinv
            shift = len(rem) - len(other.coeffs)
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - f * c
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return Poly(q), Poly(rem)

    def exact_div(self, other: "Poly") -> "Poly":
        """Division that must leave no remainder."""
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ValueError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        return self.scale(invert_scalar(self.coeffs[-1]))

    def gcd(self, other: "Poly") -> "Poly":
        """Monic greatest common divisor (Euclid's algorithm)."""
        a, b = self, other
        while not b.is_zero:
            a, b = b, divmod(a, b)[1]
        return a.monic()

    # -- calculus and evaluation --------------------------------------------

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: Scalar) -> Scalar:
        acc: Scalar = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shifted(self, alpha: Scalar) -> "Poly":
        """Taylor shift: the polynomial q with q(u) = p(alpha + u)."""
        out: List[Scalar] = []
        cs = list(self.coeffs)
        while cs:
            q: List[Scalar] = []
            acc: Scalar = 0
            for c in reversed(cs):
                acc = acc * alpha + c
                q.append(acc)
            out.append(q.pop())
            q.reverse()
            cs = q
        return Poly(out)

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(f"{c}")
            elif i == 1:
                parts.append(f"({c})*x")
            else:
                parts.append(f"({c})*x^{i}")
        return " + ".join(parts)


def poly_lcm(a: Poly, b: Poly) -> Poly:
    """Monic least common multiple."""
    if a.is_zero or b.is_zero:
        return Poly()
    return (a.exact_div(a.gcd(b)) * b).monic()


class RationalFunction:
    """Quotient of two polynomials in canonical form.

    Canonical form means numerator and denominator are coprime and the
    denominator is monic, so equality is literal equality of the parts.
    The zero function is ``0/1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Union[Poly, Scalar] = 0, den: Union[Poly, Scalar] = 1):
        if not isinstance(num, Poly):
            num = Poly([num])
        if not isinstance(den, Poly):
            den = Poly([den])
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            self.num = Poly()
            self.den = Poly([1])
            return
        g = num.gcd(den)
        if g.degree > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        inv = invert_scalar(den.coeffs[-1])
        self.num = num.scale(inv)
        self.den = den.scale(inv)

    # -- constructors --------------------------------------------------------

    @staticmethod
    def var() -> "RationalFunction":
        """The identity function z."""
        return RationalFunction(Poly([0, 1]))

    @staticmethod
    def const(c: Scalar) -> "RationalFunction":
        return RationalFunction(Poly([c]))

    # -- predicates -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __bool__(self) -> bool:
        return not self.num.is_zero

    def __eq__(self, other: object) -> bool:
        other_rf = _coerce(other)
        if other_rf is None:
            return NotImplemented
        return self.num == other_rf.num and self.den == other_rf.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- field operations -------------------------------------------------------

    def __add__(self, other: object) -> "RationalFunction":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        out = RationalFunction.__new__(RationalFunction)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other: object) -> "RationalFunction":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "RationalFunction":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> "RationalFunction":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "RationalFunction":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other: object) -> "RationalFunction":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(o.num * self.den, o.den * self.num)

    def __pow__(self, e: int) -> "RationalFunction":
        if e < 0:
            return RationalFunction(self.den ** (-e), self.num ** (-e))
        return RationalFunction(self.num ** e, self.den ** e)

    # -- analysis ------------------------------------------------------------

    def __call__(self, x: Scalar) -> Scalar:
        d = self.den(x)
        if not d:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(x) * invert_scalar(d)

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def substitute_inverse(self) -> "RationalFunction":
        """The function z ↦ f(1/z), again as a rational function of z."""
        if self.is_zero:
            return RationalFunction(0)
        m = max(self.num.degree, self.den.degree)

        def rev(p: Poly) -> Poly:
            cs = list(p.coeffs) + [0] * (m + 1 - len(p.coeffs))
            return Poly(list(reversed(cs)))

        return RationalFunction(rev(self.num), rev(self.den))

    def order_at(self, alpha: Scalar) -> int:
        """Order of vanishing at ``alpha``; negative means a pole."""
        if self.is_zero:
            raise ValueError("the zero function has no finite order")
        a = self.num.shifted(alpha).valuation()
        b = self.den.shifted(alpha).valuation()
        assert a is not None and b is not None
        return a - b

    def laurent_at(self, alpha: Scalar, upto: int) -> "LaurentSeries":
        """Laurent expansion around z = alpha in the local variable u = z - alpha.

        Returns a series whose coefficients are exact for exponents from the
        leading order through ``upto`` inclusive.  If ``upto`` is below the
        leading order the series carries no coefficients but still reports
        the correct order through its precision bookkeeping.
        """
        if self.is_zero:
            return LaurentSeries(0, [], None)
        nu = self.num.shifted(alpha)
        de = self.den.shifted(alpha)
        a = nu.valuation()
        b = de.valuation()
        assert a is not None and b is not None
        ord_ = a - b
        length = upto - ord_ + 1
        if length <= 0:
            return LaurentSeries(ord_, [], upto + 1)
        ncs = nu.coeffs[a:]
        dcs = de.coeffs[b:]
        inv0 = invert_scalar(dcs[0])
        out: List[Scalar] = []
        for k in range(length):
            s: Scalar = ncs[k] if k < len(ncs) else 0
            for i in range(1, min(k, len(dcs) - 1) + 1):
                s = s - dcs[i] * out[k - i]
            out.append(s * inv0)
        return LaurentSeries(ord_, out, upto + 1)

    def series_at_zero(self, upto: int) -> "LaurentSeries":
        return self.laurent_at(0, upto)

    def __repr__(self) -> str:
        if self.den == Poly([1]):
            return f"({self.num!r})"
        return f"({self.num!r})/({self.den!r})"


def _coerce(x: object) -> Optional[RationalFunction]:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalFunction(Poly([x]))
    if isinstance(x, Poly):
        return RationalFunction(x)
    return None


class LaurentSeries:
    """Truncated Laurent series in a local variable with precision tracking.

    ``coeffs[i]`` is the coefficient of ``u**(ord + i)``.  Coefficients are
    known exactly for exponents in ``[ord, prec)``; ``prec is None`` means
    the series is exact and all coefficients beyond the stored list are
    zero.  Asking for a coefficient at or beyond a finite ``prec`` is an
    error — that is how truncation bugs fail loudly instead of silently.
    """

    __slots__ = ("ord", "coeffs", "prec")

    def __init__(self, ord_: int, coeffs: Sequence[Scalar], prec: Optional[int]):
        cs = list(coeffs)
        while cs and not cs[0]:
            cs.pop(0)
            ord_ += 1
        if prec is None:
            while cs and not cs[-1]:
                cs.pop()
            if not cs:
                ord_ = 0
        else:
            if len(cs) != prec - ord_ and not (not cs and prec <= ord_):
                raise ValueError("coefficient list does not match precision window")
        self.ord = ord_
        self.coeffs = cs
        self.prec = prec

    @property
    def is_exactly_zero(self) -> bool:
        return not self.coeffs and self.prec is None

    def coeff(self, e: int) -> Scalar:
        if self.prec is not None and e >= self.prec:
            raise ValueError(f"coefficient of u^{e} requested beyond precision {self.prec}")
        if e < self.ord:
            return 0
        i = e - self.ord
        if i >= len(self.coeffs):
            return 0
        return self.coeffs[i]

    @property
    def residue(self) -> Scalar:
        return self.coeff(-1)

    def _window(self, other: "LaurentSeries") -> Tuple[int, Optional[int]]:
        p1, p2 = self.prec, other.prec
        if p1 is None and p2 is None:
            prec = None
        elif p1 is None:
            prec = p2
        elif p2 is None:
            prec = p1
        else:
            prec = min(p1, p2)
        return min(self.ord, other.ord), prec

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        lo, prec = self._window(other)
        if prec is None:
            hi = max(self.ord + len(self.coeffs), other.ord + len(other.coeffs))
        else:
            hi = prec
        out = [self.coeff(e) + other.coeff(e) for e in range(lo, hi)]
        return LaurentSeries(lo, out, prec)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.ord, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def scale(self, c: Scalar) -> "LaurentSeries":
        if not c:
            if self.prec is None:
                return LaurentSeries(0, [], None)
            return LaurentSeries(self.prec, [], self.prec)
        return LaurentSeries(self.ord, [c * a for a in self.coeffs], self.prec)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if self.is_exactly_zero or other.is_exactly_zero:
            return LaurentSeries(0, [], None)
        lo = self.ord + other.ord
        p1, p2 = self.prec, other.prec
        cands = []
        if p1 is not None:
            cands.append(p1 + other.ord)
        if p2 is not None:
            cands.append(p2 + self.ord)
        prec = min(cands) if cands else None
        if prec is None:
            hi = lo + len(self.coeffs) + len(other.coeffs) - 1
        else:
            hi = prec
        out: List[Scalar] = []
        for e in range(lo, hi):
            s: Scalar = 0
            for i in range(self.ord, self.ord + len(self.coeffs)):
                j = e - i
                if j < other.ord or j >= other.ord + len(other.coeffs):
                    continue
                a = self.coeffs[i - self.ord]
                if not a:
                    continue
                s = s + a * other.coeffs[j - other.ord]
            out.append(s)
        return LaurentSeries(lo, out, prec)

    def __repr__(self) -> str:
        terms = [f"({c})u^{self.ord + i}" for i, c in enumerate(self.coeffs) if c]
        tail = "" if self.prec is None else f" + O(u^{self.prec})"
        return " + ".join(terms) + tail if terms else f"0{tail}"


class LogLaurentSeries:
    """A Laurent series plus a formal multiple of the symbol L.

    L stands for the (branch-dependent) value of ``log z`` at the expansion
    centre; which centre is meant is tracked by the caller.  Products in
    which both factors carry a log part never arise in the residue
    computations performed here and are rejected.
    """

    __slots__ = ("plain", "logpart")

    def __init__(self, plain: LaurentSeries, logpart: LaurentSeries):
        self.plain = plain
        self.logpart = logpart

    def __add__(self, other: "LogLaurentSeries") -> "LogLaurentSeries":
        if not isinstance(other, LogLaurentSeries):
            return NotImplemented
        return LogLaurentSeries(self.plain + other.plain, self.logpart + other.logpart)

    def __neg__(self) -> "LogLaurentSeries":
        return LogLaurentSeries(-self.plain, -self.logpart)

    def __mul__(self, other: Union["LogLaurentSeries", LaurentSeries]) -> "LogLaurentSeries":
        if isinstance(other, LaurentSeries):
            return LogLaurentSeries(self.plain * other, self.logpart * other)
        if isinstance(other, LogLaurentSeries):
            s_has = not self.logpart.is_exactly_zero
            o_has = not other.logpart.is_exactly_zero
            if s_has and o_has:
                raise ArithmeticError("product of two log-bearing series")
            return LogLaurentSeries(
                self.plain * other.plain,
                self.logpart * other.plain + self.plain * other.logpart,
            )
        return NotImplemented

    __rmul__ = __mul__

    def residue(self) -> Tuple[Scalar, Scalar]:
        """The u^{-1} coefficient, split as (plain part, coefficient of L)."""
        return self.plain.coeff(-1), self.logpart.coeff(-1)


def log_series(alpha: Scalar, upto: int) -> LogLaurentSeries:
    """Expansion of log z at z = alpha + u for alpha = ±1.

    The constant term is the formal symbol L (zero in truth at alpha = 1,
    a branch choice at alpha = -1); the rest is the exact Mercator tail
    Σ_{m≥1} (-1)^{m+1} u^m / (m alpha^m).
    """
    tail = [Fraction((-1) ** (m - 1), m) * Fraction(1, alpha) ** m for m in range(1, upto + 1)]
    plain = LaurentSeries(1, tail, upto + 1)
    sym = LaurentSeries(0, [1], None)
    return LogLaurentSeries(plain, sym)


def linsolve(matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> List[Scalar]:
    """Solve a square exact linear system by Gaussian elimination.

    Raises ValueError if the matrix is singular.
    """
    n = len(matrix)
    a = [list(row) + [r] for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            raise ValueError("singular linear system")
        a[col], a[piv] = a[piv], a[col]
        inv = invert_scalar(a[col][col])
        a[col] = [inv * v for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]
