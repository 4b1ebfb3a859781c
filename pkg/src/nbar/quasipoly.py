"""Parity-split symmetric quasi-polynomials in the squares of integer arguments.

The counting functions computed by this package are, for each fixed pattern
of argument parities, polynomials in b_1², …, b_n² that are symmetric under
permutations preserving the parity pattern.  A :class:`QuasiPolynomial`
stores one coefficient dictionary per number of odd arguments ("parity
class"); keys list the exponents of b_i² with the odd slots first.  Each
class dictionary is fully expanded: every block permutation of a key is
present with the same coefficient, so lookups never need symmetrization.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .exact import linsolve

ExpKey = Tuple[int, ...]
ClassDict = Dict[ExpKey, Fraction]
XiKey = Tuple[Tuple[int, int], ...]
XiTensor = Dict[XiKey, Fraction]


class QuasiPolynomial:
    """A parity-split polynomial in b_1², …, b_n² with exact coefficients."""

    __slots__ = ("g", "n", "classes")

    def __init__(self, g: int, n: int, classes: Dict[int, ClassDict]):
        self.g = g
        self.n = n
        cleaned: Dict[int, ClassDict] = {}
        for k, d in classes.items():
            if not 0 <= k <= n:
                raise ValueError(f"odd count {k} out of range for n={n}")
            dd = {tuple(key): Fraction(c) for key, c in d.items() if c}
            for key in dd:
                if len(key) != n:
                    raise ValueError(f"exponent key {key} has wrong length for n={n}")
            if dd:
                cleaned[k] = dd
        self.classes = cleaned

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, b: Sequence[int]) -> Fraction:
        """Value at an integer point; arguments may come in any order."""
        if len(b) != self.n:
            raise ValueError(f"expected {self.n} arguments, got {len(b)}")
        ordered = sorted(b, key=lambda v: v % 2, reverse=True)
        k = sum(1 for v in b if v % 2)
        d = self.classes.get(k)
        if not d:
            return Fraction(0)
        total = Fraction(0)
        sq = [v * v for v in ordered]
        for key, c in d.items():
            term = c
            for v2, e in zip(sq, key):
                if e:
                    term *= Fraction(v2) ** e
            total += term
        return total

    def coefficient(self, odd_count: int, exponents: Sequence[int]) -> Fraction:
        """Coefficient of ∏ b_i^{2 e_i} in the given parity class (odd slots first)."""
        return self.classes.get(odd_count, {}).get(tuple(exponents), Fraction(0))

    # -- algebra ----------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuasiPolynomial):
            return NotImplemented
        return self.n == other.n and self.classes == other.classes

    def __hash__(self) -> int:
        return hash((self.n, tuple(sorted((k, tuple(sorted(d.items()))) for k, d in self.classes.items()))))

    def __sub__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        if self.n != other.n:
            raise ValueError("cannot combine quasi-polynomials in different arities")
        out: Dict[int, ClassDict] = {}
        for k in set(self.classes) | set(other.classes):
            d: ClassDict = dict(self.classes.get(k, {}))
            for key, c in other.classes.get(k, {}).items():
                d[key] = d.get(key, Fraction(0)) - c
            out[k] = d
        return QuasiPolynomial(self.g, self.n, out)

    def scale(self, c) -> "QuasiPolynomial":
        c = Fraction(c)
        return QuasiPolynomial(
            self.g, self.n,
            {k: {key: c * v for key, v in d.items()} for k, d in self.classes.items()},
        )

    @property
    def is_zero(self) -> bool:
        return not self.classes

    # -- pinning one argument ----------------------------------------------------

    def pin_odd(self, value: int) -> "QuasiPolynomial":
        """Substitute an odd integer for one odd-parity slot.

        Returns the resulting quasi-polynomial in the remaining n-1 arguments.
        Parity classes with no odd slot do not survive the substitution.
        """
        if value % 2 == 0:
            raise ValueError("pin_odd needs an odd value")
        v2 = Fraction(value * value)
        out: Dict[int, ClassDict] = {}
        for k, d in self.classes.items():
            if k == 0:
                continue
            nd = out.setdefault(k - 1, {})
            for key, c in d.items():
                nkey = key[1:]
                nd[nkey] = nd.get(nkey, Fraction(0)) + c * v2 ** key[0]
        return QuasiPolynomial(self.g, self.n - 1, out)

    def pin_even(self, value: int) -> "QuasiPolynomial":
        """Substitute an even integer for one even-parity slot."""
        if value % 2:
            raise ValueError("pin_even needs an even value")
        v2 = Fraction(value * value)
        out: Dict[int, ClassDict] = {}
        for k, d in self.classes.items():
            if k == self.n:
                continue
            nd = out.setdefault(k, {})
            for key, c in d.items():
                nkey = key[:-1]
                nd[nkey] = nd.get(nkey, Fraction(0)) + c * v2 ** key[-1]
        return QuasiPolynomial(self.g, self.n - 1, out)

    def __repr__(self) -> str:
        sizes = {k: len(d) for k, d in sorted(self.classes.items())}
        return f"QuasiPolynomial(g={self.g}, n={self.n}, classes={sizes})"


# -- serialization ----------------------------------------------------------------


def qp_serialize(qp: QuasiPolynomial) -> dict:
    """Plain-data form of a quasi-polynomial, suitable for JSON."""
    classes = []
    for k in sorted(qp.classes):
        terms = [
            {"exponents": list(key), "coeff": str(c)}
            for key, c in sorted(qp.classes[k].items())
        ]
        classes.append({"odd_count": k, "terms": terms})
    return {"g": qp.g, "n": qp.n, "classes": classes}


def qp_to_json(qp: QuasiPolynomial) -> str:
    return json.dumps(qp_serialize(qp), indent=2)


def qp_parse(data: object) -> QuasiPolynomial:
    """Rebuild a quasi-polynomial from plain data, with positional diagnostics."""

    def fail(path: str, msg: str):
        raise ValueError(f"{path}: {msg}")

    if not isinstance(data, dict):
        fail("$", f"expected object, got {type(data).__name__}")
    for field in ("g", "n", "classes"):
        if field not in data:
            fail("$", f"missing field {field!r}")
    g, n, classes = data["g"], data["n"], data["classes"]
    if not isinstance(g, int) or g < 0:
        fail("$.g", f"expected non-negative integer, got {g!r}")
    if not isinstance(n, int) or n < 1:
        fail("$.n", f"expected positive integer, got {n!r}")
    if not isinstance(classes, list):
        fail("$.classes", f"expected list, got {type(classes).__name__}")
    out: Dict[int, ClassDict] = {}
    for i, cls in enumerate(classes):
        path = f"$.classes[{i}]"
        if not isinstance(cls, dict):
            fail(path, f"expected object, got {type(cls).__name__}")
        if "odd_count" not in cls or "terms" not in cls:
            fail(path, "missing field 'odd_count' or 'terms'")
        k = cls["odd_count"]
        if not isinstance(k, int) or not 0 <= k <= n:
            fail(f"{path}.odd_count", f"expected integer in [0, {n}], got {k!r}")
        if k in out:
            fail(f"{path}.odd_count", f"duplicate class {k}")
        terms = cls["terms"]
        if not isinstance(terms, list):
            fail(f"{path}.terms", f"expected list, got {type(terms).__name__}")
        d: ClassDict = {}
        for j, term in enumerate(terms):
            tpath = f"{path}.terms[{j}]"
            if not isinstance(term, dict) or "exponents" not in term or "coeff" not in term:
                fail(tpath, "expected object with 'exponents' and 'coeff'")
            exps = term["exponents"]
            if (
                not isinstance(exps, list)
                or len(exps) != n
                or not all(isinstance(e, int) and e >= 0 for e in exps)
            ):
                fail(f"{tpath}.exponents", f"expected list of {n} non-negative integers, got {exps!r}")
            raw = term["coeff"]
            if not isinstance(raw, str):
                fail(f"{tpath}.coeff", f"expected rational string like '5/12', got {raw!r}")
            try:
                c = Fraction(raw)
            except (ValueError, ZeroDivisionError):
                fail(f"{tpath}.coeff", f"not a rational number: {raw!r}")
            key = tuple(exps)
            if key in d:
                fail(f"{tpath}.exponents", f"duplicate exponent key {key}")
            d[key] = c
        out[k] = d
    return QuasiPolynomial(g, n, out)


def qp_from_json(text: str) -> QuasiPolynomial:
    return qp_parse(json.loads(text))


# -- basis-coordinate tensors -------------------------------------------------------


def qp_to_xi_tensor(qp: QuasiPolynomial) -> XiTensor:
    """Coefficients in the per-slot basis indexed by (parity, exponent).

    The tensor assigns to each slot of the correlator a parity bit and an
    exponent of b²; it is the fully expanded (slot-ordered) view of the
    block-symmetric class dictionaries.
    """
    n = qp.n
    tensor: XiTensor = {}
    for k, d in qp.classes.items():
        for odd_slots in itertools.combinations(range(n), k):
            odd_set = set(odd_slots)
            even_slots = [i for i in range(n) if i not in odd_set]
            for key, c in d.items():
                entry: List[Tuple[int, int]] = [(0, 0)] * n
                for j, s in enumerate(odd_slots):
                    entry[s] = (1, key[j])
                for j, s in enumerate(even_slots):
                    entry[s] = (0, key[k + j])
                tensor[tuple(entry)] = c
    return tensor


def qp_from_xi_tensor(g: int, n: int, tensor: XiTensor) -> QuasiPolynomial:
    """Inverse of :func:`qp_to_xi_tensor`; checks slot-permutation symmetry."""
    classes: Dict[int, ClassDict] = {}
    for key, c in tensor.items():
        if len(key) != n:
            raise ValueError(f"tensor key {key} has wrong arity for n={n}")
        if not c:
            continue
        odd = [kk for p, kk in key if p == 1]
        even = [kk for p, kk in key if p == 0]
        k = len(odd)
        exps = tuple(odd + even)
        d = classes.setdefault(k, {})
        if exps in d and d[exps] != c:
            raise ValueError(
                f"tensor is not slot-symmetric: class {k} key {exps} has conflicting "
                f"coefficients {d[exps]} and {c}"
            )
        d[exps] = c
    qp = QuasiPolynomial(g, n, classes)
    # every block permutation of every key must be present with equal weight
    for k, d in qp.classes.items():
        for key, c in d.items():
            for op in set(itertools.permutations(key[:k])):
                for ep in set(itertools.permutations(key[k:])):
                    if d.get(op + ep) != c:
                        raise ValueError(
                            f"tensor is not slot-symmetric: class {k} misses permutation "
                            f"{op + ep} of {key}"
                        )
    # and re-expanding must reproduce the input exactly, so that no slot
    # placement of any key was silently absent
    given = {key: Fraction(c) for key, c in tensor.items() if c}
    if qp_to_xi_tensor(qp) != given:
        raise ValueError("tensor is not slot-symmetric: expansion mismatch")
    return qp


# -- exact fitting --------------------------------------------------------------------


def qp_fit(
    func: Callable[[Tuple[int, ...]], Fraction],
    g: int,
    n: int,
    odd_counts: Optional[Iterable[int]] = None,
    degree: Optional[int] = None,
) -> QuasiPolynomial:
    """Fit the parity classes of a symmetric quasi-polynomial from exact values.

    ``func`` is evaluated on grids of strictly positive integers of each
    parity pattern.  The per-variable degree bound (in b²) defaults to
    3g - 3 + n.  Every class is fitted on a full grid and then re-checked
    on two extra nodes per variable; any discrepancy raises, so a returned
    value is certified to agree with ``func`` on the whole verification box.
    """
    D = degree if degree is not None else 3 * g - 3 + n
    if D < 0:
        raise ValueError(f"degree bound {D} is negative")
    odd_nodes = [2 * i + 1 for i in range(D + 3)]
    even_nodes = [2 * i + 2 for i in range(D + 3)]
    ks = list(odd_counts) if odd_counts is not None else list(range(n + 1))

    cache: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Fraction] = {}

    def value(b: Tuple[int, ...], k: int) -> Fraction:
        key = (tuple(sorted(b[:k])), tuple(sorted(b[k:])))
        if key not in cache:
            cache[key] = Fraction(func(key[0] + key[1]))
        return cache[key]

    classes: Dict[int, ClassDict] = {}
    for k in ks:
        nodes = [odd_nodes if i < k else even_nodes for i in range(n)]
        fit_nodes = [ns[: D + 1] for ns in nodes]

        def value_at(idx: Tuple[int, ...], _k=k, _fit=fit_nodes) -> Fraction:
            b = tuple(_fit[i][j] for i, j in enumerate(idx))
            return value(b, _k)

        fitted = _interp_box(fit_nodes, value_at)
        # verification over block-sorted representatives of the full box
        for odd_part in itertools.combinations_with_replacement(odd_nodes, k):
            for even_part in itertools.combinations_with_replacement(even_nodes, n - k):
                b = odd_part + even_part
                got = _eval_dict(fitted, b)
                want = value(b, k)
                if got != want:
                    raise ValueError(
                        f"fit for class {k} fails verification at b={b}: "
                        f"fitted {got}, actual {want}"
                    )
        # the grid and values are block-symmetric, so the interpolant must be too
        for key, c in fitted.items():
            for op in set(itertools.permutations(key[:k])):
                for ep in set(itertools.permutations(key[k:])):
                    if fitted.get(op + ep, Fraction(0)) != c:
                        raise ValueError(f"fitted class {k} is not block-symmetric at {key}")
        if any(fitted.values()):
            classes[k] = fitted
    return QuasiPolynomial(g, n, classes)


def _interp_box(nodes: List[List[int]], value_at: Callable[[Tuple[int, ...]], Fraction]) -> ClassDict:
    """Iterated exact univariate interpolation in the squared variables."""
    return _interp_rec(nodes, value_at, ())


def _interp_rec(
    nodes: List[List[int]],
    value_at: Callable[[Tuple[int, ...]], Fraction],
    prefix: Tuple[int, ...],
) -> ClassDict:
    d = len(prefix)
    if d == len(nodes):
        return {(): value_at(prefix)}
    subs = [_interp_rec(nodes, value_at, prefix + (i,)) for i in range(len(nodes[d]))]
    xs = [Fraction(b * b) for b in nodes[d]]
    vander = [[x ** e for e in range(len(xs))] for x in xs]
    tails = set()
    for s in subs:
        tails.update(s)
    out: ClassDict = {}
    for tail in tails:
        vals = [s.get(tail, Fraction(0)) for s in subs]
        coeffs = linsolve(vander, vals)
        for e, c in enumerate(coeffs):
            if c:
                out[(e,) + tail] = c
    return out


def _eval_dict(d: ClassDict, b: Sequence[int]) -> Fraction:
    total = Fraction(0)
    sq = [v * v for v in b]
    for key, c in d.items():
        term = c
        for v2, e in zip(sq, key):
            if e:
                term *= Fraction(v2) ** e
        total += term
    return total
