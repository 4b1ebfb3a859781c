"""Lattice point counts of moduli spaces and the invariants derived from them.

The central object is the count N̄_{g,n}(b_1, …, b_n), defined for a stable
pair (g, n) and non-negative integer boundary parameters.  It vanishes when
b_1 + … + b_n is odd, and for fixed parities it is a symmetric polynomial
in the b_i² of degree 3g - 3 + n.  Two independent evaluators are provided:
a fully symmetric recursion (the workhorse) and an asymmetric one rooted in
the first argument (used for cross-checks).  On top of these sit the
polynomial fit, the orbifold Euler characteristics reached at b = 0, the
intersection numbers read off the top coefficients, and a scan for negative
stored coefficients.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .quasipoly import QuasiPolynomial, qp_fit

HALF = Fraction(1, 2)


def is_stable(g: int, n: int) -> bool:
    return g >= 0 and n >= 1 and 2 * g - 2 + n > 0


def _check_stable(g: int, n: int) -> None:
    if not is_stable(g, n):
        raise ValueError(f"(g, n) = ({g}, {n}) is not stable")


def br(p: int) -> int:
    """The weight [p]: p for positive p, and 1 at p = 0."""
    return p if p else 1


# -- the symmetric recursion ---------------------------------------------------------

_MEMO: Dict[Tuple[int, int, Tuple[int, ...]], Fraction] = {}
_ZERO_MEMO: Dict[Tuple[int, int], Fraction] = {}


def nbar_eval(g: int, n: int, b: Sequence[int]) -> Fraction:
    """The count N̄_{g,n}(b) for non-negative integers b, by the symmetric recursion.

    The all-zero point is excluded here because its value is defined by
    polynomial continuation; use ``nbar_poly(g, n).evaluate(b)`` for it.
    """
    _check_stable(g, n)
    if len(b) != n:
        raise ValueError(f"expected {n} boundary parameters, got {len(b)}")
    if any(v < 0 or v != int(v) for v in b):
        raise ValueError("boundary parameters must be non-negative integers")
    b = tuple(int(v) for v in b)
    if not any(b):
        raise ValueError(
            "the value at b = 0 is defined by polynomial continuation; "
            "use nbar_poly(g, n) and evaluate it at zero"
        )
    return _val(g, n, b)


def _val(g: int, n: int, b: Tuple[int, ...]) -> Fraction:
    """Inner evaluator: assumes a stable (g, n) and non-negative b."""
    if sum(b) % 2:
        return Fraction(0)
    if not any(b):
        return _zero_value(g, n)
    if (g, n) == (0, 3):
        return Fraction(1)
    if (g, n) == (1, 1):
        return Fraction(b[0] * b[0] + 20, 48)
    key = (g, n, tuple(sorted(b)))
    hit = _MEMO.get(key)
    if hit is not None:
        return hit
    out = _recurse(g, n, key[2])
    _MEMO[key] = out
    return out


def _recurse(g: int, n: int, b: Tuple[int, ...]) -> Fraction:
    total_b = sum(b)
    first = Fraction(0)
    for i, j in itertools.combinations(range(n), 2):
        rest = b[:i] + b[i + 1:j] + b[j + 1:]
        m = b[i] + b[j]
        for q in range(2, m + 1, 2):
            p = m - q
            first += br(p) * q * _val(g, n - 1, (p,) + rest)
    second = Fraction(0)
    for i in range(n):
        rest = b[:i] + b[i + 1:]
        for r in range(2, b[i] + 1, 2):
            for p in range(b[i] - r + 1):
                q = b[i] - r - p
                w = br(p) * br(q) * r
                inner = Fraction(0)
                if g >= 1:
                    inner += _val(g - 1, n + 1, (p, q) + rest)
                for g1 in range(g + 1):
                    g2 = g - g1
                    for mask in range(1 << len(rest)):
                        part_i = tuple(v for t, v in enumerate(rest) if mask >> t & 1)
                        part_j = tuple(v for t, v in enumerate(rest) if not mask >> t & 1)
                        if not is_stable(g1, len(part_i) + 1) or not is_stable(g2, len(part_j) + 1):
                            continue
                        inner += _val(g1, len(part_i) + 1, (p,) + part_i) * _val(
                            g2, len(part_j) + 1, (q,) + part_j
                        )
                second += w * inner
    return (first + HALF * second) / total_b


def _zero_value(g: int, n: int) -> Fraction:
    """Value of the polynomial continuation at b = 0 (all arguments even)."""
    key = (g, n)
    hit = _ZERO_MEMO.get(key)
    if hit is None:
        hit = nbar_poly(g, n).evaluate((0,) * n)
        _ZERO_MEMO[key] = hit
    return hit


# -- the asymmetric recursion ----------------------------------------------------------


def nbar_eval_asym(g: int, n: int, b: Sequence[int]) -> Fraction:
    """The same count via the recursion rooted in the first argument.

    Requires b_1 > 0.  Inner references go through the shared symmetric
    evaluator, so agreement with :func:`nbar_eval` exercises exactly the
    outermost step of this alternative recursion.
    """
    _check_stable(g, n)
    if len(b) != n:
        raise ValueError(f"expected {n} boundary parameters, got {len(b)}")
    b = tuple(int(v) for v in b)
    if any(v < 0 for v in b):
        raise ValueError("boundary parameters must be non-negative integers")
    if sum(b) % 2:
        return Fraction(0)
    if b[0] <= 0:
        raise ValueError("the asymmetric recursion needs a positive first argument")
    if (g, n) == (0, 3):
        return Fraction(1)
    if (g, n) == (1, 1):
        return Fraction(b[0] * b[0] + 20, 48)
    b1 = b[0]
    rhs = Fraction(0)
    for j in range(1, n):
        rest = b[1:j] + b[j + 1:]
        m = b1 + b[j]
        for q in range(1, m + 1):
            rhs += br(m - q) * q * _val(g, n - 1, (m - q,) + rest)
        diff = b1 - b[j]
        if diff:
            sgn = 1 if diff > 0 else -1
            m = abs(diff)
            for q in range(1, m + 1):
                rhs += sgn * br(m - q) * q * _val(g, n - 1, (m - q,) + rest)
    tail = b[1:]
    for r in range(1, b1 + 1):
        for p in range(b1 - r + 1):
            q = b1 - r - p
            w = br(p) * br(q) * r
            inner = Fraction(0)
            if g >= 1:
                inner += _val(g - 1, n + 1, (p, q) + tail)
            for g1 in range(g + 1):
                g2 = g - g1
                for mask in range(1 << len(tail)):
                    part_i = tuple(v for t, v in enumerate(tail) if mask >> t & 1)
                    part_j = tuple(v for t, v in enumerate(tail) if not mask >> t & 1)
                    if not is_stable(g1, len(part_i) + 1) or not is_stable(g2, len(part_j) + 1):
                        continue
                    inner += _val(g1, len(part_i) + 1, (p,) + part_i) * _val(
                        g2, len(part_j) + 1, (q,) + part_j
                    )
            rhs += w * inner
    return rhs / (2 * b1)


# -- polynomial form ----------------------------------------------------------------------

_POLY_MEMO: Dict[Tuple[int, int, str], QuasiPolynomial] = {}


def nbar_poly(g: int, n: int, engine: str = "comb") -> QuasiPolynomial:
    """The full parity-split polynomial form of N̄_{g,n}.

    ``engine`` selects how values are produced: ``comb`` for the symmetric
    recursion, ``comb-asym`` for the asymmetric one, ``tr`` for the
    residue-based recursion on the spectral curve.
    """
    _check_stable(g, n)
    key = (g, n, engine)
    hit = _POLY_MEMO.get(key)
    if hit is not None:
        return hit
    if engine == "comb":
        qp = qp_fit(lambda b: _val(g, n, b), g, n)
    elif engine == "comb-asym":
        qp = qp_fit(lambda b: nbar_eval_asym(g, n, b), g, n)
    elif engine == "tr":
        from . import tr

        qp = tr.tr_correlator(g, n)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    _POLY_MEMO[key] = qp
    return qp


def clear_caches() -> None:
    """Drop all in-memory memo tables (mainly for isolating benchmarks)."""
    _MEMO.clear()
    _ZERO_MEMO.clear()
    _POLY_MEMO.clear()
    _EULER_MEMO.clear()


# -- Euler characteristics ------------------------------------------------------------------

_EULER_SEEDS: Dict[Tuple[int, int], Fraction] = {
    (0, 1): Fraction(0),
    (0, 2): Fraction(1),
    (1, 1): Fraction(5, 12),
    (2, 1): Fraction(247, 1440),
}

_EULER_MEMO: Dict[Tuple[int, int], Fraction] = {}


def euler_char(g: int, n: int) -> Fraction:
    """Orbifold Euler characteristic of the compactified moduli space.

    Computed by removing one puncture at a time down to the seeded one-point
    (and unstable) values.  One-point values are only seeded for g ≤ 2, so
    higher genus with n = 1 is out of reach of this recursion and raises.
    """
    if g < 0 or n < 1:
        raise ValueError(f"(g, n) = ({g}, {n}) is not a valid pair")
    seeded = _EULER_SEEDS.get((g, n))
    if seeded is not None:
        return seeded
    if n == 1:
        raise ValueError(f"one-point Euler characteristic is only seeded for g <= 2, got g={g}")
    key = (g, n)
    hit = _EULER_MEMO.get(key)
    if hit is not None:
        return hit
    m = n - 1
    total = (2 - 2 * g - m) * euler_char(g, m)
    if g >= 1:
        total += HALF * euler_char(g - 1, m + 2)
    for g1 in range(g + 1):
        g2 = g - g1
        for i in range(m + 1):
            j = m - i
            # factors at (0, 1) contribute nothing and must not be expanded
            if (g1 == 0 and i == 0) or (g2 == 0 and j == 0):
                continue
            total += (
                HALF
                * _binom(m, i)
                * euler_char(g1, i + 1)
                * euler_char(g2, j + 1)
            )
    _EULER_MEMO[key] = total
    return total


def _binom(m: int, i: int) -> int:
    out = 1
    for t in range(i):
        out = out * (m - t) // (t + 1)
    return out


# -- intersection numbers ---------------------------------------------------------------------


def psi_number(g: int, alphas: Sequence[int]) -> Fraction:
    """Intersection number ⟨ψ_1^{a_1} ⋯ ψ_n^{a_n}⟩ on the (g, n) moduli space.

    Read off the top-degree coefficients of the count polynomial: for
    Σ a_i = 3g - 3 + n the coefficient of ∏ b_i^{2 a_i} in every parity
    class equals the intersection number divided by 2^{5g-6+2n} ∏ a_i!.
    All classes and slot placements are required to agree.  For off-top
    total degree the number is zero by definition.
    """
    n = len(alphas)
    _check_stable(g, n)
    alphas = tuple(int(a) for a in alphas)
    if any(a < 0 for a in alphas):
        raise ValueError("psi exponents must be non-negative")
    if sum(alphas) != 3 * g - 3 + n:
        return Fraction(0)
    qp = nbar_poly(g, n)
    seen: List[Fraction] = []
    for k, d in sorted(qp.classes.items()):
        vals = {d.get(perm, Fraction(0)) for perm in set(itertools.permutations(alphas))}
        if len(vals) != 1:
            raise AssertionError(
                f"top coefficients disagree across placements in class {k}: {sorted(vals)}"
            )
        seen.append(vals.pop())
    if not seen:
        raise AssertionError("count polynomial has no parity classes")
    if len(set(seen)) != 1:
        raise AssertionError(f"top coefficients disagree across parity classes: {seen}")
    scale = Fraction(2) ** (5 * g - 6 + 2 * n)
    for a in alphas:
        scale *= _factorial(a)
    return seen[0] * scale


def _factorial(a: int) -> int:
    out = 1
    for t in range(2, a + 1):
        out *= t
    return out


# -- coefficient positivity --------------------------------------------------------------------


def positivity_report(
    cases: Optional[Iterable[Tuple[int, int]]] = None,
) -> List[Tuple[int, int, int, Tuple[int, ...], Fraction]]:
    """All negative stored coefficients over the given (g, n) cases.

    Returns tuples (g, n, odd_count, exponents, coefficient).  An empty
    report means every stored coefficient in range is non-negative.
    """
    if cases is None:
        cases = [(0, 3), (1, 1), (0, 4), (1, 2), (0, 5), (1, 3), (2, 1)]
    found = []
    for g, n in cases:
        qp = nbar_poly(g, n)
        for k, d in sorted(qp.classes.items()):
            for key, c in sorted(d.items()):
                if c < 0:
                    found.append((g, n, k, key, c))
    return found
