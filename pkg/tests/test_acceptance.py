"""Acceptance gate: one test per deliverable criterion, one line of output each.

Run with ``pytest -v`` (each criterion shows as its own PASSED/FAILED row) or
``pytest -s`` to see the ACCEPTANCE summary lines as they print.  This file
sorts first in the suite, so the timings measured here start from cold caches.
"""

from __future__ import annotations

import itertools
import time
from fractions import Fraction

from nbar import golden, tr
from nbar.lattice import (
    euler_char,
    nbar_eval,
    nbar_eval_asym,
    nbar_poly,
    positivity_report,
    psi_number,
)
from nbar.quasipoly import QuasiPolynomial, qp_fit
from nbar.exact import Poly, RationalFunction

F = Fraction

# stable cases with 2g - 2 + n ≤ 3: both engines must produce identical
# polynomials; the two χ = 4 cases are optional inside a ten-minute budget
MANDATORY_CROSS = [(0, 3), (1, 1), (0, 4), (1, 2), (0, 5), (1, 3), (2, 1)]
OPTIONAL_CROSS = [(2, 2), (0, 6)]

_cross_start: float | None = None


def test_criterion_1_reference_table():
    t0 = time.monotonic()
    for g, n in golden.EXACT_CASES:
        qp = nbar_poly(g, n)
        want = golden.golden_rows(g, n)
        assert sorted(qp.classes) == sorted(want), f"({g},{n}) parity classes differ"
        for k, row in want.items():
            diffs = golden.diff_class(qp.classes.get(k, {}), row)
            assert not diffs, f"({g},{n}) k={k}: {diffs[:4]}"
    # the flagged table row is compared diff-only: report, never assert
    for g, n in golden.SUSPECT_CASES:
        for k, row in sorted(golden.golden_rows(g, n).items()):
            got = qp_fit(lambda b: nbar_eval(g, n, b), g, n, odd_counts=(k,))
            diffs = golden.diff_class(got.classes.get(k, {}), row)
            print(f"({g},{n}) k={k} flagged row: {len(diffs)} differing coefficient(s)")
            for key, a, b in sorted(set((tuple(sorted(key)), a, b) for key, a, b in diffs)):
                print(f"    exponents {key}: computed {a}, published {b}")
    elapsed = time.monotonic() - t0
    assert elapsed < 120, f"table reproduction took {elapsed:.1f}s"
    print(f"ACCEPTANCE 1 (reference table, {elapsed:.1f}s): PASS")


def test_criterion_2_engine_cross_validation():
    global _cross_start
    _cross_start = time.monotonic()
    for g, n in MANDATORY_CROSS:
        assert tr.tr_correlator(g, n) == nbar_poly(g, n), f"engines disagree at ({g},{n})"
    done = []
    for g, n in OPTIONAL_CROSS:
        elapsed = time.monotonic() - _cross_start
        # generous guard: attempt an optional case only while it can
        # plausibly finish inside the overall ten-minute budget
        if elapsed > (450 if (g, n) == (2, 2) else 300):
            print(f"optional case ({g},{n}) skipped at {elapsed:.0f}s")
            continue
        assert tr.tr_correlator(g, n) == nbar_poly(g, n), f"engines disagree at ({g},{n})"
        done.append((g, n))
    elapsed = time.monotonic() - _cross_start
    assert elapsed < 600, f"cross-validation took {elapsed:.1f}s"
    print(
        f"ACCEPTANCE 2 (engine cross-validation, {len(MANDATORY_CROSS)} mandatory"
        f" + optional {done}, {elapsed:.1f}s): PASS"
    )


def test_criterion_3_desk_checks():
    assert tr.tr_tensor(1, 1) == {((0, 0),): F(5, 12), ((0, 1),): F(1, 48)}
    want_11 = RationalFunction(
        Poly([5, 0, -8, 0, 18, 0, -8, 0, 5]),
        Poly([0, 12]) * Poly([-1, 0, 1]) ** 4,
    )
    assert tr.correlator_rf_1pt(1) == want_11

    tensor = tr.tr_tensor(0, 3)

    def engine(*zs):
        return tr.tensor_value_at(tensor, zs)

    def printed(*zs):
        m = F(1)
        p = F(1)
        for z in zs:
            m *= (z * z - z + 1) / (z - 1) ** 2
            p *= (z * z + z + 1) / (z + 1) ** 2
        return (m + p) / (2 * zs[0] * zs[1] * zs[2])

    assert tr.grid_equal(engine, printed, 3, 8)
    print("ACCEPTANCE 3 (desk checks for the one-handle and three-point correlators): PASS")


def test_criterion_4_string_and_dilaton():
    for g, n in [(0, 3), (1, 1), (0, 4), (1, 2)]:
        assert tr.string_check(g, n), f"string identity fails at ({g},{n})"
        assert tr.dilaton_check(g, n), f"dilaton identity fails at ({g},{n})"
    assert nbar_eval(1, 2, (1, 3)) == F(17, 12)
    qp12 = nbar_poly(1, 2)
    want = QuasiPolynomial(1, 1, {0: {(1,): F(1, 48), (0,): F(5, 12)}})
    assert qp12.pin_even(2) - qp12.pin_even(0) == want
    print("ACCEPTANCE 4 (string and dilaton identities, forms and counts): PASS")


def test_criterion_5_euler_characteristics():
    want = {
        (0, 3): F(1),
        (0, 4): F(2),
        (0, 5): F(7),
        (0, 6): F(34),
        (1, 1): F(5, 12),
        (1, 2): F(1, 2),
        (1, 3): F(17, 12),
        (2, 1): F(247, 1440),
    }
    for (g, n), w in want.items():
        assert euler_char(g, n) == w, f"χ({g},{n})"
    for (g, n), w in want.items():
        if (g, n) == (0, 6):
            qp = qp_fit(lambda b: nbar_eval(g, n, b), g, n, odd_counts=(0,))
        else:
            qp = nbar_poly(g, n)
        assert qp.evaluate((0,) * n) == w, f"count at origin differs from χ({g},{n})"
    print("ACCEPTANCE 5 (Euler characteristics and counts at the origin): PASS")


def test_criterion_6_psi_intersection_numbers():
    assert psi_number(0, (0, 0, 0)) == 1
    assert psi_number(1, (1,)) == F(1, 24)
    assert psi_number(0, (2, 0, 0, 0, 0)) == 1
    assert psi_number(0, (1, 1, 0, 0, 0)) == 2
    assert psi_number(2, (4,)) == F(1, 1152)
    print("ACCEPTANCE 6 (intersection numbers from top coefficients): PASS")


def test_criterion_7_property_suites():
    # parity: counts vanish on odd total boundary length
    for g, n in [(0, 3), (0, 4), (1, 1), (1, 2)]:
        for b in itertools.product(range(0, 4), repeat=n):
            if sum(b) % 2:
                assert nbar_eval(g, n, b) == 0
    # permutation symmetry
    for b in itertools.product(range(0, 4), repeat=4):
        if sum(b) % 2 or sum(b) == 0:
            continue
        vals = {nbar_eval(0, 4, p) for p in set(itertools.permutations(b))}
        assert len(vals) == 1
    # the two recursions agree point by point on full boxes
    for b in itertools.product(range(0, 7), repeat=4):
        if sum(b) % 2 or b[0] == 0:
            continue
        assert nbar_eval_asym(0, 4, b) == nbar_eval(0, 4, b)
    for b in itertools.product(range(0, 7), repeat=2):
        if sum(b) % 2 or b[0] == 0:
            continue
        assert nbar_eval_asym(1, 2, b) == nbar_eval(1, 2, b)
    # basis functions: antiinvariant one-forms, poles confined to {-1, 0, 1}
    for parity in (0, 1):
        for k in range(0, 6):
            f = tr.xi(parity, k)
            assert tr.is_form_antiinvariant(f)
            assert tr.poles_confined(f)
            assert tr.resatzero_check(parity, k)
    print("ACCEPTANCE 7 (parity, symmetry, recursion agreement, basis properties): PASS")


def test_criterion_8_positivity():
    assert positivity_report() == []
    print("ACCEPTANCE 8 (coefficient positivity over the table range): PASS")
