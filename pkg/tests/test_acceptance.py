"""Acceptance criteria 1-9, one pass/fail line each.

Run under pytest (``pytest -m acceptance -s``) or directly with
``python tests/test_acceptance.py``.
"""
import os
import sys
import time
from fractions import Fraction
from math import factorial

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from _builders import (ACCEPTANCE_LINES, PRIMES, rand_presentation,  # noqa: E402
                       rand_reducible, rand_scalar, rand_series, seeded)
from tempered.derham_cech import (AlgebraModel, CoverSpec, cech_de_rham,  # noqa: E402
                                  cohomology_dims, compare_weak_fibration,
                                  de_rham_complex, format_cover, parse_cover,
                                  projective_line)
from tempered.growth_series import (GrowthSeries, SeriesSpec, divide_diagonal,  # noqa: E402
                                    divide_linear, format_series, gauss_norm,
                                    mul, norm_weighted, parse_series)
from tempered.ode_solver import (CONSISTENT, NOT_MET, DiffSystem,  # noqa: E402
                                 cauchy_solve, format_system, parse_system,
                                 transfer_experiment)
from tempered.padic_arith import abs_value  # noqa: E402
from tempered.tube_engine import (KoszulVector, Relation, TubePresentation,  # noqa: E402
                                  change_presentation, format_presentation,
                                  format_relation, format_vector, koszul_reduce,
                                  parse_presentation, parse_relation,
                                  parse_vector, phi_apply, psi_apply)

pytestmark = pytest.mark.acceptance
F = Fraction


def record(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def uni(p, hi, coeffs, var="t"):
    return GrowthSeries(SeriesSpec.uniform(p, var, hi), coeffs)


# -- 1 ---------------------------------------------------------------------------------

def check_norm_laws(count=10_000):
    rng = seeded(1)
    start = time.perf_counter()
    bad = 0
    for _ in range(count // 2):
        p = rng.choice(PRIMES)
        if rng.random() < 0.8:
            spec = SeriesSpec.uniform(p, "t", rng.randint(0, 64))
        else:
            spec = SeriesSpec.uniform(p, ("x", "y"), rng.randint(0, 7))
        f, g = rand_series(rng, spec, 0.4), rand_series(rng, spec, 0.4)
        fg = mul(f, g)
        for n in range(3):
            nf, ng = norm_weighted(f, n), norm_weighted(g, n)
            bad += norm_weighted(f, n + 1) > nf
            bad += norm_weighted(fg, 2 * n) > nf * ng
        a, b = rand_scalar(rng, p), rand_scalar(rng, p)
        ra, rb = abs_value(a, p), abs_value(b, p)
        bad += abs_value(a + b, p) > max(ra, rb)
        bad += abs_value(a * b, p) != ra * rb
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 30
    return ok, f"{count} random series, {bad} violations, {elapsed:.1f}s"


# -- 2 ---------------------------------------------------------------------------------

def check_divisions(count=1000):
    rng = seeded(2)
    bad = 0
    for k in range(count):
        p = rng.choice(PRIMES)
        n = rng.randint(0, 3)
        if k % 2:
            N, M = rng.randint(1, 6), rng.randint(0, 6)
            f = rand_series(rng, SeriesSpec(p, ("t", "x"), ((0, N), (0, M))), 0.5)
            q, cert = divide_diagonal(f, n)
            bad += not cert.holds
            bad += cert.quotient_norm != norm_weighted(q, 2 * n)
            # (t - x) q = f(t, x) - f(x, x)
            wide = q.spec
            big = SeriesSpec(p, ("t", "x"), ((0, N), (0, M + N)))
            lin = GrowthSeries(big, {(1, 0): 1, (0, 1): -1})
            expected = dict(f.coeffs)
            for (i, j), c in f.coeffs.items():
                expected[(0, i + j)] = expected.get((0, i + j), 0) - c
            bad += mul(lin, q.embed(big)) != GrowthSeries(big, expected)
            bad += wide.window != ((0, max(N - 1, 0)), (0, M + max(N - 1, 0)))
        else:
            hi = rng.randint(0, 30)
            h = rand_series(rng, SeriesSpec.uniform(p, "t", hi), 0.6)
            g = rng.choice([1, -1, 1 + p, F(1, 1 + p)])
            gp = rng.choice([1, -1, 2 * p + 1, F(-1, 1 + p)])
            spec = SeriesSpec.uniform(p, "t", hi + 1)
            lin = GrowthSeries(spec, {(1,): g, (0,): -gp})
            hp = mul(lin, h.embed(spec))
            out, cert = divide_linear(hp, g, gp, tuple(range(4)))
            bad += out != h.embed(spec)
            bad += not cert.holds
    return bad == 0, f"{count} instances, {bad} violations"


# -- 3 ---------------------------------------------------------------------------------

def check_cauchy():
    bad = 0
    for c in (F(1), F(3), F(-1, 2), F(5, 7)):
        sol = cauchy_solve(DiffSystem.scalar(uni(3, 31, {(0,): c})), 32)
        bad += [M[0][0] for M in sol.origin] != [c ** m / factorial(m) for m in range(33)]
    geo = cauchy_solve(DiffSystem.scalar(uni(2, 31, {(i,): 1 for i in range(32)})), 32)
    bad += [M[0][0] for M in geo.origin] != [1] * 33
    rng = seeded(3)
    for _ in range(100):
        p, m, deg = rng.choice(PRIMES), rng.randint(1, 3), rng.randint(0, 4)
        W = 10
        spec = SeriesSpec.uniform(p, "t", W)
        G = [[GrowthSeries(spec, {(k,): rand_scalar(rng, p, 2) for k in range(deg + 1)
                                  if rng.random() < 0.6}) for _ in range(m)] for _ in range(m)]
        sol = cauchy_solve(DiffSystem(G), W + 1, check=False)
        Y = sol.origin
        coeffs = [[[G[r][c].coeff((k,)) for c in range(m)] for r in range(m)]
                  for k in range(W + 1)]
        # (k+1) Y_{k+1} = sum_j G_j Y_{k-j} for k <= N - 1
        for k in range(W + 1):
            for r in range(m):
                for c in range(m):
                    rhs = sum(coeffs[j][r][s] * Y[k - j][s][c]
                              for j in range(k + 1) for s in range(m))
                    bad += (k + 1) * Y[k + 1][r][c] != rhs
    return bad == 0, f"constant and geometric closed forms through degree 32; " \
                     f"100 random systems, {bad} violations"


# -- 4 ---------------------------------------------------------------------------------

def check_transfer():
    bad = 0
    rng = seeded(4)
    for _ in range(12):
        p, m = rng.choice(PRIMES), rng.randint(1, 2)
        spec = SeriesSpec.uniform(p, "t", 31)
        G = [[GrowthSeries(spec, {(k,): rand_scalar(rng, p, 1) for k in range(5)
                                  if rng.random() < 0.5}) for _ in range(m)] for _ in range(m)]
        sol = cauchy_solve(DiffSystem(G), 32)
        for Gm in sol.series:
            for row in Gm:
                for h in row:
                    bad += abs_value(h.constant_term(), p) > gauss_norm(h)
    zero = uni(2, 31, {})
    geo = uni(2, 31, {(i,): 1 for i in range(32)})
    geo63 = uni(2, 63, {(i,): 1 for i in range(64)})
    z63 = uni(2, 63, {})
    suite = {"zero": DiffSystem.scalar(zero), "geometric": DiffSystem.scalar(geo),
             "log-type": DiffSystem([[z63, geo63], [z63, z63]])}
    parts = []
    for name, sys_ in suite.items():
        rep = transfer_experiment(sys_, sys_.max_order)
        ok = rep.verdict == CONSISTENT and rep.pointwise
        bad += not ok
        parts.append(f"{name} {rep.origin.describe()}<={rep.generic.describe()}")
    exp = transfer_experiment(DiffSystem.scalar(uni(2, 31, {(0,): 1})), 32)
    bad += exp.verdict != NOT_MET
    return bad == 0, "; ".join(parts) + f"; exp: {exp.verdict}"


# -- 5 ---------------------------------------------------------------------------------

def check_koszul(count=200):
    rng = seeded(5)
    bad = 0
    for k in range(count):
        s, p, n = rng.choice((2, 3)), rng.choice((3, 5)), rng.randint(0, 2)
        if k % 2:
            pres = rand_presentation(rng, p, s)
        else:
            xvars = tuple(f"x{i}" for i in range(1, s + 1))
            pres = TubePresentation.coordinates(p, xvars, 2, 2,
                                                [rng.randint(0, p - 1) for _ in xvars])
        H = rand_reducible(rng, pres)
        D, cert = koszul_reduce(H, pres, n)
        bad += psi_apply(D, pres) != psi_apply(H, pres).embed(D.spec)
        bad += not cert.holds
    pres = TubePresentation.coordinates(5, ("x1", "x2"), 2, 2)
    H = phi_apply({(0, 1): GrowthSeries.constant(pres.joint_spec(), F(1, 5))}, pres)
    D, _ = koszul_reduce(H, pres)
    bad += not D.is_zero()
    return bad == 0, f"{count} instances plus the phi(1/p) fixture, {bad} violations"


# -- 6 ---------------------------------------------------------------------------------

def relation_suite():
    rng = seeded(6)
    fam1 = {(j,): F(1, j) for j in range(1, 9)}
    fam2 = {(i, j): F(rng.randint(1, 9), 1 + (i + j) % 3 * 5) for i in range(4) for j in range(4)}
    return [
        ("identity", Relation(5, [[1]], [0]), {(j,): 1 for j in range(6)}, 2),
        ("shift", Relation(3, [[1]], [3]), fam1, 1),
        ("one-to-two", Relation(3, [[1, 1]], [3]), {(j,): 1 for j in range(5)}, 0),
        ("two-to-one", Relation(3, [[1], [2]], [3, -3]), {(1, 1): 1, (2, 0): F(1, 3)}, 1),
        ("square", Relation(5, [[1, 2], [1, 1]], [5, F(-5, 2)]), fam2, 1),
    ]


def check_presentation():
    bad, parts = 0, []
    for name, rel, fam, n in relation_suite():
        out, cert = change_presentation(fam, rel, n)
        bad += not cert.holds
        note = f"{name} w={cert.weight}"
        if rel.s == rel.l:
            back, cert2 = change_presentation(out, rel.inverse(), n)
            bad += back != fam or not cert2.holds
            note += " round-trip"
        parts.append(note)
    return bad == 0, ", ".join(parts)


# -- 7 ---------------------------------------------------------------------------------

def check_cohomology():
    from test_derham_cech import two_points
    start = time.perf_counter()
    got = {}
    for N in (8, 16, 32):
        got[f"disk N={N}"] = cohomology_dims(de_rham_complex(AlgebraModel.polydisk(1, N)))
    got["bidisk N=4"] = cohomology_dims(de_rham_complex(AlgebraModel.polydisk(2, 4)))
    got["two points"] = cohomology_dims(de_rham_complex(AlgebraModel.tube(two_points())))
    t = AlgebraModel.polydisk(1, 6, 3, vars=("t",))
    s = AlgebraModel.polydisk(1, 6, 3, vars=("s",))
    got["two disks cover"] = cohomology_dims(cech_de_rham(CoverSpec(3, {"U": t, "V": s})))
    for N in (6, 8, 12):
        got[f"P1 N={N}"] = cohomology_dims(cech_de_rham(projective_line(N)))
    want = {k: ([1, 0] if k.startswith("disk") else
                [1, 0, 0] if k.startswith("bidisk") else
                [2, 0] if k.startswith("two") else [1, 0, 1]) for k in got}
    elapsed = time.perf_counter() - start
    ok = got == want and elapsed < 120
    wrong = [k for k in got if got[k] != want[k]]
    return ok, f"{len(got)} complexes, mismatches {wrong or 'none'}, {elapsed:.1f}s"


# -- 8 ---------------------------------------------------------------------------------

def check_fibration():
    from test_derham_cech import two_points
    tubes = {"point": TubePresentation.coordinates(3, ("x",), 4, 4), "two-point": two_points(N=4)}
    parts, bad = [], 0
    for name, pres in tubes.items():
        verdicts = [compare_weak_fibration(pres, d).verdict for d in (0, 1, 2)]
        bad += any(v != "consistent" for v in verdicts)
        parts.append(f"{name}: {'/'.join(verdicts)}")
    return bad == 0, "; ".join(parts)


# -- 9 ---------------------------------------------------------------------------------

def check_formats_and_cli():
    import test_cli
    from tempered.cli import main
    import contextlib
    import io
    fixtures = test_cli.FIXTURES
    bad, checked = 0, 0
    parsers = {".series": (parse_series, format_series), ".system": (parse_system, format_system),
               ".pres": (parse_presentation, format_presentation),
               ".vec": (parse_vector, format_vector), ".rel": (parse_relation, format_relation)}
    for name in sorted(os.listdir(fixtures)):
        ext = os.path.splitext(name)[1]
        path = os.path.join(fixtures, name)
        if ext not in parsers and ext != ".cover":
            continue
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        if ext == ".cover":
            cover = parse_cover(text, 8)
            bad += parse_cover(format_cover(cover, 8)) != cover
        else:
            parse, fmt = parsers[ext]
            value = parse(text)
            bad += parse(fmt(value)) != value or fmt(value) != text
        checked += 1
    rng = seeded(9)
    for _ in range(200):
        spec = SeriesSpec(rng.choice(PRIMES), ("t", "x"),
                          ((rng.randint(-4, 0), rng.randint(0, 6)), (0, rng.randint(0, 4))))
        f = rand_series(rng, spec, 0.5)
        bad += parse_series(format_series(f)) != f
    cases = ([(2, test_cli.BAD_CASES[os.path.splitext(n)[1]](os.path.join(test_cli.BAD, n)))
              for n in sorted(os.listdir(test_cli.BAD))]
             + [(1, argv) for argv in test_cli.DOMAIN_ERRORS]
             + [(2, argv) for argv in test_cli.USAGE_ERRORS])
    sink = io.StringIO()
    for want, argv in cases:
        with contextlib.redirect_stdout(sink), contextlib.redirect_stderr(sink):
            bad += main(argv) != want
    return bad == 0, (f"{checked} fixture files and 200 random series round-trip; "
                      f"{len(cases)} exit-code cases; {bad} violations")


CHECKS = [check_norm_laws, check_divisions, check_cauchy, check_transfer, check_koszul,
          check_presentation, check_cohomology, check_fibration, check_formats_and_cli]


@pytest.mark.parametrize("k", range(1, 10))
def test_criterion(k):
    ok, detail = CHECKS[k - 1]()
    assert record(k, ok, detail), detail


if __name__ == "__main__":
    results = [record(k, *check()) for k, check in enumerate(CHECKS, 1)]
    sys.exit(0 if all(results) else 1)
