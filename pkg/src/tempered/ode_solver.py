"""Formal solutions of linear systems dY/dt = G Y and their log-growth.

The Taylor coefficients G_[m] of the fundamental matrix are computed as
functions of the base point, so one recursion yields both the solution at
the origin (evaluate at t = 0) and at the generic point (keep t symbolic).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import FormatError, SpecMismatch, TemperedError, WindowError
from .growth_series import (HEADER_KEYS, GrowthSeries, SeriesSpec,
                            body_to_series, derivative, format_body,
                            format_header, gauss_norm, make_spec, mul,
                            read_sections)
from .line_opens import (EPSILON, doubling_truncations, least_stable_weight,
                         weighted_profile)
from .padic_arith import abs_value, as_scalar

__all__ = ["DiffSystem", "FundamentalSolution", "GrowthReport",
           "TransferReport", "cauchy_solve", "taylor_generic",
           "tau_is_morphism", "log_growth_estimate", "transfer_experiment",
           "parse_system", "format_system"]

EXCEEDS = "exceeds n_max"
CONSISTENT = "transfer consistent"
INCONSISTENT = "transfer inconsistent"
NOT_MET = "hypothesis of transfer theorem not met"


@dataclass(frozen=True)
class DiffSystem:
    G: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.G)
        m = len(rows)
        if m == 0 or any(len(r) != m for r in rows):
            raise ValueError("G must be a nonempty square matrix")
        spec = rows[0][0].spec
        if any(e.spec != spec for r in rows for e in r):
            raise SpecMismatch("all entries of G must share one spec")
        if spec.nvars != 1 or spec.is_laurent:
            raise SpecMismatch("G must be a power series in one variable")
        object.__setattr__(self, "G", rows)

    @classmethod
    def scalar(cls, f):
        return cls(((f,),))

    @property
    def dim(self):
        return len(self.G)

    @property
    def spec(self):
        return self.G[0][0].spec

    @property
    def prime(self):
        return self.spec.prime

    @property
    def max_order(self):
        """Largest N for which every G_[m], m <= N, is known exactly."""
        return self.spec.hi[0] + 1


def _restrict_matrix(A, spec):
    return [[e.restrict(spec) for e in row] for row in A]


def _mat_mul(A, B):
    m = len(A)
    out = []
    for i in range(m):
        row = []
        for j in range(m):
            acc = GrowthSeries.zero(A[0][0].spec)
            for k in range(m):
                if A[i][k].coeffs and B[k][j].coeffs:
                    acc = acc + mul(A[i][k], B[k][j])
            row.append(acc)
        out.append(row)
    return out


def _identity(spec, m):
    return [[GrowthSeries.constant(spec, int(i == j)) for j in range(m)]
            for i in range(m)]


def matrix_norm(A, norm=gauss_norm):
    return max((norm(e) for row in A for e in row), default=Fraction(0))


@dataclass
class FundamentalSolution:
    system: DiffSystem
    N: int
    series: list            # G_[m] as matrices of GrowthSeries in t
    at_origin: bool = True

    @property
    def origin(self):
        return [[[e.constant_term() for e in row] for row in G] for G in self.series]

    @property
    def matrices(self):
        return self.origin if self.at_origin else self.series

    def solution_series(self):
        """Y(t) = sum G_[m](0) t^m as a matrix of series on [0, N]."""
        base = self.system.spec
        spec = SeriesSpec(base.prime, base.vars, ((0, self.N),))
        m = self.system.dim
        origin = self.origin
        return [[GrowthSeries(spec, {(k,): origin[k][i][j] for k in range(self.N + 1)})
                 for j in range(m)] for i in range(m)]


def _solution_residual(sol):
    """dY/dt - G Y on the largest window where both sides are exact."""
    sys = sol.system
    K = min(sol.N - 1, sys.spec.hi[0])
    if K < 0:
        return []
    var = sys.spec.vars[0]
    Y = sol.solution_series()
    spec_k1 = SeriesSpec(sys.prime, sys.spec.vars, ((0, K + 1),))
    spec_k = SeriesSpec(sys.prime, sys.spec.vars, ((0, K),))
    dY = [[derivative(e.restrict(spec_k1), var) for e in row] for row in Y]
    GY = _mat_mul(_restrict_matrix(sys.G, spec_k), _restrict_matrix(Y, spec_k))
    return [[dY[i][j] - GY[i][j] for j in range(sys.dim)] for i in range(sys.dim)]


def cauchy_solve(sys, N, at_origin=True, *, check=True):
    """G_[0] = Id, G_[m] = (G_[m-1]' + G_[m-1] G) / m for m <= N.

    G multiplies on the right so that the coefficients solve dY/dt = G Y
    (the two orders agree only when the entries commute).
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N > sys.max_order:
        raise WindowError(f"window exhausted: the largest honest N is {sys.max_order}")
    spec, var, m = sys.spec, sys.spec.vars[0], sys.dim
    series = [_identity(spec, m)]
    if N >= 1:
        series.append([list(row) for row in sys.G])
    for k in range(2, N + 1):
        prev = series[-1]
        dprev = [[derivative(e, var) for e in row] for row in prev]
        sub = dprev[0][0].spec
        prod = _mat_mul(prev, _restrict_matrix(sys.G, prev[0][0].spec))
        prod = _restrict_matrix(prod, sub)
        inv = Fraction(1, k)
        series.append([[(dprev[i][j] + prod[i][j]).scale(inv) for j in range(m)]
                       for i in range(m)])
    sol = FundamentalSolution(sys, N, series, at_origin)
    if check:
        residual = _solution_residual(sol)
        if any(e.coeffs for row in residual for e in row):
            raise TemperedError("internal check failed: dY/dt != G Y on the window")
    return sol


def taylor_generic(f, N, wvar="w"):
    """Development at the generic point: coefficient of t^k w^i is C(k+i, i) a_{k+i}."""
    spec = f.spec
    if spec.nvars != 1 or spec.is_laurent:
        raise SpecMismatch("taylor_generic expects a power series in one variable")
    if wvar in spec.vars:
        raise SpecMismatch(f"variable name {wvar!r} already in use")
    hi = spec.hi[0]
    if N < 0 or N > hi:
        raise WindowError(f"window exhausted: {N} derivatives need hi >= {N}, have {hi}")
    out_spec = SeriesSpec(spec.prime, spec.vars + (wvar,), ((0, hi - N), (0, N)))
    out = {}
    for (j,), c in f.coeffs.items():
        for i in range(min(j, N) + 1):
            k = j - i
            if k <= hi - N:
                out[(k, i)] = comb(j, i) * c
    return GrowthSeries._raw(out_spec, out)


def tau_is_morphism(f, g, N):
    """Check tau(f g) = tau(f) tau(g) and tau(f + g) = tau(f) + tau(g)."""
    tf, tg = taylor_generic(f, N), taylor_generic(g, N)
    return (taylor_generic(mul(f, g), N) == mul(tf, tg)
            and taylor_generic(f + g, N) == tf + tg)


@dataclass(frozen=True)
class GrowthReport:
    order: int | None
    n_max: int
    profiles: dict = field(default_factory=dict)
    truncations: tuple = ()

    @property
    def exceeds(self):
        return self.order is None

    def describe(self):
        return EXCEEDS if self.order is None else str(self.order)


def growth_from_norms(values, n_max=8, eps=EPSILON):
    """Growth order of a sequence given by its norms ``{k: |a_k|}``."""
    length = max(values, default=0)
    if length + 1 < 8:
        raise TemperedError(f"sequence too short: need 8 terms, have {length + 1}")
    order = least_stable_weight(values, length, n_max, eps)
    top = n_max if order is None else order
    profiles = {n: weighted_profile(values, n, length).prefix for n in range(top + 1)}
    return GrowthReport(order, n_max, profiles, tuple(doubling_truncations(length)))


def log_growth_estimate(coeffs, p, n_max=8, eps=EPSILON):
    """Least n whose weighted profile of ``coeffs`` stabilizes.

    ``coeffs`` is a list (index = position) or a mapping index -> scalar.
    """
    items = coeffs.items() if hasattr(coeffs, "items") else enumerate(coeffs)
    values = {int(k): abs_value(as_scalar(c), p) for k, c in items}
    if len(values) < 8:
        raise TemperedError(f"sequence too short: need 8 terms, have {len(values)}")
    return growth_from_norms(values, n_max, eps)


@dataclass(frozen=True)
class TransferReport:
    generic: GrowthReport
    origin: GrowthReport
    generic_norms: tuple
    origin_norms: tuple
    pointwise: bool
    verdict: str


def transfer_experiment(sys, N, n_max=8):
    sol = cauchy_solve(sys, N)
    p = sys.prime
    generic = tuple(matrix_norm(G) for G in sol.series)
    origin = tuple(max(abs_value(c, p) for row in G for c in row) for G in sol.origin)
    pointwise = all(o <= g for o, g in zip(origin, generic))
    rg = growth_from_norms(dict(enumerate(generic)), n_max)
    ro = growth_from_norms(dict(enumerate(origin)), n_max)
    if rg.exceeds:
        verdict = NOT_MET
    elif not ro.exceeds and ro.order <= rg.order:
        verdict = CONSISTENT
    else:
        verdict = INCONSISTENT
    return TransferReport(rg, ro, generic, origin, pointwise, verdict)


def parse_system(text):
    header, body, blocks = read_sections(text, HEADER_KEYS + ("dim",), ("entry",))
    if body:
        raise FormatError(f"body line outside an entry block: {body[0]!r}")
    spec = make_spec(header)
    try:
        m = int(header["dim"])
    except KeyError:
        raise FormatError("missing header key 'dim'") from None
    except ValueError:
        raise FormatError(f"bad dim {header['dim']!r}") from None
    if m < 1:
        raise FormatError("dim must be at least 1")
    G = [[GrowthSeries.zero(spec) for _ in range(m)] for _ in range(m)]
    seen = set()
    for _, label, lines in blocks:
        try:
            i, j = (int(x) for x in label.split())
        except ValueError:
            raise FormatError(f"bad entry label {label!r}") from None
        if not (1 <= i <= m and 1 <= j <= m):
            raise FormatError(f"entry {i} {j} outside a {m}x{m} matrix")
        if (i, j) in seen:
            raise FormatError(f"duplicate entry {i} {j}")
        seen.add((i, j))
        G[i - 1][j - 1] = body_to_series(spec, lines)
    try:
        return DiffSystem(G)
    except (ValueError, SpecMismatch) as exc:
        raise FormatError(str(exc)) from None


def format_system(sys):
    lines = format_header(sys.spec) + [f"dim: {sys.dim}"]
    for i, row in enumerate(sys.G, 1):
        for j, e in enumerate(row, 1):
            if e.coeffs:
                lines.append(f"entry {i} {j}:")
                lines.extend(format_body(e))
    return "\n".join(lines) + "\n"
