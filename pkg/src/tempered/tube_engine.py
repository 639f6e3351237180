"""Tempered tubes: presentations, Koszul reduction, normal forms.

A presentation is a list of integral lifts f~_1..f~_s in the ambient
variables x together with tube variables y_1..y_s. Vectors H = (H_1..H_s)
live in the joint (x, y) ring, on which

    psi(H) = sum_i (y_i - f~_i) H_i,

and the Koszul map phi sends a family (v_ab), a < b, to the vector with
component a equal to -(y_b - f~_b) v_ab and component b to (y_a - f~_a) v_ab,
so that psi(phi(v)) = 0. Norms weight only the y variables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import prod

from .errors import (FormatError, PresentationDefect, RelationError,
                     SpecMismatch)
from .growth_series import (HEADER_KEYS, GrowthSeries, SeriesSpec,
                            body_to_series, format_body, format_header,
                            gauss_norm, make_spec, mul, norm_weighted,
                            parse_vars, read_sections, substitute)
from .kernels import solve_mod_p
from .padic_arith import Prime, abs_value, as_scalar, format_rational, parse_rational, valuation

__all__ = ["TubePresentation", "KoszulVector", "ReductionCertificate",
           "Relation", "PresentationCertificate", "psi_apply", "phi_apply",
           "koszul_reduce", "tube_normal_form", "ideal_cofactors",
           "change_presentation", "weak_fibration_data",
           "parse_presentation", "format_presentation", "parse_vector",
           "format_vector", "parse_relation", "format_relation"]


@dataclass(frozen=True)
class TubePresentation:
    lifts: tuple
    yvars: tuple
    N: int

    def __post_init__(self):
        lifts = tuple(self.lifts)
        yvars = tuple(self.yvars)
        if not lifts:
            raise ValueError("a presentation needs at least one lift")
        if len(yvars) != len(lifts):
            raise ValueError("one tube variable per lift is required")
        spec = lifts[0].spec
        if any(f.spec != spec for f in lifts):
            raise SpecMismatch("lifts must share one spec")
        if spec.is_laurent:
            raise SpecMismatch("the ambient window must not be Laurent")
        if set(yvars) & set(spec.vars) or len(set(yvars)) != len(yvars):
            raise ValueError("tube variables must be distinct from each other and from x")
        if self.N < 0:
            raise ValueError("truncation must be nonnegative")
        for i, f in enumerate(lifts, 1):
            if gauss_norm(f) > 1:
                raise PresentationDefect(f"lift {i} is not integral")
        object.__setattr__(self, "lifts", lifts)
        object.__setattr__(self, "yvars", yvars)

    @classmethod
    def coordinates(cls, prime, xvars, hi, N, shifts=None, yvars=None):
        """Lifts x_i - c_i, regular by inspection."""
        spec = SeriesSpec.uniform(prime, xvars, hi)
        shifts = shifts or [0] * spec.nvars
        lifts = [GrowthSeries.variable(spec, v) - c for v, c in zip(spec.vars, shifts)]
        yvars = yvars or tuple(f"y{i}" for i in range(1, len(lifts) + 1))
        return cls(lifts, yvars, N)

    @property
    def prime(self):
        return self.xspec.prime

    @property
    def xspec(self):
        return self.lifts[0].spec

    @property
    def xvars(self):
        return self.xspec.vars

    @property
    def s(self):
        return len(self.lifts)

    def joint_spec(self, extra=None):
        """Spec on x + y; ``extra`` widens each x window by the given amounts."""
        xs = self.xspec
        extra = extra or (0,) * xs.nvars
        window = tuple((0, hi + e) for (_, hi), e in zip(xs.window, extra))
        return SeriesSpec(xs.prime, xs.vars + self.yvars,
                          window + ((0, self.N),) * self.s)

    def lift_degrees(self):
        return tuple(max((f.degree(v) for f in self.lifts), default=0) for v in self.xvars)

    def generator(self, i, spec):
        """y_i - f~_i inside ``spec``."""
        return GrowthSeries.variable(spec, self.yvars[i]) - self.lifts[i].embed(spec)


@dataclass(frozen=True)
class KoszulVector:
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("empty Koszul vector")
        if any(c.spec != comps[0].spec for c in comps):
            raise SpecMismatch("components must share one spec")
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, spec, s):
        return cls([GrowthSeries.zero(spec)] * s)

    @property
    def spec(self):
        return self.components[0].spec

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other):
        return KoszulVector([a + b for a, b in zip(self, other)])

    def __sub__(self, other):
        return KoszulVector([a - b for a, b in zip(self, other)])

    def scale(self, c):
        return KoszulVector([a.scale(c) for a in self])

    def embed(self, spec):
        return KoszulVector([a.embed(spec) for a in self])

    def is_zero(self):
        return all(c.is_zero() for c in self)

    def norm(self, n, yvars):
        return max(norm_weighted(c, n, yvars) for c in self)


def _check_vector(H, pres):
    if len(H) != pres.s:
        raise SpecMismatch(f"vector has {len(H)} components, presentation has {pres.s}")
    if H.spec.vars != pres.xvars + pres.yvars or H.spec.prime != pres.prime:
        raise SpecMismatch(f"vector variables {H.spec.vars} do not match "
                           f"{pres.xvars + pres.yvars}")


def psi_apply(H, pres):
    _check_vector(H, pres)
    spec = H.spec
    out = GrowthSeries.zero(spec)
    for i, h in enumerate(H):
        if h.coeffs:
            out = out + mul(pres.generator(i, spec), h)
    return out


def phi_apply(v, pres, spec=None):
    """phi of a family ``{(a, b): series}`` with 0-based a < b."""
    if spec is None:
        spec = next(iter(v.values())).spec
    comps = [GrowthSeries.zero(spec) for _ in range(pres.s)]
    for (a, b), val in v.items():
        if not a < b < pres.s:
            raise ValueError(f"bad Koszul pair {(a, b)}")
        comps[a] = comps[a] - mul(pres.generator(b, spec), val)
        comps[b] = comps[b] + mul(pres.generator(a, spec), val)
    return KoszulVector(comps)


# -- residue-field linear algebra -------------------------------------------

def _reduce_mod_p(c, p):
    return c.numerator * pow(c.denominator, -1, p) % p


def _balanced(v, p):
    return v - p if v > p // 2 else v


class _KoszulSystem:
    """The F_p linear map a -> koszulex(a) on x-polynomials in a box.

    Only the right-hand side changes between solves, so the equations are
    assembled once per reduction.
    """

    def __init__(self, fbar, box, p):
        s = len(fbar)
        self.p = p
        self.pairs = list(combinations(range(s), 2))
        monos = list(product(*(range(h + 1) for h in box)))
        self.unknowns = [(k, m) for k in range(len(self.pairs)) for m in monos]
        eqs = {}
        for col, (k, m) in enumerate(self.unknowns):
            a, b = self.pairs[k]
            # component a gets -f_b a_ab, component b gets f_a a_ab
            for comp, f, sign in ((a, fbar[b], -1), (b, fbar[a], 1)):
                for e, c in f.items():
                    row = eqs.setdefault((comp, tuple(i + j for i, j in zip(m, e))), {})
                    row[col] = row.get(col, 0) + sign * c
        self.keys = sorted(eqs)
        self.eqs = [eqs[key] for key in self.keys]
        self.known = set(self.keys)

    def solve(self, ubar):
        """a with koszulex(a) = ubar, or None."""
        for comp, poly in enumerate(ubar):
            if any((comp, e) not in self.known for e in poly):
                return None
        rows = [(eq, ubar[comp].get(e, 0)) for eq, (comp, e) in zip(self.eqs, self.keys)]
        sol = solve_mod_p(rows, len(self.unknowns), self.p)
        if sol is None:
            return None
        out = {pair: {} for pair in self.pairs}
        for col, val in sol.items():
            k, m = self.unknowns[col]
            out[self.pairs[k]][m] = val
        return out


# -- reduction ---------------------------------------------------------------

@dataclass(frozen=True)
class ReductionCertificate:
    weight: int
    scale: Fraction             # psi(H) was multiplied by this before reducing
    psi_norm: Fraction
    input_norm: Fraction
    output_norm: Fraction
    scaled_output_norm: Fraction
    residual_zero: bool
    ledger: tuple = field(default=())   # (multi-index, offending norm, correction norm)

    @property
    def holds(self):
        return self.residual_zero and self.scaled_output_norm <= 1


def _gauss(poly, p):
    return max((abs_value(c, p) for c in poly.values()), default=Fraction(0))


def _add_into(target, poly, c=1):
    for k, v in poly.items():
        nv = target.get(k, 0) + c * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def _poly_mul(f, g):
    out = {}
    for a, x in f.items():
        for b, y in g.items():
            k = tuple(i + j for i, j in zip(a, b))
            out[k] = out.get(k, 0) + x * y
    return {k: v for k, v in out.items() if v}


def koszul_reduce(H, pres, n=0):
    """Return D with psi(D) = psi(H) and ||c D||_n <= 1 where ||c psi(H)||_n <= 1.

    D lives on the joint window widened in x by the lift degrees, where
    every product with a lift is an exact polynomial.
    """
    _check_vector(H, pres)
    if n < 0:
        raise ValueError("the reduction needs a nonnegative weight")
    p = pres.prime
    nx, s = pres.xspec.nvars, pres.s
    degs = pres.lift_degrees()
    base_hi = H.spec.hi[:nx]
    work = SeriesSpec(p, H.spec.vars,
                      tuple((0, h + e) for h, e in zip(base_hi, degs))
                      + ((0, pres.N),) * s)
    H = H.embed(work)
    psi_h = psi_apply(H, pres)
    psi_norm = norm_weighted(psi_h, n, pres.yvars)
    scale = Fraction(1)
    if psi_norm > 1:
        scale = Fraction(p) ** valuation(psi_norm, p)   # |scale| = 1/psi_norm
    B = [dict() for _ in range(s)]
    for i, comp in enumerate(H.scale(scale)):
        for index, c in comp.coeffs.items():
            B[i].setdefault(index[nx:], {})[index[:nx]] = c
    lifts = [{k: v for k, v in f.coeffs.items()} for f in pres.lifts]
    fbar = [{k: _reduce_mod_p(v, p) for k, v in f.items() if _reduce_mod_p(v, p)}
            for f in lifts]
    system = _KoszulSystem(fbar, tuple(base_hi), p)
    ledger = []
    for J in product(range(pres.N + 1), repeat=s):
        w = Fraction(prod(j + 1 for j in J)) ** n
        while True:
            r = max(_gauss(B[i].get(J, {}), p) for i in range(s))
            if r <= w:
                break
            t = Fraction(p) ** -valuation(r, p)       # scalar of norm r
            ubar = [{k: _reduce_mod_p(v / t, p) for k, v in B[i].get(J, {}).items()
                     if _reduce_mod_p(v / t, p)} for i in range(s)]
            sol = system.solve(ubar)
            if sol is None:
                raise PresentationDefect(
                    f"residual Koszul solve failed at y-index {J}: "
                    "the lifts do not reduce to a regular sequence")
            for (a, b), abar in sol.items():
                if not abar:
                    continue
                v = {m: t * _balanced(val, p) for m, val in abar.items()}
                for comp, other, sign in ((a, b, -1), (b, a, 1)):
                    # sign * (y_other - f_other) v  placed at y^J
                    _add_into(B[comp].setdefault(J, {}), _poly_mul(lifts[other], v), -sign)
                    up = J[:other] + (J[other] + 1,) + J[other + 1:]
                    if up[other] <= pres.N:
                        _add_into(B[comp].setdefault(up, {}), v, sign)
            new = max(_gauss(B[i].get(J, {}), p) for i in range(s))
            ledger.append((J, r, new))
            if new * p > r:
                raise PresentationDefect(f"correction at y-index {J} did not shrink the norm")
    comps = []
    for i in range(s):
        coeffs = {}
        for J, poly in B[i].items():
            for m, c in poly.items():
                coeffs[m + J] = c
        comps.append(GrowthSeries(work, coeffs))
    D_scaled = KoszulVector(comps)
    D = D_scaled.scale(1 / scale)
    residual = psi_apply(D, pres) - psi_h
    cert = ReductionCertificate(
        weight=n, scale=scale, psi_norm=psi_norm,
        input_norm=H.norm(n, pres.yvars), output_norm=D.norm(n, pres.yvars),
        scaled_output_norm=D_scaled.norm(n, pres.yvars),
        residual_zero=residual.is_zero(), ledger=tuple(ledger))
    return D, cert


# -- normal forms ------------------------------------------------------------

def tube_normal_form(g, pres):
    """Substitute y_i -> f~_i; the result lives on the x window of ``g``."""
    out = g
    for y, f in zip(pres.yvars, pres.lifts):
        if y in out.spec.vars:
            out = substitute(out, y, f)
    if set(out.spec.vars) != set(pres.xvars):
        out = out.embed(SeriesSpec(pres.prime, pres.xvars,
                                   tuple(out.spec.window[out.spec.position(v)]
                                         if v in out.spec.vars else (0, 0)
                                         for v in pres.xvars)))
    return out


def ideal_cofactors(g, pres):
    """Write g = sum_i (y_i - f~_i) h_i + r with r free of y.

    Synthetic division in y_1, then y_2, ...; ``r`` equals the normal form.
    Returns ``(h, r)`` with ``h`` a KoszulVector and ``r`` on g's spec.
    """
    spec = g.spec
    cur = g
    hs = []
    for i, y in enumerate(pres.yvars):
        pos = spec.position(y)
        gen_f = pres.lifts[i].embed(spec)
        layers = {}
        for index, c in cur.coeffs.items():
            layers.setdefault(index[pos], {})[index[:pos] + (0,) + index[pos + 1:]] = c
        top = max(layers, default=0)
        q = GrowthSeries.zero(spec)
        quotient = {}
        for j in range(top, 0, -1):
            q = GrowthSeries._raw(spec, dict(layers.get(j, {}))) + (mul(gen_f, q) if q.coeffs else q)
            quotient[j - 1] = q
        rem = GrowthSeries._raw(spec, dict(layers.get(0, {})))
        if q.coeffs:
            rem = rem + mul(gen_f, q)
        h = GrowthSeries.zero(spec)
        yv = GrowthSeries.variable(spec, y) if spec.window[pos][1] >= 1 else None
        ypow = GrowthSeries.constant(spec, 1)
        for k in range(top):
            if k:
                ypow = mul(ypow, yv)
            h = h + mul(quotient[k], ypow)
        hs.append(h)
        cur = rem
    return KoszulVector(hs), cur


# -- change of presentation --------------------------------------------------

@dataclass(frozen=True)
class Relation:
    """f~_i = sum_j h[i][j] g~_j + alpha[i] for i < s, j < l."""
    prime: Prime
    h: tuple
    alpha: tuple

    def __post_init__(self):
        p = Prime(self.prime)
        h = tuple(tuple(as_scalar(c) for c in row) for row in self.h)
        alpha = tuple(as_scalar(c) for c in self.alpha)
        if not h or len(alpha) != len(h) or len({len(r) for r in h}) != 1 or not h[0]:
            raise RelationError("relation needs an s x l matrix and s constants")
        for row in h:
            for c in row:
                if c and abs_value(c, p) != 1:
                    raise RelationError(f"coefficient {format_rational(c)} is not a unit")
        for a in alpha:
            if abs_value(a, p) >= 1:
                raise RelationError(f"constant {format_rational(a)} is not in the maximal ideal")
        object.__setattr__(self, "prime", p)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "alpha", alpha)

    @property
    def s(self):
        return len(self.h)

    @property
    def l(self):
        return len(self.h[0])

    def inverse(self):
        """g~ in terms of f~ (square relations only)."""
        if self.s != self.l:
            raise RelationError("only square relations can be inverted")
        n = self.s
        aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
               for i, row in enumerate(self.h)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col]), None)
            if piv is None:
                raise RelationError("relation matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = 1 / aug[col][col]
            aug[col] = [v * inv for v in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        hinv = [row[n:] for row in aug]
        alpha = [-sum(hinv[i][j] * self.alpha[j] for j in range(n)) for i in range(n)]
        return Relation(self.prime, hinv, alpha)


@dataclass(frozen=True)
class PresentationCertificate:
    weight: int                  # n * s * l
    input_norm: Fraction         # sup |a_J| prod (j+1)^(-n)
    attained: Fraction           # same sup for the output at the new weight
    bound: Fraction
    profile: tuple = ()          # attained sup at weights 0..n*s*l

    @property
    def holds(self):
        return self.attained <= self.bound


def _family_norm(family, n, p):
    best = Fraction(0)
    for J, c in family.items():
        v = abs_value(c, p) * Fraction(prod(j + 1 for j in J)) ** -n
        best = max(best, v)
    return best


def _alpha_constant(alpha_norm, m):
    """max over integers z >= 0 of (z+1)^m alpha^z."""
    if not alpha_norm or not m:
        return Fraction(1)
    best, z, val = Fraction(1), 0, Fraction(1)
    while True:
        nxt = val * Fraction(z + 2, z + 1) ** m * alpha_norm
        if nxt < val and (1 + Fraction(1, z + 1)) ** m * alpha_norm < 1:
            return best
        z, val = z + 1, nxt
        best = max(best, val)


def _expand_power(poly, k, cache):
    key = (id(poly), k)
    if key not in cache:
        if k == 0:
            cache[key] = {(0,) * len(next(iter(poly))): Fraction(1)} if poly else {}
        else:
            cache[key] = _poly_mul(_expand_power(poly, k - 1, cache), poly)
    return cache[key]


def change_presentation(coeffs, relation, n=0):
    """Rewrite sum_J a_J f~^J as sum_M b_M g~^M.

    ``coeffs`` maps s-tuples to scalars (a GrowthSeries in s variables is
    accepted too). Returns ``(b, certificate)``; the certificate bounds
    the output at weight n*s*l.
    """
    if isinstance(coeffs, GrowthSeries):
        coeffs = dict(coeffs.coeffs)
    p, s, l = relation.prime, relation.s, relation.l
    family = {tuple(J): as_scalar(c) for J, c in coeffs.items() if c}
    if any(len(J) != s for J in family):
        raise RelationError(f"coefficient indices must have length {s}")
    if any(j < 0 for J in family for j in J):
        raise RelationError("coefficient indices must be nonnegative")
    lin = []
    for i in range(s):
        poly = {}
        for j, c in enumerate(relation.h[i]):
            if c:
                poly[tuple(int(k == j) for k in range(l))] = c
        if relation.alpha[i]:
            poly[(0,) * l] = relation.alpha[i]
        lin.append(poly)
    cache = {}
    out = {}
    for J, a in family.items():
        term = {(0,) * l: a}
        for i, j in enumerate(J):
            if j:
                if not lin[i]:
                    term = {}
                    break
                term = _poly_mul(term, _expand_power(lin[i], j, cache))
        _add_into(out, term)
    m = n * s * l
    a_norm = _family_norm(family, n, p)
    alpha_norm = max((abs_value(a, p) for a in relation.alpha), default=Fraction(0))
    c_prime = Fraction(1) if l >= s else Fraction(s, l) ** m
    bound = a_norm * Fraction(l) ** m * c_prime * _alpha_constant(alpha_norm, m)
    profile = tuple(_family_norm(out, k, p) for k in range(m + 1))
    cert = PresentationCertificate(m, a_norm, profile[-1], bound, profile)
    return out, cert


def weak_fibration_data(pres, d, names=None):
    """Extend the ambient by d coordinates t_k, each cut out by its zero section."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    if d == 0:
        return pres
    used = set(pres.xvars) | set(pres.yvars)
    if names is None:
        names, k = [], 1
        while len(names) < d:
            if f"t{k}" not in used:
                names.append(f"t{k}")
            k += 1
    names = tuple(names)
    hi = max(pres.xspec.hi, default=pres.N)
    xspec = SeriesSpec(pres.prime, pres.xvars + names,
                       pres.xspec.window + ((0, hi),) * d)
    ynames, k = [], pres.s + 1
    while len(ynames) < d:
        if f"y{k}" not in used | set(names):
            ynames.append(f"y{k}")
        k += 1
    lifts = [f.embed(xspec) for f in pres.lifts]
    lifts += [GrowthSeries.variable(xspec, t) for t in names]
    return TubePresentation(lifts, pres.yvars + tuple(ynames), pres.N)


# -- file formats ------------------------------------------------------------

def parse_presentation(text):
    header, body, blocks = read_sections(text, HEADER_KEYS + ("tube-vars", "trunc"),
                                         ("lift",))
    if body:
        raise FormatError(f"body line outside a lift block: {body[0]!r}")
    spec = make_spec(header)
    for key in ("tube-vars", "trunc"):
        if key not in header:
            raise FormatError(f"missing header key {key!r}")
    yvars = parse_vars(header["tube-vars"])
    try:
        N = int(header["trunc"])
    except ValueError:
        raise FormatError(f"bad trunc {header['trunc']!r}") from None
    lifts = {}
    for _, label, lines in blocks:
        try:
            i = int(label)
        except ValueError:
            raise FormatError(f"bad lift label {label!r}") from None
        if not 1 <= i <= len(yvars) or i in lifts:
            raise FormatError(f"bad or duplicate lift {i}")
        lifts[i] = body_to_series(spec, lines)
    ordered = [lifts.get(i, GrowthSeries.zero(spec)) for i in range(1, len(yvars) + 1)]
    try:
        return TubePresentation(ordered, yvars, N)
    except (ValueError, SpecMismatch) as exc:
        raise FormatError(str(exc)) from None


def format_presentation(pres):
    lines = format_header(pres.xspec)
    lines += [f"tube-vars: {','.join(pres.yvars)}", f"trunc: {pres.N}"]
    for i, f in enumerate(pres.lifts, 1):
        lines.append(f"lift {i}:")
        lines.extend(format_body(f))
    return "\n".join(lines) + "\n"


def parse_vector(text):
    header, body, blocks = read_sections(text, HEADER_KEYS, ("component",))
    if body:
        raise FormatError(f"body line outside a component block: {body[0]!r}")
    spec = make_spec(header)
    comps = {}
    for _, label, lines in blocks:
        try:
            i = int(label)
        except ValueError:
            raise FormatError(f"bad component label {label!r}") from None
        if i < 1 or i in comps:
            raise FormatError(f"bad or duplicate component {i}")
        comps[i] = body_to_series(spec, lines)
    if not comps:
        raise FormatError("no components")
    return KoszulVector([comps.get(i, GrowthSeries.zero(spec))
                         for i in range(1, max(comps) + 1)])


def format_vector(H):
    lines = format_header(H.spec)
    for i, c in enumerate(H, 1):
        lines.append(f"component {i}:")
        lines.extend(format_body(c))
    return "\n".join(lines) + "\n"


def parse_relation(text):
    header, body, blocks = read_sections(text, ("prime", "source-dim", "target-dim"))
    if blocks:
        raise FormatError("unexpected block in relation file")
    try:
        p = int(header["prime"])
        s = int(header["source-dim"])
        l = int(header["target-dim"])
    except KeyError as exc:
        raise FormatError(f"missing header key {exc.args[0]!r}") from None
    except ValueError:
        raise FormatError("bad integer in relation header") from None
    rows = {}
    for line in body:
        left, sep, right = line.partition(":")
        word, _, label = left.strip().partition(" ")
        if not sep or word != "relation":
            raise FormatError(f"expected 'relation i: h1,...,hl ; alpha', got {line!r}")
        hs, semi, alpha = right.partition(";")
        if not semi:
            raise FormatError(f"missing ';' before the constant in {line!r}")
        try:
            i = int(label)
        except ValueError:
            raise FormatError(f"bad relation label {label!r}") from None
        h = [parse_rational(x) for x in hs.split(",")]
        if len(h) != l or not 1 <= i <= s or i in rows:
            raise FormatError(f"relation {i} does not fit {s} -> {l}")
        rows[i] = (h, parse_rational(alpha))
    if len(rows) != s:
        raise FormatError(f"expected {s} relations, found {len(rows)}")
    try:
        return Relation(Prime(p), [rows[i][0] for i in range(1, s + 1)],
                        [rows[i][1] for i in range(1, s + 1)])
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_relation(rel):
    lines = [f"prime: {int(rel.prime)}", f"source-dim: {rel.s}", f"target-dim: {rel.l}"]
    for i, (row, a) in enumerate(zip(rel.h, rel.alpha), 1):
        lines.append(f"relation {i}: {','.join(map(format_rational, row))} ; "
                     f"{format_rational(a)}")
    return "\n".join(lines) + "\n"
