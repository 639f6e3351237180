"""Truncated multivariate power/Laurent series with log-growth norms.

A :class:`GrowthSeries` stores its nonzero coefficients sparsely inside the
index box of its :class:`SeriesSpec`. Every operation returns a series whose
window is the largest box on which the result is exact, so reading outside
``spec.window`` is never meaningful.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm

from .errors import (DivergentSubstitution, FormatError, NotDivisible,
                     SpecMismatch, TemperedError, WindowError)
from .kernels import convolve, int_valuation
from .padic_arith import (Prime, abs_value, as_scalar, format_rational,
                          parse_rational)

__all__ = [
    "SeriesSpec", "GrowthSeries", "GrowthClass", "DiagonalCertificate",
    "LinearCertificate", "norm_weighted", "gauss_norm", "mul", "derivative",
    "integrate", "divide_diagonal", "divide_linear", "substitute",
    "parse_series", "format_series",
]


@dataclass(frozen=True)
class SeriesSpec:
    prime: Prime
    vars: tuple
    window: tuple

    def __post_init__(self):
        object.__setattr__(self, "prime", Prime(self.prime))
        names = tuple(self.vars)
        window = tuple((int(lo), int(hi)) for lo, hi in self.window)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if len(window) != len(names):
            raise ValueError("one window range per variable is required")
        for name, (lo, hi) in zip(names, window):
            if not (lo <= 0 <= hi):
                raise ValueError(f"window {lo}..{hi} of {name} must contain 0")
        object.__setattr__(self, "vars", names)
        object.__setattr__(self, "window", window)

    @classmethod
    def uniform(cls, prime, vars, hi, lo=0):
        vars = tuple(vars.split(",")) if isinstance(vars, str) else tuple(vars)
        return cls(prime, vars, tuple((lo, hi) for _ in vars))

    @property
    def nvars(self):
        return len(self.vars)

    @property
    def lo(self):
        return tuple(w[0] for w in self.window)

    @property
    def hi(self):
        return tuple(w[1] for w in self.window)

    @property
    def is_laurent(self):
        return any(lo < 0 for lo, _ in self.window)

    def position(self, var):
        try:
            return self.vars.index(var)
        except ValueError:
            raise SpecMismatch(f"unknown variable {var!r} (have {self.vars})") from None

    def contains(self, index):
        return all(lo <= j <= hi for j, (lo, hi) in zip(index, self.window))

    def replace_window(self, pos, lo, hi):
        window = list(self.window)
        window[pos] = (lo, hi)
        return SeriesSpec(self.prime, self.vars, tuple(window))

    def indices(self):
        return product(*(range(lo, hi + 1) for lo, hi in self.window))


class GrowthSeries:
    """Immutable sparse series; ``coeffs`` maps index tuples to Fractions."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec, coeffs=None, *, clip=False):
        items = {}
        for index, c in (coeffs or {}).items():
            if isinstance(index, int):
                index = (index,)
            index = tuple(index)
            c = as_scalar(c)
            if not c:
                continue
            if len(index) != spec.nvars:
                raise SpecMismatch(f"index {index} has wrong arity for {spec.vars}")
            if not spec.contains(index):
                if clip:
                    continue
                raise WindowError(f"index {index} outside window {spec.window}")
            items[index] = c
        self.spec = spec
        self.coeffs = items

    @classmethod
    def _raw(cls, spec, coeffs):
        obj = cls.__new__(cls)
        obj.spec = spec
        obj.coeffs = coeffs
        return obj

    @classmethod
    def zero(cls, spec):
        return cls._raw(spec, {})

    @classmethod
    def constant(cls, spec, c):
        return cls(spec, {(0,) * spec.nvars: c})

    @classmethod
    def variable(cls, spec, var):
        pos = spec.position(var)
        index = [0] * spec.nvars
        index[pos] = 1
        return cls(spec, {tuple(index): 1})

    @classmethod
    def from_list(cls, spec, values, start=0):
        """Univariate helper: ``values[k]`` is the coefficient of t^(start+k)."""
        return cls(spec, {(start + k,): v for k, v in enumerate(values)})

    def coeff(self, index):
        if isinstance(index, int):
            index = (index,)
        return self.coeffs.get(tuple(index), Fraction(0))

    def is_zero(self):
        return not self.coeffs

    def constant_term(self):
        return self.coeff((0,) * self.spec.nvars)

    def items(self):
        return sorted(self.coeffs.items())

    def _check(self, other):
        if self.spec != other.spec:
            raise SpecMismatch(f"{self.spec} != {other.spec}")

    def __add__(self, other):
        if not isinstance(other, GrowthSeries):
            return self + GrowthSeries.constant(self.spec, other)
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return GrowthSeries._raw(self.spec, out)

    __radd__ = __add__

    def __neg__(self):
        return GrowthSeries._raw(self.spec, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = as_scalar(c)
        if not c:
            return GrowthSeries.zero(self.spec)
        return GrowthSeries._raw(self.spec, {k: c * v for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, GrowthSeries):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, GrowthSeries):
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        if not self.coeffs:
            return f"GrowthSeries(0, vars={self.spec.vars})"
        terms = []
        for index, c in self.items():
            mono = "*".join(f"{v}^{j}" if j != 1 else v
                            for v, j in zip(self.spec.vars, index) if j)
            terms.append(f"{format_rational(c)}*{mono}" if mono else format_rational(c))
        return f"GrowthSeries({' + '.join(terms)})"

    def restrict(self, spec):
        """Drop coefficients outside ``spec`` (same variables, smaller box)."""
        if spec.vars != self.spec.vars or spec.prime != self.spec.prime:
            raise SpecMismatch("restrict needs identical variables and prime")
        return GrowthSeries(spec, self.coeffs, clip=True)

    def embed(self, spec):
        """Re-index into ``spec``, whose variables contain ours.

        Variables of ``spec`` absent here get exponent 0; coefficients that
        fall outside the target window are dropped.
        """
        if spec.prime != self.spec.prime:
            raise SpecMismatch("prime mismatch")
        pos = [spec.position(v) for v in self.spec.vars]
        out = {}
        for index, c in self.coeffs.items():
            new = [0] * spec.nvars
            for p, j in zip(pos, index):
                new[p] = j
            new = tuple(new)
            if spec.contains(new):
                out[new] = c
        return GrowthSeries._raw(spec, out)

    def degree(self, var):
        pos = self.spec.position(var)
        return max((k[pos] for k in self.coeffs), default=0)


def norm_weighted(f, n, vars=None):
    """max_J |a_J|_p * prod (|j_l| + 1)^(-n); n < 0 gives the fast norm.

    ``vars`` restricts the weight to those variables; the others enter only
    through the Gauss norm of the coefficient.
    """
    if not f.coeffs:
        return Fraction(0)
    spec = f.spec
    positions = (range(spec.nvars) if vars is None
                 else [spec.position(v) for v in vars])
    p = spec.prime
    # candidates are compared as integer pairs num/den to avoid Fraction churn
    best_num, best_den = 0, 1
    for index, c in f.coeffs.items():
        v = int_valuation(c.numerator, p) - int_valuation(c.denominator, p)
        num, den = (p ** -v, 1) if v < 0 else (1, p ** v)
        if n:
            w = 1
            for i in positions:
                w *= abs(index[i]) + 1
            if n > 0:
                den *= w ** n
            else:
                num *= w ** -n
        if num * best_den > best_num * den:
            best_num, best_den = num, den
    return Fraction(best_num, best_den)


def gauss_norm(f):
    return norm_weighted(f, 0)


def _to_int(f):
    den = lcm(*(c.denominator for c in f.coeffs.values())) if f.coeffs else 1
    return den, {k: c.numerator * (den // c.denominator) for k, c in f.coeffs.items()}


def mul(f, g):
    """Cauchy product restricted to the shared window."""
    f._check(g)
    if not f.coeffs or not g.coeffs:
        return GrowthSeries.zero(f.spec)
    spec = f.spec
    df, a = _to_int(f)
    dg, b = _to_int(g)
    prod_ = convolve(a, b, spec.lo, spec.hi)
    den = df * dg
    return GrowthSeries._raw(spec, {k: Fraction(v, den) for k, v in prod_.items()})


def power(f, k):
    result = GrowthSeries.constant(f.spec, 1)
    base = f
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def derivative(f, var):
    spec = f.spec
    pos = spec.position(var)
    lo, hi = spec.window[pos]
    if hi == 0:
        raise WindowError(f"window of {var} exhausted: cannot differentiate")
    out_spec = spec.replace_window(pos, lo, hi - 1)
    out = {}
    for index, c in f.coeffs.items():
        j = index[pos]
        if j == 0:
            continue
        new = index[:pos] + (j - 1,) + index[pos + 1:]
        if out_spec.contains(new):
            out[new] = j * c
    return GrowthSeries._raw(out_spec, out)


def integrate(f, var):
    """Formal antiderivative with zero constant term; window grows by one."""
    spec = f.spec
    pos = spec.position(var)
    lo, hi = spec.window[pos]
    out_spec = spec.replace_window(pos, lo + 1 if lo < 0 else 0, hi + 1)
    out = {}
    for index, c in f.coeffs.items():
        j = index[pos]
        if j == -1:
            raise TemperedError(f"cannot integrate a {var}^-1 term")
        new = index[:pos] + (j + 1,) + index[pos + 1:]
        if out_spec.contains(new):
            out[new] = c / (j + 1)
    return GrowthSeries._raw(out_spec, out)


@dataclass(frozen=True)
class DiagonalCertificate:
    weight: int
    quotient_norm: Fraction
    bound: Fraction

    @property
    def holds(self):
        return self.quotient_norm <= self.bound


@dataclass(frozen=True)
class LinearCertificate:
    norms: dict

    @property
    def holds(self):
        return all(h <= hp for h, hp in self.norms.values())


def divide_diagonal(f, n=0):
    """(f(t, x) - f(x, x)) / (t - x) for a bivariate polynomial f.

    Returns the quotient and a certificate comparing ||q||_{2n} with
    2^n ||f||_n. The quotient is exact for the stored polynomial; its window
    is [0, N-1] x [0, M+N-1] for an input window [0, N] x [0, M].
    """
    spec = f.spec
    if spec.nvars != 2 or spec.is_laurent:
        raise SpecMismatch("divide_diagonal needs a bivariate power series")
    (_, big_n), (_, big_m) = spec.window
    top = max(big_n - 1, 0)
    out_spec = SeriesSpec(spec.prime, spec.vars, ((0, top), (0, big_m + top)))
    out = {}
    for (i, j), c in f.coeffs.items():
        for l in range(i):
            key = (i - 1 - l, j + l)
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    q = GrowthSeries._raw(out_spec, out)
    cert = DiagonalCertificate(n, norm_weighted(q, 2 * n),
                               2 ** n * norm_weighted(f, n))
    return q, cert


def divide_linear(h_prime, g, g_prime, weights=(0,), *, exact=True):
    """Solve (g t - g') h = h' for unit scalars g, g'.

    Uses the forward recursion a_i = (g a_{i-1} - b_i) / g'. With ``exact``
    the stored h' is read as a polynomial and a nonzero top coefficient
    raises :class:`NotDivisible`; otherwise h is the power-series quotient.
    """
    spec = h_prime.spec
    if spec.nvars != 1 or spec.is_laurent:
        raise SpecMismatch("divide_linear needs a univariate power series")
    g, g_prime = as_scalar(g), as_scalar(g_prime)
    p = spec.prime
    if abs_value(g, p) != 1 or abs_value(g_prime, p) != 1:
        raise TemperedError("divide_linear needs |g| = |g'| = 1")
    hi = spec.window[0][1]
    prev = Fraction(0)
    out = {}
    for i in range(hi + 1):
        a = (g * prev - h_prime.coeff(i)) / g_prime
        if a:
            out[(i,)] = a
        prev = a
    if exact and prev:
        raise NotDivisible(
            f"not divisible at this truncation: remainder {format_rational(-g * prev)} "
            f"at degree {hi + 1}")
    h = GrowthSeries._raw(spec, out)
    cert = LinearCertificate({n: (norm_weighted(h, n), norm_weighted(h_prime, n))
                              for n in weights})
    return h, cert


def substitute(f, var, g, *, polynomial=False):
    """Compose f with var -> g, truncated to the combined window.

    Allowed when g has Gauss norm <= 1 or the caller asserts that f is a
    polynomial in ``var``; otherwise :class:`DivergentSubstitution`.
    """
    spec = f.spec
    if g.spec.prime != spec.prime:
        raise SpecMismatch("prime mismatch")
    pos = spec.position(var)
    if not polynomial and gauss_norm(g) > 1:
        raise DivergentSubstitution(
            f"substituting a series of Gauss norm {format_rational(gauss_norm(g))} > 1 "
            f"into a non-polynomial series in {var}")
    names, window = [], []
    for v, w in zip(spec.vars, spec.window):
        if v != var:
            names.append(v)
            window.append(w)
    for v, (lo, hi) in zip(g.spec.vars, g.spec.window):
        if v in names:
            k = names.index(v)
            olo, ohi = window[k]
            window[k] = (max(lo, olo), min(hi, ohi))
        else:
            names.append(v)
            window.append((lo, hi))
    out_spec = SeriesSpec(spec.prime, tuple(names), tuple(window))
    pos_out = [out_spec.position(v) for v in spec.vars if v != var]
    groups = {}
    for index, c in f.coeffs.items():
        k = index[pos]
        if k < 0:
            raise TemperedError(f"cannot substitute into negative powers of {var}")
        rest = index[:pos] + index[pos + 1:]
        new = [0] * out_spec.nvars
        for p_, j in zip(pos_out, rest):
            new[p_] = j
        new = tuple(new)
        if out_spec.contains(new):
            groups.setdefault(k, {})[new] = c
    result = GrowthSeries.zero(out_spec)
    if not groups:
        return result
    gg = g.embed(out_spec)
    gpow = GrowthSeries.constant(out_spec, 1)
    for k in range(max(groups) + 1):
        if k:
            gpow = mul(gpow, gg)
        if k in groups:
            result = result + mul(GrowthSeries._raw(out_spec, groups[k]), gpow)
    return result


@dataclass(frozen=True)
class GrowthClass:
    """A named norm family; ``param`` is the weight n or a radius exponent."""

    kind: str
    param: int = 0

    KINDS = ("tate", "bounded", "tempered", "open-disk", "fast",
             "temp-at-infinity", "fast-over-temp-infinity", "amice")
    LAURENT = ("temp-at-infinity", "fast-over-temp-infinity", "amice")

    def __post_init__(self):
        kind = self.kind.replace("_", "-")
        if kind not in self.KINDS:
            raise ValueError(f"unknown growth class {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if kind in ("tempered", "fast") and self.param < 0:
            raise ValueError("tempered/fast weight must be >= 0")

    @classmethod
    def tempered(cls, n):
        return cls("tempered", n)

    @classmethod
    def fast(cls, n):
        return cls("fast", n)

    @property
    def allows_laurent(self):
        return self.kind in self.LAURENT

    def norm(self, f):
        """The exact norm that defines the family at its parameter."""
        if self.kind == "tempered":
            return norm_weighted(f, self.param)
        if self.kind == "fast":
            return norm_weighted(f, -self.param)
        return norm_weighted(f, 0)


# -- text format -------------------------------------------------------------

HEADER_KEYS = ("prime", "vars", "window")


def strip_comment(line):
    return line.split("#", 1)[0].strip()


def parse_window(text, nvars=None):
    window = []
    for part in text.split(","):
        lo, sep, hi = part.strip().partition("..")
        if not sep:
            raise FormatError(f"bad window range {part!r}")
        try:
            window.append((int(lo), int(hi)))
        except ValueError:
            raise FormatError(f"bad window range {part!r}") from None
    if nvars is not None and len(window) != nvars:
        raise FormatError("window needs one range per variable")
    return tuple(window)


def parse_vars(text):
    names = tuple(v.strip() for v in text.split(","))
    if not all(names):
        raise FormatError(f"bad variable list {text!r}")
    return names


def make_spec(header):
    for key in HEADER_KEYS:
        if key not in header:
            raise FormatError(f"missing header key {key!r}")
    try:
        prime = Prime(int(header["prime"]))
        names = parse_vars(header["vars"])
        return SeriesSpec(prime, names, parse_window(header["window"], len(names)))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def parse_body_line(line, nvars):
    left, sep, right = line.partition(":")
    if not sep:
        raise FormatError(f"expected '<indices> : <rational>', got {line!r}")
    try:
        index = tuple(int(j) for j in left.split(","))
    except ValueError:
        raise FormatError(f"bad index list {left!r}") from None
    if len(index) != nvars:
        raise FormatError(f"index {index} does not match {nvars} variables")
    return index, parse_rational(right)


def body_to_series(spec, lines):
    coeffs = {}
    for line in lines:
        index, c = parse_body_line(line, spec.nvars)
        if index in coeffs:
            raise FormatError(f"duplicate index {index}")
        if not spec.contains(index):
            raise FormatError(f"index {index} outside window {spec.window}")
        coeffs[index] = c
    return GrowthSeries(spec, coeffs)


def parse_series(text):
    header, body, _ = read_sections(text, HEADER_KEYS)
    return body_to_series(make_spec(header), body)


def format_header(spec):
    window = ",".join(f"{lo}..{hi}" for lo, hi in spec.window)
    return [f"prime: {int(spec.prime)}", f"vars: {','.join(spec.vars)}",
            f"window: {window}"]


def format_body(f):
    return [f"{','.join(map(str, index))} : {format_rational(c)}"
            for index, c in f.items()]


def format_series(f):
    return "\n".join(format_header(f.spec) + format_body(f)) + "\n"


def read_sections(text, keys, block_words=()):
    """Split a format file into header values, loose body lines and blocks.

    A block starts with ``<word> <label>:`` for a word in ``block_words``;
    following body lines belong to it. Header keys must be in ``keys``.
    """
    header, body, blocks = {}, [], []
    for raw in text.splitlines():
        line = strip_comment(raw)
        if not line:
            continue
        first = line.split(None, 1)[0].rstrip(":")
        if first in block_words and line.endswith(":"):
            label = line[len(first):-1].strip()
            blocks.append((first, label, []))
            continue
        key, sep, value = line.partition(":")
        key = key.strip()
        if sep and key and key[0].isalpha() and not any(ch.isspace() for ch in key):
            if key not in keys:
                raise FormatError(f"unknown key {key!r}")
            if key in header:
                raise FormatError(f"duplicate key {key!r}")
            header[key] = value.strip()
        elif blocks:
            blocks[-1][2].append(line)
        else:
            body.append(line)
    return header, body, blocks
