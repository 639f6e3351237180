"""Named open subsets of the affine line and finite membership tests.

A finite window can refute membership in an asymptotic class but never prove
it, so every positive verdict reads "member up to truncation". The decision
uses doubling blocks of indices: the weighted coefficient sizes are maximised
over (T/2, T] for the last few doublings T of the window, and a class passes
when those block maxima stop growing (ratio below 1 + eps).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SpecMismatch
from .growth_series import GrowthClass, GrowthSeries, SeriesSpec, norm_weighted
from .padic_arith import abs_value

EPSILON = Fraction(1, 4)
MEMBER = "member-up-to-truncation"
REJECTED = "rejected"

__all__ = [
    "EPSILON", "MEMBER", "REJECTED", "MembershipReport", "CoverSplit",
    "PairingCertificate", "InclusionFact", "OpenCatalogEntry", "CATALOG",
    "doubling_truncations", "weighted_profile", "least_stable_weight",
    "membership", "split_cover", "pair_dual", "lattice_relations",
    "query_inclusion",
]


def doubling_truncations(length):
    """Up to four truncation points length/8, length/4, length/2, length."""
    return sorted({length >> k for k in range(4) if length >> k >= 1})


@dataclass(frozen=True)
class SideProfile:
    truncations: tuple
    blocks: tuple       # (sup, argmax) per block
    prefix: tuple       # (T, sup over k <= T)


def weighted_profile(values, n, length):
    """Block and prefix maxima of |a_k| (k+1)^(-n) over doubling truncations.

    ``values`` maps a side index k >= 0 to |a_k|.
    """
    ts = doubling_truncations(length)
    if not ts:
        ts = [0]
    blocks, prefix = [], []
    running = Fraction(0)
    start = 0
    for t in ts:
        best, arg = Fraction(0), None
        for k in range(start, t + 1):
            v = values.get(k)
            if not v:
                continue
            w = v * Fraction(k + 1) ** -n if n else v
            if w > best:
                best, arg = w, k
        blocks.append((best, arg))
        running = max(running, best)
        prefix.append((t, running))
        start = t + 1
    return SideProfile(tuple(ts), tuple(blocks), tuple(prefix))


def _first_growth(profile, eps, rate=None):
    """Index of the block that breaks stabilization, or None.

    With ``rate`` the allowed growth between blocks is rate**gap instead of
    a flat factor (used for the radius test of the open disk).
    """
    blocks, ts = profile.blocks, profile.truncations
    for k in range(max(1, len(blocks) - 2), len(blocks)):
        prev, cur = blocks[k - 1][0], blocks[k][0]
        if not prev:
            continue
        allowed = (1 + eps) if rate is None else rate ** (ts[k] - ts[k - 1])
        if cur > allowed * prev:
            return k
    return None


def least_stable_weight(values, length, n_max, eps=EPSILON):
    """Smallest n <= n_max whose weighted profile stabilizes, else None."""
    for n in range(n_max + 1):
        if _first_growth(weighted_profile(values, n, length), eps) is None:
            return n
    return None


def _side_values(f, sign):
    """|a_k| on one side: sign=+1 reads k >= 0, sign=-1 reads a_{-k}, k >= 1."""
    p = f.spec.prime
    out = {}
    for (i,), c in f.coeffs.items():
        if sign > 0 and i >= 0:
            out[i] = abs_value(c, p)
        elif sign < 0 and i < 0:
            out[-i] = abs_value(c, p)
    return out


@dataclass
class MembershipReport:
    cls: GrowthClass
    verdict: str
    witness: int | None
    profile: list
    violation: tuple | None = None
    n_max: int = 0
    notes: list = field(default_factory=list)

    @property
    def member(self):
        return self.verdict == MEMBER


@dataclass
class _SideResult:
    ok: bool
    witness: int | None
    profile: list
    violation: tuple | None


def _tempered_side(values, length, n_max, eps, side):
    n = least_stable_weight(values, length, n_max, eps)
    if n is not None:
        return _SideResult(True, n, list(weighted_profile(values, n, length).prefix), None)
    prof = weighted_profile(values, n_max, length)
    k = _first_growth(prof, eps)
    return _SideResult(False, None, list(prof.prefix), (side * prof.blocks[k][1], n_max))


def _fast_side(values, length, n_max, eps, side):
    for n in range(n_max + 1):
        prof = weighted_profile(values, -n, length)
        k = _first_growth(prof, eps)
        if k is not None:
            return _SideResult(False, None, list(prof.prefix), (side * prof.blocks[k][1], -n))
    return _SideResult(True, None, list(weighted_profile(values, -n_max, length).prefix), None)


def _tate_side(values, length, side):
    prof = weighted_profile(values, 0, length)
    blocks = prof.blocks
    last = blocks[-1][0]
    if not last or len(blocks) == 1:
        return _SideResult(True, 0, list(prof.prefix), None)
    k = _first_growth(prof, Fraction(0))
    if k is None and last < blocks[0][0]:
        return _SideResult(True, 0, list(prof.prefix), None)
    k = len(blocks) - 1 if k is None else k
    return _SideResult(False, None, list(prof.prefix), (side * blocks[k][1], 0))


def _open_disk_side(values, length, p, radius_exp, eps, side):
    prof = weighted_profile(values, 0, length)
    rate = (1 + eps) * Fraction(p) ** radius_exp
    k = _first_growth(prof, eps, rate=rate)
    if k is None:
        return _SideResult(True, 0, list(prof.prefix), None)
    return _SideResult(False, None, list(prof.prefix), (side * prof.blocks[k][1], 0))


def membership(f, cls, n_max=8, eps=EPSILON):
    """Finite membership test of a univariate series in a growth class."""
    if isinstance(cls, str):
        cls = GrowthClass(cls)
    spec = f.spec
    if spec.nvars != 1:
        raise SpecMismatch("membership is defined for univariate series")
    lo, hi = spec.window[0]
    if lo < 0 and not cls.allows_laurent:
        raise SpecMismatch(f"class {cls.kind!r} does not accept a Laurent window")
    plus, minus = _side_values(f, 1), _side_values(f, -1)
    kind = cls.kind
    if kind == "tempered":
        r = _tempered_side(plus, hi, n_max, eps, 1)
        parts = [r]
    elif kind == "bounded":
        r = _tempered_side(plus, hi, 0, eps, 1)
        parts = [r]
    elif kind == "tate":
        r = _tate_side(plus, hi, 1)
        parts = [r]
    elif kind == "open-disk":
        r = _open_disk_side(plus, hi, spec.prime, cls.param, eps, 1)
        parts = [r]
    elif kind == "fast":
        r = _fast_side(plus, hi, n_max, eps, 1)
        parts = [r]
    elif kind == "temp-at-infinity":
        r = _tempered_side(minus, -lo, n_max, eps, -1)
        parts = [r]
    elif kind == "fast-over-temp-infinity":
        neg = _fast_side(minus, -lo, n_max, eps, -1)
        pos = _tempered_side(plus, hi, n_max, eps, 1)
        parts = [pos, neg]
        r = pos
    else:  # amice
        neg = _tate_side(minus, -lo, -1)
        pos = _tempered_side(plus, hi, 0, eps, 1)
        parts = [pos, neg]
        r = pos
    failed = [s for s in parts if not s.ok]
    if failed:
        return MembershipReport(cls, REJECTED, None, failed[0].profile,
                                failed[0].violation, n_max)
    return MembershipReport(cls, MEMBER, r.witness, r.profile, None, n_max)


@dataclass
class CoverSplit:
    infinity: GrowthSeries
    fast: GrowthSeries
    infinity_report: MembershipReport
    fast_report: MembershipReport

    def __iter__(self):
        return iter((self.infinity, self.fast))


def split_cover(f, n_max=8):
    """Split a Laurent series into its t^{<0} part and its t^{>=0} part.

    Constants go to the power-series side. Each part is tested against its
    class: the negative part against temp-at-infinity, the other against fast.
    """
    spec = f.spec
    if spec.nvars != 1:
        raise SpecMismatch("split_cover needs a univariate series")
    neg = {k: c for k, c in f.coeffs.items() if k[0] < 0}
    pos = {k: c for k, c in f.coeffs.items() if k[0] >= 0}
    f_inf = GrowthSeries(spec, neg)
    f_fast = GrowthSeries(spec, pos)
    lo, hi = spec.window[0]
    plus_spec = SeriesSpec(spec.prime, spec.vars, ((0, hi),))
    inf_report = membership(f_inf, GrowthClass("temp-at-infinity"), n_max)
    fast_report = membership(f_fast.restrict(plus_spec), GrowthClass("fast"), n_max)
    return CoverSplit(f_inf, f_fast, inf_report, fast_report)


@dataclass(frozen=True)
class PairingCertificate:
    weight: int
    value_abs: Fraction
    bound: Fraction

    @property
    def holds(self):
        return self.value_abs <= self.bound


def pair_dual(f, g, n=0):
    """sum_i a_i b_i with the bound |sum| <= ||f||_n ||g||_{-n}."""
    if f.spec != g.spec:
        raise SpecMismatch("pair_dual needs matching windows")
    if f.spec.nvars != 1:
        raise SpecMismatch("pair_dual needs univariate series")
    value = sum((c * g.coeffs[k] for k, c in f.coeffs.items() if k in g.coeffs),
                Fraction(0))
    cert = PairingCertificate(n, abs_value(value, f.spec.prime),
                              norm_weighted(f, n) * norm_weighted(g, -n))
    return value, cert


# -- catalog -------------------------------------------------------------------

@dataclass(frozen=True)
class OpenCatalogEntry:
    name: str
    cls: GrowthClass
    description: str


CATALOG = {e.name: e for e in (
    OpenCatalogEntry("tate", GrowthClass("tate"),
                     "closed unit disk: coefficients tend to zero"),
    OpenCatalogEntry("bounded", GrowthClass("bounded"),
                     "bounded unit disk: coefficients bounded"),
    OpenCatalogEntry("tempered", GrowthClass("tempered"),
                     "tempered unit disk: |a_i| <= C (i+1)^n for some n"),
    OpenCatalogEntry("open-disk", GrowthClass("open-disk"),
                     "open unit disk: converges for |t| < 1"),
    OpenCatalogEntry("fast", GrowthClass("fast"),
                     "fast converging disk at 0: |a_i| i^n -> 0 for all n"),
    OpenCatalogEntry("temp-at-infinity", GrowthClass("temp-at-infinity"),
                     "punctured tempered disk at infinity: tempered in 1/t, polynomial in t"),
    OpenCatalogEntry("fast-over-temp-infinity", GrowthClass("fast-over-temp-infinity"),
                     "intersection of the two cover pieces: fast decay towards -inf, "
                     "tempered growth towards +inf"),
    OpenCatalogEntry("amice", GrowthClass("amice"),
                     "Amice ring: |a_i| -> 0 as i -> -inf, bounded as i -> +inf"),
)}


@dataclass(frozen=True)
class InclusionFact:
    smaller: str
    larger: str
    kind: str = "inclusion"
    source: str = ""


def lattice_relations():
    """Static inclusion, cover and intersection facts among the catalog opens."""
    chain = ("closed disk contains the bounded disk, which contains the "
             "tempered disk, which contains the open disk")
    cover = "tempered disk at infinity and fast disk at 0 cover the line"
    return [
        InclusionFact("open-disk", "tempered", source=chain),
        InclusionFact("tempered", "bounded", source=chain),
        InclusionFact("bounded", "tate", source=chain),
        InclusionFact("fast-over-temp-infinity", "temp-at-infinity",
                      kind="intersection", source=cover),
        InclusionFact("fast-over-temp-infinity", "fast",
                      kind="intersection", source=cover),
        InclusionFact("temp-at-infinity", "line", kind="cover", source=cover),
        InclusionFact("fast", "line", kind="cover", source=cover),
        InclusionFact("amice", "bounded", kind="intersection",
                      source="Amice ring is a derived intersection with the bounded disk"),
    ]


def query_inclusion(smaller, larger):
    """Reflexive-transitive closure of the inclusion and intersection facts."""
    for name in (smaller, larger):
        if name not in CATALOG:
            raise ValueError(f"unknown class {name!r}; known: {', '.join(sorted(CATALOG))}")
    if smaller == larger:
        return True
    edges = {}
    for fact in lattice_relations():
        edges.setdefault(fact.smaller, set()).add(fact.larger)
    seen, stack = set(), [smaller]
    while stack:
        node = stack.pop()
        for nxt in edges.get(node, ()):
            if nxt == larger:
                return True
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False
