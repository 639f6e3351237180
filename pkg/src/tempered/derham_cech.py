"""Truncated de Rham and Cech-de Rham complexes with exact ranks.

Differential forms are spanned by monomials x^e dx_I. A variable that
appears in I has exponent range shifted down by one (down to lo - 1 on a
Laurent side), so d maps each window onto the next one with no truncation
at the edges. Matrices are integer and sparse; ranks are computed by the
fraction-free elimination kernel.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import FormatError, PresentationDefect, TemperedError, WindowError
from .kernels import sparse_rank
from .padic_arith import Prime
from .tube_engine import TubePresentation, weak_fibration_data

__all__ = ["AlgebraModel", "CochainComplex", "Overlap", "CoverSpec",
           "de_rham_complex", "cohomology_dims", "cech_de_rham",
           "tube_components", "compare_weak_fibration", "parse_cover",
           "format_cover", "dims_csv", "projective_line", "FibrationReport"]

POLYDISK_KINDS = ("tempered-polydisk", "tate-polydisk")
KINDS = POLYDISK_KINDS + ("laurent-annulus", "tube")


@dataclass(frozen=True)
class AlgebraModel:
    kind: str
    vars: tuple
    window: tuple
    prime: Prime = Prime(2)
    pres: TubePresentation | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        object.__setattr__(self, "prime", Prime(self.prime))
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "window", tuple(tuple(w) for w in self.window))
        if len(self.vars) != len(self.window):
            raise ValueError("one window range per variable is required")
        if self.kind in POLYDISK_KINDS and any(lo != 0 for lo, _ in self.window):
            raise ValueError("polydisk windows start at 0")
        if self.kind == "tube" and self.pres is None:
            raise ValueError("a tube model needs a presentation")

    @classmethod
    def polydisk(cls, d, N, prime=2, kind="tempered-polydisk", vars=None):
        vars = tuple(vars) if vars else (("t",) if d == 1 else
                                         tuple(f"x{i}" for i in range(1, d + 1)))
        return cls(kind, vars, ((0, N),) * d, prime)

    @classmethod
    def annulus(cls, lo, hi, prime=2, var="u"):
        return cls("laurent-annulus", (var,), ((lo, hi),), prime)

    @classmethod
    def tube(cls, pres):
        N = pres.N
        return cls("tube", pres.xvars, ((0, N),) * len(pres.xvars), pres.prime, pres)


def _form_ranges(window, I):
    return [(lo - 1 if (i in I and lo < 0) else lo, hi - 1 if i in I else hi)
            for i, (lo, hi) in enumerate(window)]


def _form_basis(window, k):
    basis = []
    for I in combinations(range(len(window)), k):
        ranges = _form_ranges(window, I)
        for e in product(*(range(lo, hi + 1) for lo, hi in ranges)):
            basis.append((I, e))
    return basis


def _wedge_insert(j, I):
    """dx_j ^ dx_I = sign * dx_J with J sorted."""
    sign = -1 if sum(1 for i in I if i < j) % 2 else 1
    return sign, tuple(sorted(I + (j,)))


def _d_image(I, e):
    out = []
    for j in range(len(e)):
        if j in I or e[j] == 0:
            continue
        sign, J = _wedge_insert(j, I)
        new = e[:j] + (e[j] - 1,) + e[j + 1:]
        out.append(((J, new), sign * e[j]))
    return out


@dataclass
class CochainComplex:
    """Graded bases and sparse differentials; d[k][c] = {row: int}."""
    bases: list
    differentials: list
    labels: tuple = ()
    _ranks: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.differentials) != max(len(self.bases) - 1, 0):
            raise ValueError("need one differential between consecutive degrees")
        for k, d in enumerate(self.differentials):
            if len(d) != len(self.bases[k]):
                raise ValueError(f"d_{k} has the wrong number of columns")
        self.check_dd()

    @property
    def dims(self):
        return [len(b) for b in self.bases]

    def check_dd(self):
        for k in range(len(self.differentials) - 1):
            d0, d1 = self.differentials[k], self.differentials[k + 1]
            for col in d0:
                acc = {}
                for r, v in col.items():
                    for r2, w in d1[r].items():
                        acc[r2] = acc.get(r2, 0) + v * w
                if any(acc.values()):
                    raise TemperedError(f"d o d != 0 in degree {k}")

    def rank(self, k):
        if k < 0 or k >= len(self.differentials):
            return 0
        if k not in self._ranks:
            self._ranks[k] = sparse_rank(self.differentials[k])
        return self._ranks[k]


def _direct_sum(parts, tags):
    bases, diffs = [], []
    top = max(len(c.bases) for c in parts)
    offsets = []
    for k in range(top):
        basis, offs = [], []
        for tag, c in zip(tags, parts):
            offs.append(len(basis))
            if k < len(c.bases):
                basis.extend((tag,) + tuple(b) if isinstance(b, tuple) else (tag, b)
                             for b in c.bases[k])
        bases.append(basis)
        offsets.append(offs)
    for k in range(top - 1):
        cols = []
        for idx, c in enumerate(parts):
            if k < len(c.differentials):
                off = offsets[k + 1][idx]
                cols.extend({r + off: v for r, v in col.items()} for col in c.differentials[k])
            elif k < len(c.bases):
                cols.extend({} for _ in c.bases[k])
        diffs.append(cols)
    return CochainComplex(bases, diffs)


def tube_components(pres):
    """Residue points of a coordinate-separable presentation.

    Each lift must be a polynomial in one ambient variable, a different
    one per lift. Returns the list of root tuples ``{var: root mod p}``;
    a repeated root is a presentation defect.
    """
    p = pres.prime
    used = {}
    for i, f in enumerate(pres.lifts):
        active = {k for index in f.coeffs for k, j in enumerate(index) if j}
        if len(active) > 1:
            raise TemperedError("tube model needs lifts in separate coordinates")
        pos = active.pop() if active else None
        if pos is not None and pos in used:
            raise TemperedError("tube model needs lifts in separate coordinates")
        poly = {}
        for index, c in f.coeffs.items():
            e = index[pos] if pos is not None else 0
            poly[e] = (poly.get(e, 0) + c.numerator * pow(c.denominator, -1, p)) % p
        poly = {e: c for e, c in poly.items() if c}
        if pos is None:
            if not poly:
                raise PresentationDefect(f"lift {i + 1} vanishes mod p")
            return []            # unit constant: empty tube
        if not poly:
            raise PresentationDefect(f"lift {i + 1} vanishes mod p")
        roots = []
        for r in range(p):
            if sum(c * pow(r, e, p) for e, c in poly.items()) % p == 0:
                if sum(e * c * pow(r, e - 1, p) for e, c in poly.items() if e) % p == 0:
                    raise PresentationDefect(f"lift {i + 1} has a repeated root {r} mod p")
                roots.append(r)
        used[pos] = roots
    names = pres.xvars
    keys = sorted(used)
    return [dict(zip((names[k] for k in keys), combo))
            for combo in product(*(used[k] for k in keys))]


def de_rham_complex(alg):
    if alg.kind == "tube":
        comps = tube_components(alg.pres)
        n = len(alg.vars)
        disk = AlgebraModel("tempered-polydisk", alg.vars, alg.window, alg.prime)
        if not comps:
            return CochainComplex([[] for _ in range(n + 1)], [[] for _ in range(n)])
        tags = [tuple(sorted(c.items())) for c in comps]
        return _direct_sum([de_rham_complex(disk)] * len(comps), tags)
    window = alg.window
    n = len(window)
    bases = [_form_basis(window, k) for k in range(n + 1)]
    index = [{b: i for i, b in enumerate(basis)} for basis in bases]
    diffs = []
    for k in range(n):
        cols = []
        for I, e in bases[k]:
            col = {}
            for target, c in _d_image(I, e):
                col[index[k + 1][target]] = c
            cols.append(col)
        diffs.append(cols)
    return CochainComplex(bases, diffs)


def cohomology_dims(cx):
    return [len(b) - cx.rank(k) - cx.rank(k - 1) for k, b in enumerate(cx.bases)]


# -- covers ------------------------------------------------------------------

@dataclass(frozen=True)
class Overlap:
    a: str
    b: str
    model: AlgebraModel
    maps: dict          # chart name -> {chart var: (overlap var, exponent)}


@dataclass(frozen=True)
class CoverSpec:
    prime: Prime
    charts: dict        # name -> AlgebraModel (insertion order is the Cech order)
    overlaps: tuple = ()

    def __post_init__(self):
        names = list(self.charts)
        for ov in self.overlaps:
            if ov.a not in self.charts or ov.b not in self.charts:
                raise ValueError(f"overlap {ov.a} {ov.b} names an unknown chart")
            if names.index(ov.a) >= names.index(ov.b):
                raise ValueError("overlaps must list charts in declaration order")
            for chart in (ov.a, ov.b):
                m = ov.maps.get(chart, {})
                if set(m) != set(self.charts[chart].vars):
                    raise ValueError(f"every variable of {chart} needs a map into {ov.a} {ov.b}")
                targets = [u for u, _ in m.values()]
                if len(set(targets)) != len(targets) or not set(targets) <= set(ov.model.vars):
                    raise ValueError(f"maps of {chart} must hit distinct overlap variables")
                if any(e == 0 for _, e in m.values()):
                    raise ValueError("map exponents must be nonzero")


def _restrict_form(chart, ov_model, m, I, e):
    """Pull x^e dx_I along x_i -> u^(k_i); returns (target, coefficient)."""
    n_out = len(ov_model.vars)
    exps = [0] * n_out
    coeff = 1
    pos = []
    for i, var in enumerate(chart.vars):
        u, k = m[var]
        j = ov_model.vars.index(u)
        exps[j] += k * e[i]
        if i in I:
            exps[j] += k - 1
            coeff *= k
            pos.append(j)
    # sort the wedge and track the sign
    sign = 1
    for x in range(len(pos)):
        for y in range(x + 1, len(pos)):
            if pos[x] > pos[y]:
                sign = -sign
    return (tuple(sorted(pos)), tuple(exps)), sign * coeff


def cech_de_rham(cover):
    """Total complex of the two-level Cech-de Rham double complex, D = d + (-1)^q delta."""
    chart_cx = {name: de_rham_complex(m) for name, m in cover.charts.items()}
    ov_cx = [de_rham_complex(ov.model) for ov in cover.overlaps]
    top = max([len(c.bases) for c in chart_cx.values()]
              + [len(c.bases) + 1 for c in ov_cx])
    bases, offsets = [], []
    for k in range(top):
        basis, offs = [], {}
        for name, cx in chart_cx.items():
            offs[("chart", name)] = len(basis)
            if k < len(cx.bases):
                basis.extend((name,) + b for b in cx.bases[k])
        for idx, (ov, cx) in enumerate(zip(cover.overlaps, ov_cx)):
            offs[("overlap", idx)] = len(basis)
            if 0 <= k - 1 < len(cx.bases):
                basis.extend((f"{ov.a}{ov.b}",) + b for b in cx.bases[k - 1])
        bases.append(basis)
        offsets.append(offs)
    ov_index = [[{b: i for i, b in enumerate(basis)} for basis in cx.bases] for cx in ov_cx]
    diffs = []
    for k in range(top - 1):
        cols = []
        for name, cx in chart_cx.items():
            if k >= len(cx.bases):
                continue
            for c, (I, e) in enumerate(cx.bases[k]):
                col = {}
                if k < len(cx.differentials):
                    off = offsets[k + 1][("chart", name)]
                    for r, v in cx.differentials[k][c].items():
                        col[off + r] = v
                for idx, ov in enumerate(cover.overlaps):
                    if name not in (ov.a, ov.b):
                        continue
                    target, coeff = _restrict_form(cover.charts[name], ov.model,
                                                   ov.maps[name], I, e)
                    if k >= len(ov_index[idx]) or target not in ov_index[idx][k]:
                        raise WindowError(f"incompatible windows: {name} does not restrict "
                                          f"into overlap {ov.a} {ov.b}")
                    sign = (1 if name == ov.b else -1) * (-1 if k % 2 else 1)
                    r = offsets[k + 1][("overlap", idx)] + ov_index[idx][k][target]
                    col[r] = col.get(r, 0) + sign * coeff
                cols.append({r: v for r, v in col.items() if v})
        for idx, cx in enumerate(ov_cx):
            q = k - 1
            if not 0 <= q < len(cx.bases):
                continue
            for c in range(len(cx.bases[q])):
                col = {}
                if q < len(cx.differentials):
                    off = offsets[k + 1][("overlap", idx)]
                    col = {off + r: v for r, v in cx.differentials[q][c].items()}
                cols.append(col)
        diffs.append(cols)
    return CochainComplex(bases, diffs)


def projective_line(N, prime=2):
    """Two Tate disks in t and s = 1/t glued along the annulus -N..N."""
    U = AlgebraModel.polydisk(1, N, prime, "tate-polydisk", ("t",))
    V = AlgebraModel.polydisk(1, N, prime, "tate-polydisk", ("s",))
    W = AlgebraModel.annulus(-N, N, prime, "u")
    ov = Overlap("U", "V", W, {"U": {"t": ("u", 1)}, "V": {"s": ("u", -1)}})
    return CoverSpec(prime, {"U": U, "V": V}, (ov,))


# -- weak fibration ----------------------------------------------------------

@dataclass(frozen=True)
class FibrationReport:
    d: int
    base_dims: tuple
    fibred_dims: tuple
    verdict: str


def compare_weak_fibration(pres, d):
    base = tuple(cohomology_dims(de_rham_complex(AlgebraModel.tube(pres))))
    fibred = tuple(cohomology_dims(de_rham_complex(
        AlgebraModel.tube(weak_fibration_data(pres, d)))))
    shared = min(len(base), len(fibred))
    ok = base[:shared] == fibred[:shared] and not any(base[shared:] + fibred[shared:])
    return FibrationReport(d, base, fibred, "consistent" if ok else "inconsistent")


# -- text formats ------------------------------------------------------------

def _model_from(kind, vars, N, prime):
    if kind in POLYDISK_KINDS:
        return AlgebraModel(kind, vars, ((0, N),) * len(vars), prime)
    if kind == "laurent-annulus":
        return AlgebraModel(kind, vars, ((-N, N),) * len(vars), prime)
    raise FormatError(f"unsupported chart kind {kind!r}")


def parse_cover(text, N=None):
    """Parse a cover description; ``N`` overrides any ``trunc:`` line."""
    prime, trunc = None, None
    charts, overlaps, maps = {}, [], []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word = line.split(None, 1)[0].rstrip(":")
        rest = line[len(word):].lstrip(":").strip()
        try:
            if word == "prime":
                prime = Prime(int(rest))
            elif word == "trunc":
                trunc = int(rest)
            elif word in ("chart", "overlap"):
                names, sep, model = rest.partition(":")
                kind, _, vs = model.strip().partition(" ")
                vars = tuple(v.strip() for v in vs.split(",") if v.strip())
                if not sep or not vars:
                    raise FormatError(f"bad {word} line {line!r}")
                names = names.split()
                if word == "chart" and len(names) == 1:
                    charts[names[0]] = (kind, vars)
                elif word == "overlap" and len(names) == 2:
                    overlaps.append((names[0], names[1], kind, vars))
                else:
                    raise FormatError(f"bad {word} line {line!r}")
            elif word == "map":
                lhs, sep, rhs = rest.partition("=")
                chart, _, var = lhs.strip().partition(" ")
                base, caret, exp = rhs.strip().partition("^")
                if not sep or not var.strip():
                    raise FormatError(f"bad map line {line!r}")
                maps.append((chart, var.strip(), base.strip(), int(exp) if caret else 1))
            else:
                raise FormatError(f"unknown cover line {line!r}")
        except ValueError as exc:
            raise FormatError(f"bad cover line {line!r}: {exc}") from None
    if prime is None:
        raise FormatError("missing header key 'prime'")
    N = N if N is not None else trunc
    if N is None:
        raise FormatError("a truncation is required (trunc: line or --trunc)")
    models = {name: _model_from(kind, vars, N, prime) for name, (kind, vars) in charts.items()}
    owner = {}
    ov_maps = []
    for idx, (a, b, kind, vars) in enumerate(overlaps):
        for v in vars:
            if v in owner:
                raise FormatError(f"overlap variable {v!r} used twice")
            owner[v] = idx
        ov_maps.append({a: {}, b: {}})
    for chart, var, u, e in maps:
        if u not in owner:
            raise FormatError(f"map target {u!r} is not an overlap variable")
        m = ov_maps[owner[u]]
        if chart not in m:
            raise FormatError(f"chart {chart!r} is not part of the overlap of {u!r}")
        m[chart][var] = (u, e)
    try:
        ovs = tuple(Overlap(a, b, _model_from(kind, vars, N, prime), ov_maps[i])
                    for i, (a, b, kind, vars) in enumerate(overlaps))
        return CoverSpec(prime, models, ovs)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_cover(cover, N=None):
    lines = [f"prime: {int(cover.prime)}"]
    if N is not None:
        lines.append(f"trunc: {N}")
    for name, m in cover.charts.items():
        lines.append(f"chart {name}: {m.kind} {','.join(m.vars)}")
    for ov in cover.overlaps:
        lines.append(f"overlap {ov.a} {ov.b}: {ov.model.kind} {','.join(ov.model.vars)}")
    for ov in cover.overlaps:
        for chart in (ov.a, ov.b):
            for var, (u, e) in ov.maps[chart].items():
                lines.append(f"map {chart} {var} = {u}" + (f"^{e}" if e != 1 else ""))
    return "\n".join(lines) + "\n"


def dims_csv(dims, N=None):
    lead = f"{N}," if N is not None else ""
    return "".join(f"{lead}{k},{v}\n" for k, v in enumerate(dims))
