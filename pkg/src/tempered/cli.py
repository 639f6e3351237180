"""Command line driver: ``tempered <subcommand> [options]``.

Exit status is 0 on success, 1 on a domain error and 2 on malformed input
or usage errors. Every number is printed as an exact rational.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from . import derham_cech as dc
from . import growth_series as gs
from . import line_opens as lo
from . import ode_solver as ode
from . import tube_engine as te
from .errors import FormatError, TemperedError, WindowError
from .padic_arith import Prime, format_rational, parse_rational

__all__ = ["main", "build_parser"]

fr = format_rational


@dataclass
class Report:
    lines: list = field(default_factory=list)
    rows: list = field(default_factory=list)


# -- input helpers -----------------------------------------------------------

def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None


def _inputs(args, count, what):
    paths = args.input or []
    if len(paths) != count:
        raise FormatError(f"{args.command} expects {count} --input file(s): {what}")
    return [_read(p) for p in paths]


def _check_prime(args, prime):
    if args.prime is not None and int(args.prime) != int(prime):
        raise FormatError(f"--prime {args.prime} disagrees with the input prime {prime}")


def _series(args, text):
    f = gs.parse_series(text)
    _check_prime(args, f.spec.prime)
    return f


def truncate(f, N):
    """Restrict every window to [-N, N]; N beyond the data is an error."""
    spec = f.spec
    window = []
    for (lo_, hi), v in zip(spec.window, spec.vars):
        if N > hi and N > -lo_:
            raise WindowError(f"truncation {N} exceeds the window {lo_}..{hi} of {v}")
        window.append((max(lo_, -N), min(hi, N)))
    return f.restrict(gs.SeriesSpec(spec.prime, spec.vars, tuple(window)))


def _maybe_truncate(f, N):
    return f if N is None else truncate(f, N)


def _comment(key, value):
    if isinstance(value, bool):
        value = "holds" if value else "fails"
    elif not isinstance(value, (str, int)):
        value = fr(value)
    return f"# {key}: {value}"


# -- handlers ----------------------------------------------------------------

def cmd_norm(args, N):
    (text,) = _inputs(args, 1, "a series")
    f = _maybe_truncate(_series(args, text), N)
    n = args.weight or 0
    value = gs.norm_weighted(f, n)
    return Report([fr(value)], [[n, fr(value)]])


def _growth_class(args):
    kind, _, param = (args.cls or "tempered").partition(":")
    try:
        return gs.GrowthClass(kind, int(param) if param else 0)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def _membership_lines(rep):
    out = [f"class: {rep.cls.kind}", f"verdict: {rep.verdict}",
           f"witness: {'-' if rep.witness is None else rep.witness}"]
    for t, v in rep.profile:
        out.append(f"profile {t}: {fr(v)}")
    return out


def cmd_membership(args, N):
    (text,) = _inputs(args, 1, "a series")
    f = _maybe_truncate(_series(args, text), N)
    rep = lo.membership(f, _growth_class(args), args.nmax)
    witness = "" if rep.witness is None else rep.witness
    return Report(_membership_lines(rep), [[rep.cls.kind, rep.verdict, witness]])


def cmd_split_cover(args, N):
    (text,) = _inputs(args, 1, "a Laurent series")
    f = _maybe_truncate(_series(args, text), N)
    split = lo.split_cover(f, args.nmax)
    lines = ["# part at infinity"] + gs.format_series(split.infinity).splitlines()
    lines += ["# fast part"] + gs.format_series(split.fast).splitlines()
    rows = []
    for part, rep in (("infinity", split.infinity_report), ("fast", split.fast_report)):
        lines += [f"# {line}" for line in _membership_lines(rep)]
        rows.append([part, rep.cls.kind, rep.verdict])
    return Report(lines, rows)


def cmd_pair(args, N):
    a, b = _inputs(args, 2, "two series")
    f, g = (_maybe_truncate(_series(args, t), N) for t in (a, b))
    value, cert = lo.pair_dual(f, g, args.weight or 0)
    lines = [f"value: {fr(value)}", f"abs: {fr(cert.value_abs)}",
             f"bound: {fr(cert.bound)}", f"certificate: {'holds' if cert.holds else 'fails'}"]
    return Report(lines, [[fr(value), fr(cert.value_abs), fr(cert.bound)]])


def cmd_divide_diagonal(args, N):
    (text,) = _inputs(args, 1, "a bivariate series")
    f = _maybe_truncate(_series(args, text), N)
    q, cert = gs.divide_diagonal(f, args.weight or 0)
    lines = gs.format_series(q).splitlines() + [
        _comment("weight", cert.weight), _comment("quotient norm", cert.quotient_norm),
        _comment("bound", cert.bound), _comment("certificate", cert.holds)]
    return Report(lines, [[idx[0], idx[1], fr(c)] for idx, c in q.items()])


def cmd_divide_linear(args, N):
    (text,) = _inputs(args, 1, "the dividend series")
    f = _maybe_truncate(_series(args, text), N)
    n = args.weight or 0
    h, cert = gs.divide_linear(f, args.g, args.g_prime, (n,), exact=not args.series)
    norm_h, norm_hp = cert.norms[n]
    lines = gs.format_series(h).splitlines() + [
        _comment("weight", n), _comment("quotient norm", norm_h),
        _comment("dividend norm", norm_hp), _comment("certificate", cert.holds)]
    return Report(lines, [[idx[0], fr(c)] for idx, c in h.items()])


def _system(args):
    (text,) = _inputs(args, 1, "a differential system")
    sys_ = ode.parse_system(text)
    _check_prime(args, sys_.prime)
    return sys_


def cmd_ode_solve(args, N):
    sys_ = _system(args)
    N = sys_.max_order if N is None else N
    sol = ode.cauchy_solve(sys_, N, at_origin=not args.generic)
    lines, rows = [], []
    for m, G in enumerate(sol.series):
        for i, row in enumerate(G, 1):
            for j, e in enumerate(row, 1):
                if args.generic:
                    body = " + ".join(f"{fr(c)}*t^{k[0]}" for k, c in e.items()) or "0"
                    lines.append(f"G[{m}] {i} {j} : {body}")
                    rows.extend([m, i, j, k[0], fr(c)] for k, c in e.items())
                else:
                    c = e.constant_term()
                    lines.append(f"G[{m}](0) {i} {j} : {fr(c)}")
                    rows.append([m, i, j, fr(c)])
    return Report(lines, rows)


def cmd_tau(args, N):
    (text,) = _inputs(args, 1, "a univariate series")
    f = _series(args, text)
    if N is None:
        raise FormatError("tau needs --trunc N (the number of derivatives)")
    out = ode.taylor_generic(f, N)
    return Report(gs.format_series(out).splitlines(),
                  [[k[0], k[1], fr(c)] for k, c in out.items()])


def cmd_growth(args, N):
    (text,) = _inputs(args, 1, "a univariate series")
    f = _maybe_truncate(_series(args, text), N)
    if f.spec.nvars != 1 or f.spec.is_laurent:
        raise FormatError("growth reads the coefficients of a univariate power series")
    hi = f.spec.window[0][1]
    rep = ode.log_growth_estimate([f.coeff(i) for i in range(hi + 1)],
                                  f.spec.prime, args.nmax)
    return Report([f"order: {rep.describe()}"], [[rep.describe()]])


def cmd_transfer(args, N):
    sys_ = _system(args)
    N = sys_.max_order if N is None else N
    rep = ode.transfer_experiment(sys_, N, args.nmax)
    lines = [f"generic order: {rep.generic.describe()}",
             f"origin order: {rep.origin.describe()}",
             f"pointwise bound: {'holds' if rep.pointwise else 'fails'}",
             f"verdict: {rep.verdict}"]
    for m, (g, o) in enumerate(zip(rep.generic_norms, rep.origin_norms)):
        lines.append(f"m {m}: |G(0)| = {fr(o)}  gauss = {fr(g)}")
    return Report(lines, [[rep.generic.describe(), rep.origin.describe(), rep.verdict]])


def _presentation(args, text):
    pres = te.parse_presentation(text)
    _check_prime(args, pres.prime)
    return pres


def cmd_koszul_reduce(args, N):
    ptext, vtext = _inputs(args, 2, "a presentation and a Koszul vector")
    pres = _presentation(args, ptext)
    H = te.parse_vector(vtext)
    D, cert = te.koszul_reduce(H, pres, args.weight or 0)
    lines = te.format_vector(D).splitlines() + [
        _comment("weight", cert.weight), _comment("scale", cert.scale),
        _comment("input norm", cert.input_norm), _comment("output norm", cert.output_norm),
        _comment("scaled output norm", cert.scaled_output_norm),
        _comment("residual", "zero" if cert.residual_zero else "nonzero"),
        _comment("corrections", len(cert.ledger))]
    return Report(lines, [[cert.weight, fr(cert.scale), fr(cert.input_norm),
                           fr(cert.output_norm), int(cert.residual_zero), len(cert.ledger)]])


def cmd_normal_form(args, N):
    ptext, gtext = _inputs(args, 2, "a presentation and a series in x and y")
    pres = _presentation(args, ptext)
    g = _series(args, gtext)
    out = te.tube_normal_form(g, pres)
    return Report(gs.format_series(out).splitlines(),
                  [list(k) + [fr(c)] for k, c in out.items()])


def cmd_change_presentation(args, N):
    rtext, ftext = _inputs(args, 2, "a relation file and a coefficient series")
    rel = te.parse_relation(rtext)
    _check_prime(args, rel.prime)
    fam = _series(args, ftext)
    if fam.spec.nvars != rel.s:
        raise FormatError(f"coefficient series needs {rel.s} variables")
    out, cert = te.change_presentation(fam, rel, args.weight or 0)
    top = max((sum(k) for k in out), default=0)
    spec = gs.SeriesSpec.uniform(rel.prime, [f"g{j}" for j in range(1, rel.l + 1)], top)
    series = gs.GrowthSeries(spec, out)
    lines = gs.format_series(series).splitlines() + [
        _comment("weight", cert.weight), _comment("input norm", cert.input_norm),
        _comment("attained", cert.attained), _comment("bound", cert.bound),
        _comment("certificate", cert.holds)]
    return Report(lines, [list(k) + [fr(c)] for k, c in series.items()])


ALGEBRAS = {
    "tempered-disk": ("tempered-polydisk", 1),
    "tate-disk": ("tate-polydisk", 1),
    "tempered-bidisk": ("tempered-polydisk", 2),
    "tempered-polydisk": ("tempered-polydisk", None),
    "tate-polydisk": ("tate-polydisk", None),
    "laurent-annulus": ("laurent-annulus", 1),
}


def _dims_report(dims, cx):
    lines = [f"H^{k} = {d}   (cochains {c})" for k, (d, c) in enumerate(zip(dims, cx.dims))]
    return Report(lines, [[k, d] for k, d in enumerate(dims)])


def cmd_derham(args, N):
    prime = Prime(args.prime or 2)
    if args.input:
        (text,) = _inputs(args, 1, "a presentation")
        pres = _presentation(args, text)
        if N is not None:
            pres = te.TubePresentation(pres.lifts, pres.yvars, N)
        alg = dc.AlgebraModel.tube(pres)
    else:
        if N is None:
            raise FormatError("derham needs --trunc N")
        kind, d = ALGEBRAS[args.algebra]
        d = d or args.dim
        if kind == "laurent-annulus":
            alg = dc.AlgebraModel.annulus(-N, N, prime)
        else:
            alg = dc.AlgebraModel.polydisk(d, N, prime, kind)
    cx = dc.de_rham_complex(alg)
    return _dims_report(dc.cohomology_dims(cx), cx)


def cmd_cech(args, N):
    path = args.cover or (args.input[0] if args.input and len(args.input) == 1 else None)
    if path is None:
        raise FormatError("cech needs --cover FILE")
    cover = dc.parse_cover(_read(path), N)
    _check_prime(args, cover.prime)
    cx = dc.cech_de_rham(cover)
    return _dims_report(dc.cohomology_dims(cx), cx)


def cmd_weak_fibration(args, N):
    (text,) = _inputs(args, 1, "a presentation")
    pres = _presentation(args, text)
    if N is not None:
        pres = te.TubePresentation(pres.lifts, pres.yvars, N)
    rep = dc.compare_weak_fibration(pres, args.dim)
    base = ",".join(map(str, rep.base_dims))
    fib = ",".join(map(str, rep.fibred_dims))
    return Report([f"base: ({base})", f"fibred (d={rep.d}): ({fib})", f"verdict: {rep.verdict}"],
                  [[rep.d, base, fib, rep.verdict]])


def cmd_lattice(args, N):
    if args.query:
        a, b = args.query
        ans = lo.query_inclusion(a, b)
        return Report([f"{a} <= {b}: {'yes' if ans else 'no'}"], [[a, b, int(ans)]])
    facts = lo.lattice_relations()
    return Report([f"{f.smaller} {f.kind} {f.larger}" for f in facts],
                  [[f.smaller, f.kind, f.larger] for f in facts])


COMMANDS = {
    "norm": (cmd_norm, "weighted norm of a series"),
    "membership": (cmd_membership, "finite membership test in a growth class"),
    "split-cover": (cmd_split_cover, "split a Laurent series along the two-piece cover"),
    "pair": (cmd_pair, "duality pairing of two series"),
    "divide-diagonal": (cmd_divide_diagonal, "divide by (t - x) with a norm certificate"),
    "divide-linear": (cmd_divide_linear, "divide by (g t - g') with a norm certificate"),
    "ode-solve": (cmd_ode_solve, "formal fundamental solution of dY/dt = G Y"),
    "tau": (cmd_tau, "development at the generic point"),
    "growth": (cmd_growth, "log-growth order of a coefficient sequence"),
    "transfer": (cmd_transfer, "generic versus origin growth of solutions"),
    "koszul-reduce": (cmd_koszul_reduce, "shrink a Koszul preimage"),
    "normal-form": (cmd_normal_form, "tube normal form by substitution"),
    "change-presentation": (cmd_change_presentation, "rewrite a family along a relation"),
    "derham": (cmd_derham, "truncated de Rham cohomology dimensions"),
    "cech": (cmd_cech, "Cech-de Rham cohomology of a cover"),
    "weak-fibration": (cmd_weak_fibration, "compare a tube with its zero-section extension"),
    "lattice": (cmd_lattice, "inclusion facts among the catalog opens"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int)
    common.add_argument("--weight", type=int)
    common.add_argument("--trunc", type=int)
    common.add_argument("--trunc-sweep", help="comma separated truncations")
    common.add_argument("--nmax", type=int, default=8)
    common.add_argument("--input", action="append", metavar="FILE")
    common.add_argument("--output", metavar="FILE")
    common.add_argument("--format", choices=("text", "csv"), default="text")

    parser = argparse.ArgumentParser(prog="tempered", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")
    subs = {name: sub.add_parser(name, parents=[common], help=help_)
            for name, (_, help_) in COMMANDS.items()}
    subs["membership"].add_argument("--class", dest="cls", metavar="KIND[:PARAM]")
    subs["divide-linear"].add_argument("--g", type=parse_rational, required=True)
    subs["divide-linear"].add_argument("--g-prime", type=parse_rational, required=True)
    subs["divide-linear"].add_argument("--series", action="store_true",
                                       help="power-series quotient (no exactness check)")
    subs["ode-solve"].add_argument("--generic", action="store_true",
                                   help="print G_[m] as series instead of G_[m](0)")
    subs["derham"].add_argument("--algebra", choices=sorted(ALGEBRAS), default="tempered-disk")
    subs["derham"].add_argument("--dim", type=int, default=2)
    subs["cech"].add_argument("--cover", metavar="FILE")
    subs["weak-fibration"].add_argument("--dim", type=int, default=1)
    subs["lattice"].add_argument("--query", nargs=2, metavar=("SMALLER", "LARGER"))
    return parser


def _truncations(args):
    if args.trunc_sweep:
        try:
            values = [int(x) for x in args.trunc_sweep.split(",")]
        except ValueError:
            raise FormatError(f"bad --trunc-sweep {args.trunc_sweep!r}") from None
        return sorted(values), True
    return [args.trunc], False


def _validate(args):
    if args.prime is not None:
        Prime(args.prime)
    if args.nmax < 0:
        raise ValueError("--nmax must be nonnegative")
    if args.trunc is not None and args.trunc < 1:
        raise ValueError("--trunc must be at least 1")


def run(argv):
    """Parse, dispatch and render; returns ``(text, output path or None)``."""
    args = build_parser().parse_args(argv)
    _validate(args)
    handler = COMMANDS[args.command][0]
    truncs, sweep = _truncations(args)
    chunks, rows = [], []
    for N in truncs:
        rep = handler(args, N)
        if sweep:
            chunks.append(f"N = {N}")
            rows.extend([N] + r for r in rep.rows)
        else:
            rows.extend(rep.rows)
        chunks.extend(rep.lines)
    if args.format == "csv":
        return "".join(",".join(map(str, r)) + "\n" for r in rows), args.output
    return "\n".join(chunks) + "\n", args.output


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        out, path = run(argv)
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
        return 0
    except SystemExit as exc:          # argparse usage errors
        return exc.code if isinstance(exc.code, int) else 2
    except (FormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TemperedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
