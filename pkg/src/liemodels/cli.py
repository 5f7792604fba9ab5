"""Command-line interface: ``liemodels <subcommand> ...``.

Every subcommand prints either a text table or one JSON document of the form
{"request": ..., "result": ..., "checks": [...]}.  Exit codes: 0 success,
1 invalid input, 2 degree window too small, 3 failed internal check.
"""

import argparse
import json
import sys
from fractions import Fraction

from .errors import InvalidInput, LieModelsError, VerificationError
from .models import CATALOG, QUILLEN, SULLIVAN, build_model, load_model, model_to_json

MAX_DEFAULT = 32


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


class Output:
    def __init__(self, request):
        self.request = request
        self.result = {}
        self.checks = []
        self.lines = []

    def check(self, name, ok, detail=""):
        self.checks.append({"name": name, "pass": bool(ok), "detail": detail})

    def emit(self, fmt, stream):
        if fmt == "json":
            doc = {"request": self.request, "result": _jsonable(self.result), "checks": self.checks}
            stream.write(json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2) + "\n")
            return
        for line in self.lines:
            stream.write(line + "\n")
        for c in self.checks:
            tail = f" ({c['detail']})" if c["detail"] else ""
            stream.write(f"{'PASS' if c['pass'] else 'FAIL'} {c['name']}{tail}\n")


# -- argument helpers ------------------------------------------------------------------

def _add_model_args(p):
    p.add_argument("model", nargs="?", help="catalog tag: " + ", ".join(sorted(CATALOG)))
    p.add_argument("--file", help="model descriptor JSON file")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--g", type=int)


def _model(args):
    if args.file:
        if args.model:
            raise InvalidInput("give either a catalog tag or --file, not both")
        return load_model(args.file)
    if not args.model:
        raise InvalidInput("a model tag or --file is required")
    key = args.model.replace("_", "-")
    names = CATALOG.get("gtht" if key == "gtht-counterexample" else key, (None, ()))[1]
    params = {k: getattr(args, k) for k in ("d", "n", "g") if getattr(args, k) is not None}
    unused = set(params) - set(names)
    if unused:
        raise InvalidInput(f"model {args.model!r} takes no --{' --'.join(sorted(unused))}")
    return build_model(args.model, **params)


def _max_degree(args, default=None):
    m = args.max_degree if args.max_degree is not None else default
    if m is None:
        raise InvalidInput("--max-degree is required for this computation")
    if m < 1:
        raise InvalidInput("--max-degree must be at least 1")
    return m


def _dims_table(out, title, dims):
    out.lines.append(title)
    out.lines.append("degree  dim")
    for k in sorted(dims):
        out.lines.append(f"{k:>6}  {dims[k]}")


# -- subcommands ------------------------------------------------------------------------

def cmd_model(args, out):
    from .derivations import nilradical
    m = _model(args)
    show = args.show
    out.result["model"] = model_to_json(m)
    out.result["generators"] = m.describe()
    out.lines.append(f"{m.kind} model {m.metadata.get('name', '')}")
    for row in m.describe():
        out.lines.append(f"  {row['name']}  degree {row['degree']} ({row['convention']})  d = {row['d'] or '0'}")
    for key in ("R", "Gamma", "Gamma+"):
        if key in m.metadata:
            out.lines.append(f"  {key}: {m.metadata[key]}")
            out.result[key] = m.metadata[key]
    if show == "nil":
        hi = _max_degree(args, None if m.kind == QUILLEN else m.top_degree)
        if m.kind == SULLIVAN:
            hi = min(hi, m.top_degree)
        nil = nilradical(m, hi=hi)
        dims = nil.dims()
        if args.max_degree is not None:
            dims.update({k: 0 for k in range(hi + 1, args.max_degree + 1)})
        out.result["nil"] = dims
        _dims_table(out, "nilradical", dims)
        out.check("nilradical verified", True)


def cmd_der(args, out):
    from .derivations import CurvedSpace, DerivationSpace
    m = _model(args)
    space = CurvedSpace(m) if (args.curved or m.kind == QUILLEN and not args.plain) else DerivationSpace(m)
    lo = args.min_degree
    hi = _max_degree(args, MAX_DEFAULT if m.kind == SULLIVAN else None)
    if m.kind == SULLIVAN:
        hi = min(hi, m.top_degree)
    dims = {k: space.dim(k) for k in range(lo, hi + 1)}
    out.result["dims"] = dims
    _dims_table(out, "curved derivations" if isinstance(space, CurvedSpace) else "derivations", dims)
    if args.degree is not None:
        basis = [b.render() for b in space.basis(args.degree)]
        out.result["basis"] = {args.degree: basis}
        out.lines.append(f"basis in degree {args.degree}:")
        out.lines += [f"  {b}" for b in basis]


def _complex_for(args, m):
    from .derivations import DerivationSpace, DglaSlice, curved_der, outer_quotient, truncate
    hi = _max_degree(args, m.top_degree if m.kind == SULLIVAN else None)
    k = args.truncate
    if args.outer:
        return outer_quotient(m, k, hi + 1, truncate_at=k), hi
    if m.kind == SULLIVAN:
        space = DerivationSpace(m)
        # all degrees below k are discarded by the truncation; start one lower
        g = DglaSlice(space, k - 1, max(hi + 1, k))
        return truncate(g, k), hi
    return truncate(curved_der(m, k - 1, hi + 1), k), hi


def cmd_homology(args, out):
    from .derivations import homology
    m = _model(args)
    g, hi = _complex_for(args, m)
    dims = {}
    reps = {}
    for k in range(args.truncate, hi + 1):
        if args.outer:
            dims[k] = g.dim(k)
            continue
        d, r = homology(g, k, representatives=args.representatives)
        dims[k] = d
        if r is not None:
            reps[k] = [x.render() for x in r]
    out.result["homology"] = dims
    if reps:
        out.result["representatives"] = reps
    _dims_table(out, "outer derivations" if args.outer else f"homology of the truncation <{args.truncate}>", dims)
    for k, rs in reps.items():
        for x in rs:
            out.lines.append(f"  H_{k}: {x}")


def cmd_nil(args, out):
    args.show = "nil"
    cmd_model(args, out)


def cmd_ce(args, out):
    from .ce import ce_cohomology
    from .derivations import nilradical
    m = _model(args)
    N = _max_degree(args)
    # CE words of degree <= N + 1 involve slice degrees up to N
    hi = N if m.kind == QUILLEN else m.top_degree
    if args.slice_max is not None:
        hi = args.slice_max
    nil = nilradical(m, hi=hi)
    res, h = ce_cohomology(nil, N)
    dims = {k: v[0] for k, v in res.items()}
    out.result["ce_cohomology"] = dims
    _dims_table(out, "CE cohomology of the nilradical", dims)
    out.check("d^2 = 0 on CE cochains", True)


def _parse_derivation_spec(space, spec):
    """'x=y' is y∂/∂x; 'x=1' is ∂/∂x; 'x=2*y*z' allowed; terms joined by ','."""
    from .derivations import derivation
    values = {}
    for part in spec.split(","):
        tgt, _, val = part.partition("=")
        tgt = tgt.strip()
        if not tgt or not val:
            raise InvalidInput(f"cannot parse derivation {spec!r}; expected target=monomial")
        coef = 1
        names = []
        for f in val.split("*"):
            f = f.strip()
            if f in space.gens.index:
                names.append(f)
            else:
                try:
                    coef *= Fraction(f)
                except ValueError:
                    raise InvalidInput(f"unknown generator {f!r} in {spec!r}") from None
        values.setdefault(tgt, []).append([coef, names])
    return derivation(space, values)


def cmd_massey(args, out):
    from .ce import massey_triple
    from .derivations import nilradical
    m = _model(args)
    if m.kind != SULLIVAN:
        raise InvalidInput("massey is implemented for Sullivan models")
    nil = nilradical(m)
    defaults = ("x=y", "u=x", "w=z") if m.metadata.get("name") == "gtht_counterexample" else (None,) * 3
    specs = [args.a or defaults[0], args.b or defaults[1], args.c or defaults[2]]
    if None in specs:
        raise InvalidInput("--a, --b and --c are required for this model")
    a, b, c = (_parse_derivation_spec(nil.space, s) for s in specs)
    r = massey_triple(nil, a, b, c)
    out.result = {"inputs": [x.render() for x in (a, b, c)], "value": r.value.render(),
                  "value_class": r.value_class, "indeterminacy_dim": len(r.indeterminacy),
                  "nontrivial": r.nontrivial, "degree": r.degree,
                  "choices_checked": r.choices_checked}
    out.lines.append(f"<{', '.join(out.result['inputs'])}>")
    out.lines.append(f"value: {r.value.render()}")
    out.lines.append(f"indeterminacy: {len(r.indeterminacy)}")
    out.lines.append(f"nontrivial: {'true' if r.nontrivial else 'false'}")
    out.check("choice independence", r.choice_independent, f"{r.choices_checked} choices")


def _group(args):
    from .invariants import (even_sphere_pair_group, group_from_json, signed_permutation_group,
                             swap_group_abcd)
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            return group_from_json(fh.read())
    tag = args.group
    if tag == "swap-abcd":
        return swap_group_abcd()
    if tag == "hyperoctahedral":
        if args.n is None:
            raise InvalidInput("hyperoctahedral needs --n")
        return signed_permutation_group(args.n)
    if tag in ("even-sphere-pair", "even-sphere-pair+"):
        if args.d is None:
            raise InvalidInput(f"{tag} needs --d")
        return even_sphere_pair_group(args.d, oriented=tag.endswith("+"))
    raise InvalidInput(f"unknown group {tag!r}; known: swap-abcd, hyperoctahedral, "
                       "even-sphere-pair, even-sphere-pair+")


def _add_group_args(p):
    p.add_argument("group", nargs="?", help="swap-abcd | hyperoctahedral | even-sphere-pair[+]")
    p.add_argument("--file")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--grading", choices=["weight", "word-length"], default="word-length")


def cmd_molien(args, out):
    from .invariants import molien_series
    G = _group(args)
    N = _max_degree(args)
    s = molien_series(G, args.grading, N)
    out.result = {"order": G.order, "series": s}
    out.lines.append(f"group of order {G.order}, {args.grading} grading")
    out.lines.append("series: " + " + ".join(f"{c}t^{k}" for k, c in enumerate(s) if c))


def cmd_invariants(args, out):
    from .invariants import invariant_basis, molien_series
    G = _group(args)
    k = args.degree
    basis = invariant_basis(G, k, args.grading)
    mol = molien_series(G, args.grading, k)[k]
    out.result = {"degree": k, "basis": [p.render(G.names) for p in basis]}
    out.lines.append(f"invariants of degree {k} ({args.grading}): {len(basis)}")
    out.lines += [f"  {p.render(G.names)}" for p in basis]
    out.check("basis size equals the Molien coefficient", len(basis) == mol, f"{mol}")


def cmd_series(args, out):
    from .assembly import (closed_form_poincare, eichler_shimura_poincare, modform_dim_series,
                           sl3_poincare)
    N = _max_degree(args)
    kind = args.kind
    if kind == "es-poincare":
        s = eichler_shimura_poincare(_need(args.d, "--d"), N)
    elif kind == "sl3":
        s = sl3_poincare(_need(args.d, "--d"), N)
    elif kind == "closed":
        case = _need(args.case, "--case")
        d = args.d if case == "stable" and args.d is None else _need(args.d, "--d")
        s = closed_form_poincare(case, d or 0, N)
    elif kind == "modforms":
        dims = modform_dim_series(_need(args.tag, "--tag"), args.forms, N)
        out.result = {"dims": dims}
        out.lines.append(" ".join(str(x) for x in dims))
        return
    else:
        raise InvalidInput(f"unknown series {kind!r}")
    out.result = {"coefficients": s.to_json(), "text": s.render()}
    out.lines.append(s.render())


def _need(v, flag):
    if v is None:
        raise InvalidInput(f"{flag} is required")
    return v


def cmd_crosscheck(args, out):
    from .assembly import crosscheck_series
    from .ce import massey_triple
    from .derivations import derivation, nilradical
    from .graded import GeneratorSet, Generator, free_glie_basis, pbw_dims_oracle
    from .models import gtht_counterexample
    N = args.max_degree or 200
    for label, ok in crosscheck_series(N):
        out.check(f"series {label}", ok)
    for degs in ([1], [1, 1], [1, 2], [2, 2], [1, 1, 1], [1, 2, 3], [3, 3]):
        gens = GeneratorSet([Generator(f"x{i}", d) for i, d in enumerate(degs)])
        oracle = pbw_dims_oracle(degs, 6)
        got = [0] + [len(free_glie_basis(gens, n)) for n in range(1, 7)]
        out.check(f"PBW oracle degrees={degs}", got == oracle)
    m = gtht_counterexample()
    nil = nilradical(m)
    out.check("gtht nilradical dims", [nil.dim(k) for k in range(7)] == [5, 1, 3, 6, 0, 1, 1])
    sp = nil.space
    r = massey_triple(nil, derivation(sp, {"x": ["y"]}), derivation(sp, {"u": ["x"]}),
                      derivation(sp, {"w": ["z"]}))
    out.check("gtht Massey product nontrivial", r.nontrivial and not r.indeterminacy
              and r.value.render() in ("∂/∂w", "-∂/∂w"), r.value.render())
    out.result = {"passed": sum(c["pass"] for c in out.checks), "total": len(out.checks)}
    out.lines.append(f"{out.result['passed']}/{out.result['total']} checks passed")


# -- entry point -----------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--max-degree", type=int)
    p = argparse.ArgumentParser(prog="liemodels", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("model", parents=[common], help="build and describe a model")
    _add_model_args(s)
    s.add_argument("--show", choices=["describe", "nil"], default="describe")
    s.set_defaults(func=cmd_model)

    s = sub.add_parser("der", parents=[common], help="derivation spaces")
    _add_model_args(s)
    s.add_argument("--min-degree", type=int, default=0)
    s.add_argument("--degree", type=int, help="also list a basis in this degree")
    s.add_argument("--curved", action="store_true")
    s.add_argument("--plain", action="store_true", help="plain Der L for a Quillen model")
    s.set_defaults(func=cmd_der)

    s = sub.add_parser("nil", parents=[common], help="nilradical dimensions")
    _add_model_args(s)
    s.set_defaults(func=cmd_nil)

    s = sub.add_parser("homology", parents=[common], help="homology of truncated derivation complexes")
    _add_model_args(s)
    s.add_argument("--truncate", type=int, default=1)
    s.add_argument("--outer", action="store_true", help="outer derivations of L/(relations)")
    s.add_argument("--representatives", action="store_true")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("ce", parents=[common], help="CE cohomology of the nilradical")
    _add_model_args(s)
    s.add_argument("--slice-max", type=int, help="top degree of the nilradical slice")
    s.set_defaults(func=cmd_ce)

    s = sub.add_parser("massey", parents=[common], help="triple Massey product")
    _add_model_args(s)
    s.add_argument("--a")
    s.add_argument("--b")
    s.add_argument("--c")
    s.set_defaults(func=cmd_massey)

    s = sub.add_parser("molien", parents=[common], help="Molien series")
    _add_group_args(s)
    s.set_defaults(func=cmd_molien)

    s = sub.add_parser("invariants", parents=[common], help="invariant basis in one degree")
    _add_group_args(s)
    s.add_argument("--degree", type=int, required=True)
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("series", parents=[common], help="Poincare series")
    s.add_argument("kind", choices=["es-poincare", "sl3", "closed", "modforms"])
    s.add_argument("--d", type=int)
    s.add_argument("--case")
    s.add_argument("--tag", choices=["SL2Z", "Theta"])
    s.add_argument("--forms", choices=["modular", "cusp"], default="modular")
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("crosscheck", parents=[common], help="run the bundled consistency checks")
    s.set_defaults(func=cmd_crosscheck)
    return p


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    request = {k: v for k, v in sorted(vars(args).items()) if k != "func" and v is not None}
    out = Output(request)
    try:
        args.func(args, out)
    except LieModelsError as exc:
        stderr.write(f"error: {exc}\n")
        return exc.exit_code
    out.emit(args.format, stdout)
    if any(not c["pass"] for c in out.checks):
        return VerificationError.exit_code
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
