"""Sullivan and Quillen model presentations, the model catalog, and the
JSON model-file format.

A Sullivan model is a free graded-commutative algebra on generators of
positive cohomological degree with a decomposable differential of degree +1.
A Quillen model is a free graded Lie algebra on generators of positive
homological degree with a decomposable differential of degree -1, plus
optional relations that define a quotient Lie algebra.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidInput, ParseError
from .graded import (COHOMOLOGICAL, HOMOLOGICAL, GcElement, Generator, GeneratorSet,
                     GradedLieElement, LieBasis, gca_mul, gca_odd, tensor_bracket)
from .linalg import clean, scalar_str, to_scalar, vec_iadd

SULLIVAN = "sullivan"
QUILLEN = "quillen"


@dataclass
class ModelPresentation:
    kind: str
    gens: GeneratorSet
    differential: dict
    relations: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in (SULLIVAN, QUILLEN):
            raise InvalidInput(f"unknown model kind {self.kind!r}")
        self.differential = {i: clean(v) for i, v in self.differential.items() if clean(v)}

    def d_of(self, i):
        return self.differential.get(i, {})

    @property
    def top_degree(self):
        return max(abs(h) for h in self.gens.hdeg)

    def is_sullivan(self):
        return self.kind == SULLIVAN

    def describe(self):
        rows = []
        for i, g in enumerate(self.gens):
            dv = self.d_of(i)
            if self.is_sullivan():
                from .graded import format_monomial_sum
                txt = format_monomial_sum(self.gens, dv)
            else:
                from .graded import format_word_sum
                txt = format_word_sum(self.gens, dv)
            rows.append({"name": g.name, "degree": g.degree, "convention": g.convention,
                         "d": txt})
        return rows


# -- differentials as derivations ---------------------------------------------------

def gca_apply_derivation(gens, values, parity, terms):
    """Apply the derivation with the given generator values (monomial dicts)
    and parity to a gca element, by the graded Leibniz rule."""
    odd = gca_odd(gens)
    out = {}
    n = len(gens)
    for mono, c in terms.items():
        sign_exp = 0
        for i in range(n):
            k = mono[i]
            if not k:
                continue
            v = values.get(i)
            if v:
                # d(x_i^k) = k x_i^{k-1} d(x_i) for even x_i; odd x_i has k = 1
                before = [0] * n
                before[:i] = mono[:i]
                after = [0] * n
                after[i + 1:] = mono[i + 1:]
                after[i] = k - 1
                pre = {tuple(before): Fraction(1)}
                post = {tuple(after): Fraction(1)}
                s = -1 if (parity and sign_exp % 2) else 1
                term = gca_mul(gca_mul(pre, values[i], odd), post, odd)
                vec_iadd(out, term, s * c * k)
            if odd[i]:
                sign_exp += k
    return out


def tensor_apply_derivation(hdeg, values, parity, terms):
    """Apply a derivation of the tensor algebra, given by its values (word
    dicts keyed by generator index), to a word dict.  Koszul sign
    (-1)^{parity * |prefix|} for each letter it acts on."""
    out = {}
    get = out.get
    for w, c in terms.items():
        pdeg = 0
        for pos, ch in enumerate(w):
            i = ord(ch)
            v = values.get(i)
            if v:
                s = -c if (parity and pdeg % 2) else c
                pre = w[:pos]
                post = w[pos + 1:]
                for u, x in v.items():
                    key = pre + u + post
                    t = get(key, 0) + s * x
                    if t:
                        out[key] = t
                    else:
                        del out[key]
            pdeg += hdeg[i]
    return out


def apply_differential(model, terms):
    if model.is_sullivan():
        return gca_apply_derivation(model.gens, model.differential, 1, terms)
    return tensor_apply_derivation(model.gens.hdeg, model.differential, 1, terms)


def _gca_deg(gens, mono):
    return sum(k * (-h) for k, h in zip(mono, gens.hdeg))


def validate(model):
    """Check degrees, decomposability, d^2 = 0 and Lie-ness of values."""
    gens = model.gens
    if model.is_sullivan():
        if any(h >= 0 for h in gens.hdeg):
            raise InvalidInput("Sullivan generators need positive cohomological degree")
        for i, v in model.differential.items():
            want = -gens.hdeg[i] + 1
            for mono in v:
                if len(mono) != len(gens):
                    raise InvalidInput("monomial length does not match the generators")
                if _gca_deg(gens, mono) != want:
                    raise InvalidInput(f"d({gens.names[i]}) is not of degree {want}")
                if sum(mono) < 2:
                    raise InvalidInput(f"d({gens.names[i]}) is not decomposable")
                if any(mono[j] > 1 for j in range(len(gens)) if gca_odd(gens)[j]):
                    raise InvalidInput(f"d({gens.names[i]}) squares an odd generator")
    else:
        if any(h <= 0 for h in gens.hdeg):
            raise InvalidInput("Quillen generators need positive homological degree")
        basis = LieBasis(gens)
        for i, v in model.differential.items():
            want = gens.hdeg[i] - 1
            for w in v:
                if gens.word_degree(w) != want:
                    raise InvalidInput(f"d({gens.names[i]}) is not of degree {want}")
                if len(w) < 2:
                    raise InvalidInput(f"d({gens.names[i]}) is not decomposable")
            basis.coordinates(v, want)
        for r in model.relations:
            if r:
                basis.coordinates(r, gens.word_degree(next(iter(r))))
    for i in range(len(gens)):
        dd = apply_differential(model, model.d_of(i))
        if dd:
            raise InvalidInput(f"d∘d is nonzero on generator {gens.names[i]}")
    return model


# -- catalog ------------------------------------------------------------------

def _gamma_sphere(d, oriented=False):
    if d % 2:
        g = "GL_n(Z)" if d in (1, 3, 7) else "GL_n^Σ(Z) (exactly one odd entry in each row)"
        return g + (" ∩ SL_n(Z)" if oriented else "")
    if oriented:
        return "Σ_n^± restricted to λ1⋯λn = 1 (orientation preserving)"
    return "Σ_n^± (signed permutation matrices)"


def sphere_product(d, n):
    """Minimal Sullivan model of the n-fold product of d-spheres."""
    if d < 1 or n < 1:
        raise InvalidInput("sphere_product needs d >= 1 and n >= 1")
    if d % 2:
        gens = GeneratorSet([Generator(f"x{i + 1}", d, COHOMOLOGICAL) for i in range(n)])
        diff = {}
        R = "GL_n"
    else:
        gens = GeneratorSet([Generator(f"x{i + 1}", d, COHOMOLOGICAL) for i in range(n)]
                            + [Generator(f"y{i + 1}", 2 * d - 1, COHOMOLOGICAL) for i in range(n)])
        diff = {}
        for i in range(n):
            sq = [0] * (2 * n)
            sq[i] = 2
            diff[n + i] = {tuple(sq): Fraction(1)}
        R = "Σ_n ⋉ GL_1^n"
    meta = {"name": f"sphere_product(d={d}, n={n})", "R": R,
            "Gamma": _gamma_sphere(d), "Gamma+": _gamma_sphere(d, True)}
    return validate(ModelPresentation(SULLIVAN, gens, diff, [], meta))


def _surface_data(g, n):
    gens = []
    for i in range(g):
        gens.append(Generator(f"a{i + 1}", n - 1))
        gens.append(Generator(f"b{i + 1}", n - 1))
    return gens


def _omega(gens, pairs):
    """Sum of brackets [p, q] over (p, q) name pairs, as a word dict."""
    out = {}
    for p, q in pairs:
        i, j = gens.index[p], gens.index[q]
        vec_iadd(out, tensor_bracket({chr(i): 1}, gens.hdeg[i], {chr(j): 1}, gens.hdeg[j]))
    return out


def _gamma_wg(n):
    if n % 2 == 0:
        return "O_{g,g}(Z)"
    if n in (1, 3, 7):
        return "Sp_2g(Z)"
    return "Sp_2g^q(Z) (diagonals of C^tA and D^tB even)"


def wg(g, n, closed=True):
    """Quillen model of the g-fold connected sum of S^n x S^n; with
    closed=False, of the same manifold with an open disc removed."""
    if g < 0 or n < 2:
        raise InvalidInput("wg needs g >= 0 and n >= 2")
    gl = _surface_data(g, n)
    if closed:
        gl.append(Generator("c", 2 * n - 1))
    gens = GeneratorSet(gl)
    omega = _omega(gens, [(f"a{i + 1}", f"b{i + 1}") for i in range(g)])
    diff = {gens.index["c"]: omega} if closed and g else {}
    meta = {"name": f"{'wg' if closed else 'wg1'}(g={g}, n={n})",
            "R+": "Aut(H^n, cup product pairing)", "Gamma+": _gamma_wg(n),
            "omega": "sum_i [a_i, b_i]"}
    m = ModelPresentation(QUILLEN, gens, diff, [], meta)
    m.omega = omega
    return validate(m)


def wg1(g, n):
    return wg(g, n, closed=False)


def wg_quotient(g, n):
    """The free Lie algebra on a_i, b_i modulo the ideal generated by omega:
    the homology of the closed-manifold model."""
    m = wg1(g, n)
    m.relations = [m.omega] if g else []
    m.metadata["name"] = f"wg-quotient(g={g}, n={n})"
    return validate(m)


def zg(g, n, closed=True):
    """Quillen model of the g-fold connected sum of S^n x S^{n+1}
    (closed=False removes a disc)."""
    if g < 0 or n < 2:
        raise InvalidInput("zg needs g >= 0 and n >= 2")
    gl = []
    for i in range(g):
        gl.append(Generator(f"a{i + 1}", n - 1))
        gl.append(Generator(f"a{i + 1}#", n))
    if closed:
        gl.append(Generator("c", 2 * n))
    gens = GeneratorSet(gl)
    omega = _omega(gens, [(f"a{i + 1}", f"a{i + 1}#") for i in range(g)])
    diff = {gens.index["c"]: omega} if closed and g else {}
    meta = {"name": f"{'zg' if closed else 'zg1'}(g={g}, n={n})",
            "R+": "GL_g(Q)", "Gamma+": "GL_g(Z)", "omega": "sum_i [a_i, a_i#]"}
    m = ModelPresentation(QUILLEN, gens, diff, [], meta)
    m.omega = omega
    return validate(m)


def zg1(g, n):
    return zg(g, n, closed=False)


def gtht_counterexample():
    """The non-formal Sullivan algebra with du = yz."""
    gens = GeneratorSet([Generator("x", 3, COHOMOLOGICAL), Generator("y", 3, COHOMOLOGICAL),
                         Generator("z", 3, COHOMOLOGICAL), Generator("u", 5, COHOMOLOGICAL),
                         Generator("w", 6, COHOMOLOGICAL)])
    diff = {3: {(0, 1, 1, 0, 0): Fraction(1)}}
    meta = {"name": "gtht_counterexample", "R": "GL_1^2 × GL_2",
            "Gamma": "(Z^×)^2 × GL_2^Σ(Z)"}
    return validate(ModelPresentation(SULLIVAN, gens, diff, [], meta))


def free_lie_model(degrees, names=None):
    """Free graded Lie algebra with zero differential."""
    names = names or [f"g{i + 1}" for i in range(len(degrees))]
    gens = GeneratorSet([Generator(nm, d) for nm, d in zip(names, degrees)])
    return validate(ModelPresentation(QUILLEN, gens, {}, [], {"name": f"free_lie{tuple(degrees)}"}))


CATALOG = {
    "sphere-product": (sphere_product, ("d", "n")),
    "wg": (wg, ("g", "n")),
    "wg1": (wg1, ("g", "n")),
    "wg-quotient": (wg_quotient, ("g", "n")),
    "zg": (zg, ("g", "n")),
    "zg1": (zg1, ("g", "n")),
    "gtht": (gtht_counterexample, ()),
}


def build_model(tag, **params):
    """Build a catalog model by tag (e.g. "sphere-product", d=3, n=2)."""
    key = tag.replace("_", "-")
    if key == "gtht-counterexample":
        key = "gtht"
    if key not in CATALOG:
        raise InvalidInput(f"unknown model tag {tag!r}")
    fn, names = CATALOG[key]
    missing = [n for n in names if n not in params]
    if missing:
        raise InvalidInput(f"model {tag!r} needs parameters {', '.join(missing)}")
    extra = set(params) - set(names)
    if extra:
        raise InvalidInput(f"model {tag!r} has no parameters {', '.join(sorted(extra))}")
    return fn(*[int(params[n]) for n in names])


# -- model files --------------------------------------------------------------

def _parse_term(gens, kind, term, where):
    if not isinstance(term, list) or len(term) != 2:
        raise ParseError("a term must be [coefficient, [generator names]]", where)
    try:
        c = to_scalar(term[0])
    except InvalidInput as exc:
        raise ParseError(str(exc), where) from None
    names = term[1]
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise ParseError("a monomial or word must be a list of generator names", where)
    for nm in names:
        if nm not in gens.index:
            raise ParseError(f"unknown generator {nm!r}", where)
    if kind == SULLIVAN:
        e = [0] * len(gens)
        sign = 1
        odd = gca_odd(gens)
        # reorder the listed factors into normal order, tracking Koszul signs
        seq = [gens.index[n] for n in names]
        for a in range(len(seq)):
            for b in range(a + 1, len(seq)):
                if seq[a] > seq[b] and odd[seq[a]] and odd[seq[b]]:
                    sign = -sign
        for i in seq:
            e[i] += 1
        if any(e[i] > 1 and odd[i] for i in range(len(gens))):
            return {}
        return {tuple(e): sign * c}
    return {gens.word(names): c}


def model_from_json(data):
    """Parse a model descriptor (dict or JSON text) into a validated model."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(data, dict):
        raise ParseError("model file must be a JSON object", "$")
    kind = data.get("kind")
    if kind not in (SULLIVAN, QUILLEN):
        raise ParseError("kind must be 'sullivan' or 'quillen'", "$.kind")
    glist = data.get("generators")
    if not isinstance(glist, list) or not glist:
        raise ParseError("generators must be a nonempty list", "$.generators")
    gl = []
    default = COHOMOLOGICAL if kind == SULLIVAN else HOMOLOGICAL
    for k, g in enumerate(glist):
        where = f"$.generators[{k}]"
        if not isinstance(g, dict) or "name" not in g or "degree" not in g:
            raise ParseError("generator needs name and degree", where)
        if not isinstance(g["degree"], int) or isinstance(g["degree"], bool):
            raise ParseError("degree must be an integer", where + ".degree")
        try:
            gl.append(Generator(str(g["name"]), g["degree"], g.get("convention", default)))
        except InvalidInput as exc:
            raise ParseError(str(exc), where) from None
    try:
        gens = GeneratorSet(gl)
    except InvalidInput as exc:
        raise ParseError(str(exc), "$.generators") from None
    hd = gens.hdeg
    if kind == SULLIVAN and any(h >= 0 for h in hd):
        raise ParseError("Sullivan generators need positive cohomological degree", "$.generators")
    if kind == QUILLEN and any(h <= 0 for h in hd):
        raise ParseError("Quillen generators need positive homological degree", "$.generators")
    diff = {}
    dd = data.get("differential", {})
    if not isinstance(dd, dict):
        raise ParseError("differential must be an object", "$.differential")
    for name, terms in dd.items():
        where = f"$.differential.{name}"
        if name not in gens.index:
            raise ParseError(f"unknown generator {name!r}", where)
        if not isinstance(terms, list):
            raise ParseError("differential value must be a list of terms", where)
        v = {}
        for k, t in enumerate(terms):
            vec_iadd(v, _parse_term(gens, kind, t, f"{where}[{k}]"))
        diff[gens.index[name]] = v
    rels = []
    rl = data.get("relations", [])
    if not isinstance(rl, list):
        raise ParseError("relations must be a list", "$.relations")
    if rl and kind != QUILLEN:
        raise ParseError("relations are only allowed for Quillen models", "$.relations")
    for k, terms in enumerate(rl):
        where = f"$.relations[{k}]"
        if not isinstance(terms, list):
            raise ParseError("a relation must be a list of terms", where)
        v = {}
        for j, t in enumerate(terms):
            vec_iadd(v, _parse_term(gens, kind, t, f"{where}[{j}]"))
        if len({gens.word_degree(w) for w in v}) > 1:
            raise ParseError("relation is not homogeneous", where)
        rels.append(v)
    meta = data.get("metadata", {})
    if not isinstance(meta, dict):
        raise ParseError("metadata must be an object", "$.metadata")
    m = ModelPresentation(kind, gens, diff, rels, {str(k): str(v) for k, v in meta.items()})
    return validate(m)


def model_to_json(model):
    gens = model.gens

    def terms_json(v):
        out = []
        if model.is_sullivan():
            for mono in sorted(v, reverse=True):
                names = [gens.names[i] for i, k in enumerate(mono) for _ in range(k)]
                out.append([scalar_str(v[mono]), names])
        else:
            for w in sorted(v):
                out.append([scalar_str(v[w]), list(gens.word_names(w))])
        return out

    return {
        "kind": model.kind,
        "generators": [{"name": g.name, "degree": g.degree, "convention": g.convention}
                       for g in gens],
        "differential": {gens.names[i]: terms_json(v) for i, v in sorted(model.differential.items())},
        "relations": [terms_json(r) for r in model.relations],
        "metadata": dict(model.metadata),
    }


def load_model(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(str(exc), path) from None
    return model_from_json(text)


def lie_element(model, terms):
    return GradedLieElement(model.gens, terms)


def gc_element(model, terms):
    return GcElement(model.gens, terms)
