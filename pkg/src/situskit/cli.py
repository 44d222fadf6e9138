"""Command line front end: text formats in, one JSON object out.

File formats (one declaration per line, ``#`` starts a comment):

structure::

    universe a b c
    rel R/2: (a,b) (b,c)
    fun f: a->b b->b c->a
    const e = a

order::

    chain a b c              # or
    elements a b c
    le a<=b b<=c             # reflexive-transitive closure is taken

metric::

    points a b c
    dist a b = 1

topology::

    points a b
    open a
    open a b

Tokens made of digits are read as integers.
"""

from __future__ import annotations

import json
import re
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import dividing_lines as dl
from . import geometry as geo
from . import ramsey as rm
from .errors import ParseError, SituskitError
from .fostruct import FinStructure, parse, type_orbits
from .homlift import SitusMorphism, Verdict, exists_surjection, hom_set, lifting_property, LiftingInstance
from .simplex import FinPreorder, corepresented_by_preorder, terminal, validate
from .stone import (
    FinTree,
    consistency_space,
    identity_on_vertices,
    monotone_pieces_order,
    star_order,
    stone_space,
    tree_objects,
)

# -- parsing ---------------------------------------------------------------------------

_TOKEN = re.compile(r"[^\s(),]+")


def _atom(tok: str):
    return int(tok) if re.fullmatch(r"-?\d+", tok) else tok


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield no, line


def _col(raw: str, part: str) -> int:
    k = raw.find(part)
    return k + 1 if k >= 0 else 1


def parse_structure(text: str, name: str = "") -> FinStructure:
    universe = None
    rels, arities, funs, consts = {}, {}, {}, {}
    for no, line in _lines(text):
        head, _, rest = line.strip().partition(" ")
        if head == "universe":
            universe = [_atom(t) for t in rest.split()]
            if not universe:
                raise ParseError("empty universe", no, 1)
        elif head == "rel":
            m = re.fullmatch(r"\s*([A-Za-z_]\w*)\s*/\s*(\d+)\s*:(.*)", rest)
            if not m:
                raise ParseError("expected 'rel NAME/ARITY: (a,b) ...'", no, _col(line, rest))
            r, k, body = m.group(1), int(m.group(2)), m.group(3)
            tuples = []
            for tm in re.finditer(r"\(([^)]*)\)|(\S+)", body):
                if tm.group(1) is None:
                    raise ParseError(f"expected a parenthesised tuple, got {tm.group(2)!r}", no, _col(line, tm.group(2)))
                tuples.append(tuple(_atom(t) for t in _TOKEN.findall(tm.group(1))))
            rels[r] = tuples
            arities[r] = k
        elif head == "fun":
            m = re.fullmatch(r"\s*([A-Za-z_]\w*)\s*:(.*)", rest)
            if not m:
                raise ParseError("expected 'fun NAME: a->b ...'", no, _col(line, rest))
            table = {}
            for part in m.group(2).split():
                a, arrow, b = part.partition("->")
                if not arrow:
                    raise ParseError(f"expected 'a->b', got {part!r}", no, _col(line, part))
                table[_atom(a)] = _atom(b)
            funs[m.group(1)] = table
        elif head == "const":
            m = re.fullmatch(r"\s*([A-Za-z_]\w*)\s*=\s*(\S+)\s*", rest)
            if not m:
                raise ParseError("expected 'const NAME = a'", no, _col(line, rest))
            consts[m.group(1)] = _atom(m.group(2))
        else:
            raise ParseError(f"unknown declaration {head!r}", no, _col(line, head))
    if universe is None:
        raise ParseError("missing 'universe' line", 1, 1)
    return FinStructure(universe, rels, funs, consts, arities=arities, name=name)


def serialize_structure(M: FinStructure) -> str:
    """Canonical text: universe order kept, relation tuples sorted by position."""
    out = ["universe " + " ".join(map(str, M.elements))]
    pos = M.idx
    for r in sorted(M.relations):
        k = dict(M.signature.relations)[r]
        ts = sorted(M.relations[r], key=lambda t: [pos(a) for a in t])
        body = " ".join("(" + ",".join(map(str, t)) + ")" for t in ts)
        out.append(f"rel {r}/{k}:" + (" " + body if body else ""))
    for f in sorted(M.functions):
        out.append(f"fun {f}: " + " ".join(f"{a}->{M.functions[f][a]}" for a in M.elements))
    for c in sorted(M.constants):
        out.append(f"const {c} = {M.constants[c]}")
    return "\n".join(out) + "\n"


def parse_order(text: str) -> FinPreorder:
    elements, pairs = None, []
    for no, line in _lines(text):
        head, _, rest = line.strip().partition(" ")
        if head == "chain":
            return FinPreorder.chain([_atom(t) for t in rest.split()])
        if head == "elements":
            elements = [_atom(t) for t in rest.split()]
        elif head == "le":
            for part in rest.split():
                a, sep, b = part.partition("<=")
                if not sep:
                    raise ParseError(f"expected 'a<=b', got {part!r}", no, _col(line, part))
                pairs.append((_atom(a), _atom(b)))
        else:
            raise ParseError(f"unknown declaration {head!r}", no, _col(line, head))
    if elements is None:
        raise ParseError("missing 'chain' or 'elements' line", 1, 1)
    rel = {(a, a) for a in elements} | set(pairs)
    changed = True
    while changed:
        extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        changed = bool(extra)
        rel |= extra
    return FinPreorder(elements, rel)


def parse_metric(text: str) -> geo.FinMetric:
    points, dist = None, {}
    for no, line in _lines(text):
        head, _, rest = line.strip().partition(" ")
        if head == "points":
            points = [_atom(t) for t in rest.split()]
        elif head == "dist":
            m = re.fullmatch(r"\s*(\S+)\s+(\S+)\s*=\s*(\S+)\s*", rest)
            if not m:
                raise ParseError("expected 'dist a b = value'", no, _col(line, rest))
            dist[_atom(m.group(1)), _atom(m.group(2))] = Fraction(m.group(3))
        else:
            raise ParseError(f"unknown declaration {head!r}", no, _col(line, head))
    if points is None:
        raise ParseError("missing 'points' line", 1, 1)
    return geo.FinMetric(points, dist)


def parse_topology(text: str) -> geo.FinTopology:
    points, opens = None, []
    for no, line in _lines(text):
        head, _, rest = line.strip().partition(" ")
        if head == "points":
            points = [_atom(t) for t in rest.split()]
        elif head == "open":
            opens.append([_atom(t) for t in rest.split()])
        else:
            raise ParseError(f"unknown declaration {head!r}", no, _col(line, head))
    if points is None:
        raise ParseError("missing 'points' line", 1, 1)
    return geo.FinTopology(points, opens)


def load(path) -> object:
    """Read a structure, order, metric or topology file, chosen by its first declaration."""
    path = Path(path)
    text = path.read_text()
    first = next((line.split()[0] for _, line in _lines(text)), None)
    if first == "universe":
        return parse_structure(text, name=path.stem)
    if first in ("chain", "elements"):
        return parse_order(text)
    if first == "points":
        if any(line.split()[0] == "dist" for _, line in _lines(text)):
            return parse_metric(text)
        return parse_topology(text)
    raise ParseError(f"cannot tell the file kind from {first!r}", 1, 1)


def _load_kind(path, kind):
    obj = load(path)
    if not isinstance(obj, kind):
        raise click.UsageError(f"{path} does not hold a {kind.__name__}")
    return obj


# -- output --------------------------------------------------------------------------

def _emit(obj) -> None:
    from .homlift import _jsonable

    click.echo(json.dumps(_jsonable(obj), sort_keys=True))


def _finish(v: Verdict):
    _emit(v.to_dict())
    sys.exit(0 if v.holds else 1)


def _atoms(text):
    return [_atom(t) for t in re.split(r"[,\s]+", text.strip())] if text else []


# -- commands ----------------------------------------------------------------------------

@click.group()
def main():
    """Finite situses and lifting-property checks."""


def _common(f):
    f = click.option("--guard-override", is_flag=True, help="Lift the size guards.")(f)
    f = click.option("--variant", type=click.Choice(["extendable", "plain", "consecutive"]), default=None)(f)
    f = click.option("--qdepth", type=int, default=1, show_default=True, help="Quantifier depth of the formula cutoff.")(f)
    f = click.option("--distinct", type=int, default=None, help="Distinct-element target N (default |M|).")(f)
    f = click.option("--chain", type=int, default=None, help="Chain length |I| (default |M|+2).")(f)
    f = click.option("--depth", type=int, default=3, show_default=True)(f)
    return f


PROPERTIES = ["stability", "eventual-stability", "nip", "op", "nsop", "non-dividing", "ntp", "complete", "compact"]


@main.command()
@click.argument("prop", type=click.Choice(PROPERTIES))
@click.option("--model", type=click.Path(exists=True, dir_okay=False))
@click.option("--formula", default=None)
@click.option("--k", "k", type=int, default=2, show_default=True)
@click.option("--over", default="", help="Parameter set A, comma separated.")
@click.option("--a", "a", default=None)
@click.option("--b", "b", default=None)
@click.option("--branching", type=int, default=2, show_default=True)
@click.option("--height", type=int, default=2, show_default=True)
@click.option("--alpha", type=int, default=None)
@click.option("--metric", type=click.Path(exists=True, dir_okay=False))
@click.option("--topology", type=click.Path(exists=True, dir_okay=False))
@_common
def check(prop, model, formula, k, over, a, b, branching, height, alpha, metric, topology, depth, chain, distinct, qdepth, variant, guard_override):
    """Decide a dividing line (or completeness/compactness) both ways."""
    if prop == "complete":
        M = _load_kind(metric, geo.FinMetric) if metric else None
        if M is None:
            raise click.UsageError("check complete needs --metric")
        _finish(geo.is_complete_lp(M, chain if chain is not None else 3, min(depth, 3)))
    if prop == "compact":
        if not topology:
            raise click.UsageError("check compact needs --topology")
        T = _load_kind(topology, geo.FinTopology)
        _finish(geo.compactness_lp(T, alpha, min(depth, 3)))
    if not model:
        raise click.UsageError(f"check {prop} needs --model")
    M = _load_kind(model, FinStructure)
    phi = parse(formula, M.signature) if formula else None
    if prop == "stability":
        _finish(dl.stability(M, phi, chain, distinct, depth))
    if prop == "eventual-stability":
        _finish(dl.eventual_stability(M, phi, chain, distinct, depth))
    if prop == "nip":
        _finish(dl.nip(M, chain, qdepth, distinct, depth))
    if prop in ("op", "nsop"):
        fn = dl.op_nsop if prop == "op" else dl.nsop
        _finish(fn(M, k, qdepth, depth, variant or "extendable"))
    if prop == "non-dividing":
        if a is None or b is None:
            raise click.UsageError("check non-dividing needs --a and --b")
        _finish(dl.non_dividing(M, _atoms(over), _atom(a), _atom(b), chain, distinct, qdepth))
    if prop == "ntp":
        if not formula:
            raise click.UsageError("check ntp needs --formula")
        _finish(dl.tree_property(M, formula, branching, height, k))


@main.command()
@click.option("--from", "src", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--to", "dst", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--depth", type=int, default=3, show_default=True)
def hom(src, dst, depth):
    """Count (and list) morphisms between the situses of two preorders."""
    P, Q = _load_kind(src, FinPreorder), _load_kind(dst, FinPreorder)
    X, Y = corepresented_by_preorder(P, depth), corepresented_by_preorder(Q, depth)
    homs = hom_set(X, Y)
    _emit({"count": len(homs), "depth": depth, "morphisms": [{str(k[0]): v[0] for k, v in h.vertex_images().items()} for h in homs]})


@main.command()
@click.option("--from", "src", required=True, type=click.Path(exists=True, dir_okay=False), help="Order file for the source of i.")
@click.option("--to", "dst", required=True, type=click.Path(exists=True, dir_okay=False), help="Order file on the same elements.")
@click.option("--model", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--sigma", default=None, help="Formula for the Stone space.")
@_common
def lift(src, dst, model, sigma, depth, chain, distinct, qdepth, variant, guard_override):
    """Does identity-on-vertices P -> Q lift against stone_space(M, sigma) -> top?"""
    P, Q = _load_kind(src, FinPreorder), _load_kind(dst, FinPreorder)
    M = _load_kind(model, FinStructure)
    phi = parse(sigma, M.signature) if sigma else None
    A = corepresented_by_preorder(P, depth, guard_override=guard_override)
    B = corepresented_by_preorder(Q, depth, guard_override=guard_override)
    X = stone_space(M, phi, variant or "extendable", depth, distinct=distinct, q=None if phi else qdepth, guard_override=guard_override)
    v = lifting_property(LiftingInstance(identity_on_vertices(A, B), SitusMorphism.to_terminal(X, terminal(depth))), name="lift")
    v.config.update({"depth": depth, "variant": variant or "extendable", "sigma": sigma, "qdepth": None if phi else qdepth})
    _finish(v)


@main.command()
@click.option("--model", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--to", "target", required=True, help="star:K, chain:K (monotone filter) or an order file.")
@_common
def surject(model, target, depth, chain, distinct, qdepth, variant, guard_override):
    """Look for a continuous surjection from a Stone space."""
    M = _load_kind(model, FinStructure)
    X = stone_space(M, None, variant or "extendable", depth, q=qdepth, distinct=distinct, guard_override=guard_override)
    kind, _, k = target.partition(":")
    if kind == "star":
        Y = star_order(int(k), depth)
    elif kind == "chain":
        Y = monotone_pieces_order(int(k), 1, depth)
    else:
        Y = corepresented_by_preorder(_load_kind(target, FinPreorder), depth)
    h = exists_surjection(X, Y)
    _emit({"exists": h is not None, "map": h, "config": {"depth": depth, "qdepth": qdepth, "variant": variant or "extendable"}})
    sys.exit(0 if h is not None else 1)


@main.command(name="validate")
@click.option("--object", "obj", required=True, type=click.Choice(["stone", "consistency", "order", "tree", "metric", "covering"]))
@click.option("--model", type=click.Path(exists=True, dir_okay=False))
@click.option("--sigma", default=None)
@click.option("--order", type=click.Path(exists=True, dir_okay=False))
@click.option("--metric", type=click.Path(exists=True, dir_okay=False))
@click.option("--topology", type=click.Path(exists=True, dir_okay=False))
@click.option("--branching", type=int, default=2)
@click.option("--height", type=int, default=2)
@_common
def validate_cmd(obj, model, sigma, order, metric, topology, branching, height, depth, chain, distinct, qdepth, variant, guard_override):
    """Check simplicial identities and face continuity of a constructed situs."""
    if obj in ("stone", "consistency"):
        if not model:
            raise click.UsageError("needs --model")
        M = _load_kind(model, FinStructure)
        if obj == "stone":
            phi = parse(sigma, M.signature) if sigma else None
            X = stone_space(M, phi, variant or "extendable", depth, distinct=distinct, q=None if phi else qdepth, guard_override=guard_override)
        else:
            if not sigma:
                raise click.UsageError("needs --sigma")
            X = consistency_space(M, parse(sigma, M.signature), depth)
    elif obj == "order":
        X = corepresented_by_preorder(_load_kind(order, FinPreorder), depth)
    elif obj == "tree":
        X = tree_objects(FinTree(branching, height), min(depth, 3))["union"]
    elif obj == "metric":
        X = geo.metric_situs(_load_kind(metric, geo.FinMetric), depth)
    else:
        X = geo.covering_situs(_load_kind(topology, geo.FinTopology), depth)
    bad = validate(X)
    _emit({"object": obj, "status": "ok" if not bad else "violations", "violations": bad, "depth": depth})
    sys.exit(0 if not bad else 1)


@main.command()
@click.option("--atoms", type=int, default=6, show_default=True)
@click.option("--k", "k", type=int, default=3, show_default=True)
def ramsey(atoms, k):
    """Sweep 2-colourings of pairs for one without a homogeneous k-set."""
    c = rm.ramsey_search(atoms, k)
    _emit({"atoms": atoms, "k": k, "every_coloring_has_homogeneous": c is None, "coloring": None if c is None else [[list(p), v] for p, v in c.items()]})


@main.command()
@click.option("--from", "src", required=True, type=click.Path(exists=True, dir_okay=False), help="Structure I.")
@click.option("--model", required=True, type=click.Path(exists=True, dir_okay=False), help="Structure M (same universe).")
@click.option("--mode", type=click.Choice(["EM", "EMinfty", "Represents"]), default="EMinfty", show_default=True)
@click.option("--length", type=int, default=4, show_default=True)
@click.option("--qdepth", type=int, default=0, show_default=True)
def represent(src, model, mode, length, qdepth):
    """Does I represent M along the identity?"""
    I, M = _load_kind(src, FinStructure), _load_kind(model, FinStructure)
    ok = dl.em_represents(I, M, None, mode, length, qdepth)
    _emit({"represents": ok, "mode": mode, "length": length, "qdepth": qdepth})
    sys.exit(0 if ok else 1)


@main.command()
@click.option("--model", required=True, type=click.Path(exists=True, dir_okay=False))
def reduct(model):
    """Print the reduct to f(x)=f(y) and f(x)=g(x) in the structure file format."""
    click.echo(serialize_structure(dl.unary_reduct(_load_kind(model, FinStructure))), nl=False)


@main.command()
@click.option("--model", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--over", default="")
@click.option("--arity", type=int, default=1, show_default=True)
def orbits(model, over, arity):
    """Orbits of Aut(M/A) on tuples."""
    M = _load_kind(model, FinStructure)
    orbs = type_orbits(M, _atoms(over), arity)
    pos = M.idx
    _emit({"count": len(orbs), "orbits": [sorted(o, key=lambda t: [pos(a) for a in t]) for o in orbs]})


def run(argv=None):
    """Entry point that maps library errors to exit code 2."""
    try:
        main.main(args=argv, standalone_mode=False)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0
    except (SituskitError, click.ClickException) as e:
        bound = getattr(e, "bound", None)
        _emit({"error": type(e).__name__, "message": str(e), **({"bound": list(bound)} if bound else {})})
        return 2
    except click.exceptions.Abort:
        return 2
    return 0


def entry():
    sys.exit(run())
