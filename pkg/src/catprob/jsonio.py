"""JSON schemas for every value type, with bit-exact rational round trips.

Exact scalars travel as "num/den" strings, floats as JSON numbers, infinity
as the literal "inf".  Tables keyed by atoms or poset elements are JSON
objects keyed by str(label); the declared label arrays keep the original
(possibly non-string) labels, and loading matches keys back against them.
"""
from __future__ import annotations

import json
from fractions import Fraction

from . import scalar
from .diagram import ConsistentMeasureFamily, FiltrationDiagram, Martingale
from .errors import ParseError
from .finmeas import FiniteMeasure
from .finprob import FiniteProbSpace, MeasurePreservingMap
from .finrv import FiniteRandomVariable
from .metcat import INF, FinPseudometricSpace


def _atom_to_json(a):
    if isinstance(a, tuple):
        return [_atom_to_json(x) for x in a]
    return a


def _atom_from_json(a):
    if isinstance(a, list):
        return tuple(_atom_from_json(x) for x in a)
    return a


def _scalar_to_json(x, backend):
    if backend == scalar.EXACT:
        return scalar.format_rational(x)
    return float(x)


def _key_lookup(labels, table, what):
    """Resolve a str-keyed JSON object against declared labels."""
    byname = {}
    for label in labels:
        name = str(label)
        if name in byname:
            raise ParseError("%s: ambiguous label %r" % (what, name))
        byname[name] = label
    out = {}
    for name, value in table.items():
        if name not in byname:
            raise ParseError("%s: unknown label %r" % (what, name))
        out[byname[name]] = value
    missing = [str(l) for l in labels if l not in out]
    if missing:
        raise ParseError("%s: missing entries for %r" % (what, missing[:4]))
    return out


def _need(obj, key, what):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError("%s: missing field %r" % (what, key))
    return obj[key]


# -- spaces ------------------------------------------------------------------------


def space_to_obj(s):
    return {
        "atoms": [_atom_to_json(a) for a in s.atoms],
        "weights": [_scalar_to_json(w, s.backend) for w in s.weights],
        "backend": s.backend,
        "tol": s.tol,
    }


def space_from_obj(obj, what="space"):
    atoms = [_atom_from_json(a) for a in _need(obj, "atoms", what)]
    weights = _need(obj, "weights", what)
    backend = obj.get("backend")
    if backend is None:
        backend = (
            scalar.EXACT
            if all(isinstance(w, (str, int)) for w in weights)
            else scalar.FLOAT
        )
    tol = obj.get("tol")
    try:
        return FiniteProbSpace(atoms, weights, backend=backend, tol=tol)
    except Exception as exc:
        raise ParseError("%s: %s" % (what, exc)) from exc


# -- maps --------------------------------------------------------------------------


def map_to_obj(m):
    return {
        "src": space_to_obj(m.src),
        "dst": space_to_obj(m.dst),
        "assign": {str(a): _atom_to_json(b) for a, b in m.assign.items()},
    }


def map_from_obj(obj, what="map"):
    src = space_from_obj(_need(obj, "src", what), what + ".src")
    dst = space_from_obj(_need(obj, "dst", what), what + ".dst")
    raw = _key_lookup(src.atoms, _need(obj, "assign", what), what + ".assign")
    assign = {a: _atom_from_json(b) for a, b in raw.items()}
    try:
        return MeasurePreservingMap(src, dst, assign)
    except Exception as exc:
        raise ParseError("%s: %s" % (what, exc)) from exc


# -- measures and random variables ---------------------------------------------------


def measure_to_obj(mu):
    return {
        "space": space_to_obj(mu.space),
        "mass": [_scalar_to_json(m, mu.space.backend) for m in mu.mass],
    }


def measure_from_obj(obj, space=None, what="measure"):
    if space is None:
        space = space_from_obj(_need(obj, "space", what), what + ".space")
    elif "space" in obj and space_from_obj(obj["space"], what + ".space") != space:
        raise ParseError("%s: embedded space disagrees with the supplied one" % what)
    try:
        return FiniteMeasure(space, _need(obj, "mass", what))
    except Exception as exc:
        raise ParseError("%s: %s" % (what, exc)) from exc


def rv_to_obj(f):
    return {
        "space": space_to_obj(f.space),
        "values": [_scalar_to_json(v, f.space.backend) for v in f.values],
    }


def rv_from_obj(obj, space=None, what="rv"):
    if space is None:
        space = space_from_obj(_need(obj, "space", what), what + ".space")
    try:
        return FiniteRandomVariable(space, _need(obj, "values", what))
    except Exception as exc:
        raise ParseError("%s: %s" % (what, exc)) from exc


# -- metric spaces --------------------------------------------------------------------


def metspace_to_obj(x):
    rows = []
    for row in x.dist:
        out = []
        for d in row:
            if d == INF:
                out.append("inf")
            elif isinstance(d, (Fraction, int)):
                out.append(scalar.format_rational(d))
            else:
                out.append(float(d))
        rows.append(out)
    return {
        "points": [_atom_to_json(p) for p in x.points],
        "dist": rows,
        "tol": x.tol,
    }


def metspace_from_obj(obj, what="metric space"):
    points = [_atom_from_json(p) for p in _need(obj, "points", what)]
    try:
        return FinPseudometricSpace(
            points, _need(obj, "dist", what), tol=obj.get("tol", 0)
        )
    except Exception as exc:
        raise ParseError("%s: %s" % (what, exc)) from exc


# -- diagrams and families -------------------------------------------------------------


def diagram_to_obj(d):
    rank = {e: t for t, e in enumerate(d.elements)}
    pairs = sorted(
        (p for p in d.connect if p[0] != p[1]),
        key=lambda p: (rank[p[0]], rank[p[1]]),
    )
    return {
        "elements": [_atom_to_json(e) for e in d.elements],
        "leq": [
            [_atom_to_json(i), _atom_to_json(j)]
            for (i, j) in sorted(
                ((i, j) for (i, j) in d.leq if i != j),
                key=lambda p: (rank[p[0]], rank[p[1]]),
            )
        ],
        "spaces": {str(e): space_to_obj(d.spaces[e]) for e in d.elements},
        "connect": [
            {
                "lo": _atom_to_json(i),
                "hi": _atom_to_json(j),
                "assign": {
                    str(a): _atom_to_json(b)
                    for a, b in d.connect[(i, j)].assign.items()
                },
            }
            for (i, j) in pairs
        ],
        "top": None if d.top is None else _atom_to_json(d.top),
    }


def diagram_from_obj(obj, what="diagram"):
    elements = [_atom_from_json(e) for e in _need(obj, "elements", what)]
    spaces_raw = _key_lookup(elements, _need(obj, "spaces", what), what + ".spaces")
    spaces = {
        e: space_from_obj(spaces_raw[e], "%s.spaces[%s]" % (what, e)) for e in elements
    }
    leq = [
        (_atom_from_json(i), _atom_from_json(j)) for i, j in _need(obj, "leq", what)
    ]
    connect = {}
    for entry in _need(obj, "connect", what):
        i = _atom_from_json(_need(entry, "lo", what + ".connect"))
        j = _atom_from_json(_need(entry, "hi", what + ".connect"))
        if j not in spaces or i not in spaces:
            raise ParseError("%s.connect: unknown pair (%r, %r)" % (what, i, j))
        raw = _key_lookup(
            spaces[j].atoms, _need(entry, "assign", what + ".connect"), what + ".connect"
        )
        assign = {a: _atom_from_json(b) for a, b in raw.items()}
        try:
            connect[(i, j)] = MeasurePreservingMap(spaces[j], spaces[i], assign)
        except Exception as exc:
            raise ParseError("%s.connect (%r, %r): %s" % (what, i, j, exc)) from exc
    top = obj.get("top")
    top = None if top is None else _atom_from_json(top)
    try:
        return FiltrationDiagram(elements, leq, spaces, connect, top=top)
    except Exception as exc:
        raise ParseError("%s: %s" % (what, exc)) from exc


def martingale_to_obj(m):
    backend = m.diagram.spaces[m.diagram.elements[0]].backend
    return {
        "diagram": diagram_to_obj(m.diagram),
        "family": {
            str(i): [_scalar_to_json(v, backend) for v in m.family[i].values]
            for i in m.diagram.elements
        },
        "bound": _scalar_to_json(m.bound, backend),
    }


def martingale_from_obj(obj, what="martingale"):
    d = diagram_from_obj(_need(obj, "diagram", what), what + ".diagram")
    fam_raw = _key_lookup(d.elements, _need(obj, "family", what), what + ".family")
    family = {
        i: rv_from_obj({"values": fam_raw[i]}, space=d.spaces[i], what="%s.family[%s]" % (what, i))
        for i in d.elements
    }
    try:
        return Martingale(d, family, bound=obj.get("bound"))
    except Exception as exc:
        raise ParseError("%s: %s" % (what, exc)) from exc


def measure_family_to_obj(fam):
    backend = fam.diagram.spaces[fam.diagram.elements[0]].backend
    return {
        "diagram": diagram_to_obj(fam.diagram),
        "family": {
            str(i): [_scalar_to_json(v, backend) for v in fam.family[i].mass]
            for i in fam.diagram.elements
        },
        "bound": _scalar_to_json(fam.bound, backend),
    }


def measure_family_from_obj(obj, what="measure family"):
    d = diagram_from_obj(_need(obj, "diagram", what), what + ".diagram")
    fam_raw = _key_lookup(d.elements, _need(obj, "family", what), what + ".family")
    family = {
        i: measure_from_obj(
            {"mass": fam_raw[i]}, space=d.spaces[i], what="%s.family[%s]" % (what, i)
        )
        for i in d.elements
    }
    try:
        return ConsistentMeasureFamily(d, family, bound=obj.get("bound"))
    except Exception as exc:
        raise ParseError("%s: %s" % (what, exc)) from exc


# -- file helpers ------------------------------------------------------------------------


def read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError("%s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError("%s:%d:%d: %s" % (path, exc.lineno, exc.colno, exc.msg)) from exc


def write_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
