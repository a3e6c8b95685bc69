"""Dual numeric backend: exact rationals or floats with a tolerance.

Every probability space picks one backend at construction and every object
derived from it inherits the choice.  On the exact backend all comparisons
are decidable equalities on `fractions.Fraction`; on the float backend an
equality assertion means |a - b| <= tol.  Mixing backends in one operation
raises BackendMismatch instead of coercing.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import BackendMismatch

EXACT = "exact"
FLOAT = "float"
DEFAULT_TOL = 1e-9

BACKENDS = (EXACT, FLOAT)


def coerce(value, backend):
    """Bring a user-supplied number into the backend's scalar type.

    Exact backend accepts ints, Fractions and "num/den" strings; floats are
    rejected because binary floats silently lose exactness.  Float backend
    accepts any real and returns a float.
    """
    if backend == EXACT:
        if isinstance(value, bool):
            raise BackendMismatch("booleans are not scalars")
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, str):
            return parse_rational(value)
        if isinstance(value, float):
            raise BackendMismatch(
                "float %r passed to the exact backend; use Fraction or 'num/den'" % value
            )
        raise BackendMismatch("cannot use %r as an exact scalar" % (value,))
    if backend == FLOAT:
        if isinstance(value, str):
            return float(parse_rational(value))
        return float(value)
    raise ValueError("unknown backend %r" % backend)


def parse_rational(text):
    """Parse "num/den" or "num" into a Fraction."""
    parts = text.strip().split("/")
    if len(parts) == 1:
        return Fraction(int(parts[0]))
    if len(parts) == 2:
        return Fraction(int(parts[0]), int(parts[1]))
    raise ValueError("not a rational literal: %r" % text)


def format_rational(q):
    """Render a Fraction as "num/den" (or "num" when integral), bit-exact."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def zero(backend):
    return Fraction(0) if backend == EXACT else 0.0


def one(backend):
    return Fraction(1) if backend == EXACT else 1.0


def eq(a, b, tol):
    """Backend-aware equality: exact when tol == 0, else |a-b| <= tol."""
    if tol == 0:
        return a == b
    return abs(a - b) <= tol


def le(a, b, tol):
    """Backend-aware <=, slackened by tol on the float backend."""
    if tol == 0:
        return a <= b
    return a <= b + tol


def same_backend(*objs):
    """Check that all objects (anything with .backend/.tol) agree; return (backend, tol)."""
    backends = {o.backend for o in objs}
    if len(backends) != 1:
        raise BackendMismatch("mixed numeric backends: %s" % sorted(backends))
    tols = {o.tol for o in objs}
    return backends.pop(), max(tols)
