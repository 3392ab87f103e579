"""Failure-probability bounds for random linear network coding.

Networks are passed around as JSON documents (str). Report functions return
parsed dicts; exact quantities come back as fractions.Fraction.
"""

import json
from fractions import Fraction

from . import _core
from ._core import (
    CapacityError,
    EnumerationCapError,
    GeneratorError,
    NetworkError,
    ParseError,
    RlncError,
    UnsupportedField,
    butterfly,
    field_add,
    field_inv,
    field_mul,
    field_supported,
    layered_random,
    normalize_network,
    plait,
    plait_union,
    rank,
)


def _frac(pair):
    return Fraction(int(pair[0]), int(pair[1]))


def compute_a(q, w):
    """Probability that a uniform w x w matrix over GF(q) is singular."""
    return _frac(_core.compute_a(q, w))


def lemma1(q, n, k0):
    return _frac(_core.lemma1(q, n, k0))


def analyze(network, rate, field=2, paths="first-found", n=None, m=None, explain=False):
    return json.loads(_core.analyze(network, rate, field, paths, n, m, explain))


def simulate(network, rate, field=2, trials=10000, seed=0, workers=1):
    return json.loads(_core.simulate(network, rate, field, trials, seed, workers))


def enumerate_exact(network, rate, field=2, cap=None, workers=1):
    if cap is None:
        return json.loads(_core.enumerate(network, rate, field, workers=workers))
    return json.loads(_core.enumerate(network, rate, field, cap, workers))


def sweep(bound, fields, rate=0, n=None, l=None, m=None, r=None, delta=None, network=None):
    return json.loads(_core.sweep(bound, list(fields), rate, n, l, m, r, delta, network))


def as_fraction(entry):
    """Exact value of a report entry carrying numerator/denominator strings."""
    return Fraction(int(entry["numerator"]), int(entry["denominator"]))
