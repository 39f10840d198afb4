"""Python access to the gaslie verifier. Report functions return parsed JSON."""

import json as _json

from . import _gaslie
from ._gaslie import (
    DEFAULT_SEED,
    ConstraintViolation,
    EvalError,
    ParseError,
    UnknownEntry,
    __version__,
    catalog_ids,
    differentiate,
    evaluate,
    simplify,
)


def verify_algebra(seed=DEFAULT_SEED, brackets=False):
    return _json.loads(_gaslie.verify_algebra(seed, brackets))


def verify_invariants(ids=(), seed=DEFAULT_SEED, jobs=1):
    return _json.loads(_gaslie.verify_invariants(list(ids), seed, jobs))


def classify(ids=(), jobs=1):
    return _json.loads(_gaslie.classify(list(ids), jobs))


def verify_solution(kinds=()):
    return _json.loads(_gaslie.verify_solution(list(kinds)))


def trace(kind, labels, t0, t1, step=1e-3, constants=None):
    """RK4 path as a list of (t, x, y, z) and the max error against the closed form."""
    if constants is None:
        constants = {"rho0": 1.0, "k0": 1.0, "m0": 1.0}
    samples, error = _gaslie.trace(kind, dict(labels), t0, t1, step, dict(constants))
    return [tuple(s) for s in samples], error
