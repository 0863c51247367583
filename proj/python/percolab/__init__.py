"""Exact phi_p(S) polynomials, certified p_c lower bounds and Monte Carlo
estimators for nearest-neighbour Bernoulli bond percolation on Z^d.

Exact quantities come back from the extension as "num/den" strings; the
wrappers here turn them into ``fractions.Fraction``.
"""

from fractions import Fraction

from . import _core
from ._core import (
    BudgetExceeded,
    edge_boundary,
    estimate_connect,
    estimate_phi,
    estimate_reach,
    fit_decay,
    internal_edges,
    make_box,
    run_cli,
    verify_certificate,
)

__all__ = [
    "BudgetExceeded",
    "blocking_decomposition",
    "connect_poly",
    "decay_certificate",
    "edge_boundary",
    "estimate_connect",
    "estimate_phi",
    "estimate_reach",
    "evaluate",
    "fit_decay",
    "internal_edges",
    "lemma_check",
    "make_box",
    "meanfield_floor",
    "pc_lower_bound",
    "phi_exact",
    "pstar",
    "reach_poly",
    "run_cli",
    "russo_residual",
    "verify_certificate",
]


def _fractions(coeffs):
    return [Fraction(c) for c in coeffs]


def evaluate(coeffs, p):
    """Horner evaluation of an ascending coefficient list at p."""
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * Fraction(p) + c
    return acc


def connect_poly(vertices, x, **kw):
    return _fractions(_core.connect_poly(vertices, x, **kw))


def phi_exact(vertices, **kw):
    return _fractions(_core.phi_exact(vertices, **kw))


def reach_poly(dim, n, **kw):
    return _fractions(_core.reach_poly(dim, n, **kw))


def russo_residual(dim, n, **kw):
    return _fractions(_core.russo_residual(dim, n, **kw))


_EXACT_KEYS = {
    "reassembled", "expected", "blocking_mass", "non_reach", "lhs", "rhs", "inf_phi",
    "bound", "certified_below", "phi_at_bound", "phi",
}


def _fraction_values(d):
    return {k: Fraction(v) if k in _EXACT_KEYS else v for k, v in d.items()}


def blocking_decomposition(dim, n, p, **kw):
    return _fraction_values(_core.blocking_decomposition(dim, n, str(Fraction(p)), **kw))


def lemma_check(dim, n, p, **kw):
    return _fraction_values(_core.lemma_check(dim, n, str(Fraction(p)), **kw))


def pstar(vertices, width_tol="2^-30", **kw):
    lo, hi, root = _core.pstar(vertices, width_tol, **kw)
    return Fraction(lo), Fraction(hi), None if root is None else Fraction(root)


def pc_lower_bound(dim, k_max, **kw):
    return _fraction_values(_core.pc_lower_bound(dim, k_max, **kw))


def decay_certificate(vertices, p):
    return _fraction_values(_core.decay_certificate(vertices, str(Fraction(p))))


def meanfield_floor(p, pc_ref):
    return Fraction(_core.meanfield_floor(str(Fraction(p)), str(Fraction(pc_ref))))
