"""Python access to the qanc construction and its verification pipeline.

Parameters are plain dicts with the keys of the seed set returned by
``seed_parameters()``; missing keys fall back to the seed values.
"""

import json

from . import _qanc
from ._qanc import ConfigError, QancError, core_t0

__all__ = [
    "ConfigError",
    "QancError",
    "admissibility",
    "core_t0",
    "curvature",
    "derived_constants",
    "growth",
    "oracle",
    "seed_parameters",
    "verify",
]


def seed_parameters():
    return json.loads(_qanc.seed_parameters())


def _params(params):
    merged = seed_parameters()
    unknown = set(params or {}) - set(merged)
    if unknown:
        raise ConfigError("unknown parameter(s): " + ", ".join(sorted(unknown)))
    merged.update(params or {})
    return json.dumps(merged)


def derived_constants(params=None):
    return json.loads(_qanc.derived_constants(_params(params)))


def admissibility(params=None, mode="paper"):
    """Ledger entries as a list of dicts (name, achieved, relation, required, margin, pass)."""
    return json.loads(_qanc.admissibility(_params(params), mode))


def curvature(generation, s, x, params=None, mode="moderate"):
    """Normalized sectional and Ricci curvature at (generation, s, x).

    Values outside the double range come back as {"sign": s, "log10": l}.
    """
    return json.loads(_qanc.curvature(_params(params), mode, generation, s, x))


def growth(generations=10, params=None, mode="paper"):
    return json.loads(_qanc.growth(_params(params), mode, generations))


def oracle(n_points=100, params=None, seed=7):
    return json.loads(_qanc.oracle(_params(params), n_points, seed))


def verify(config):
    """Runs the full verification for a config dict (same schema as the CLI)."""
    return json.loads(_qanc.verify(json.dumps(config)))
