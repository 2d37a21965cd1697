"""Certified everlasting commitments and zero-knowledge, desk-scale simulation.

Instances are JSON-compatible dicts in the same format as the CLI's
instance files. Results come back as dicts.
"""

import json

from . import _core
from ._core import EvercommitError

__all__ = [
    "EvercommitError",
    "bundled_instance",
    "soundness_bound",
    "strategy_names",
    "run_game",
    "run_protocol",
    "estimate_completeness",
    "estimate_soundness",
    "estimate_zk_distance",
]


def _text(instance):
    return instance if isinstance(instance, str) else json.dumps(instance)


def bundled_instance(name):
    """The "ghz" yes-instance or the "frustrated" no-instance."""
    return json.loads(_core.bundled_instance(name))


def soundness_bound(instance):
    return _core.soundness_bound(_text(instance))


def strategy_names(game):
    return list(_core.strategy_names(game))


def run_game(game, strategy="random", trials=1000, seed=1, preset="small", mode="real", bits=8,
             fraction=0.5, jobs=1):
    return json.loads(_core.run_game(game, strategy, trials, seed, preset, mode, bits, fraction, jobs))


def run_protocol(instance, cheater="honest", verifier="honest", challenge=0, rounds=1, seed=1,
                 preset="default"):
    """challenge is 0-based and only read by the fixed-challenge verifier."""
    return json.loads(_core.run_protocol(_text(instance), cheater, verifier, challenge, rounds, seed, preset))


def estimate_completeness(instance, trials=1000, seed=1, preset="default", jobs=1):
    return json.loads(_core.estimate_completeness(_text(instance), trials, seed, preset, jobs))


def estimate_soundness(instance, cheater="optimal", trials=1000, seed=1, rounds=1, preset="default", jobs=1):
    return json.loads(_core.estimate_soundness(_text(instance), cheater, trials, seed, rounds, preset, jobs))


def estimate_zk_distance(instance, verifier="honest", challenge=0, samples=1000, seed=1, preset="default", jobs=1):
    return json.loads(_core.estimate_zk_distance(_text(instance), verifier, challenge, samples, seed, preset, jobs))
