"""scikit-learn style front end: ``fit`` replays traffic, ``transform`` maps distances to link metrics."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .config import ScenarioConfig
from .simulation import SCHEMES, evaluate_probe, replay

METRICS = ("sinr_db", "capacity_bps_hz", "outage_prob", "active_tier1", "active_tier2")


def check_distances(X, min_km: float = 0.0) -> np.ndarray:
    """Validate a distance column (km) and return it as a 1-D float array."""
    X = check_array(X, ensure_2d=False, dtype=np.float64)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single distance column, got shape {X.shape}")
        X = X[:, 0]
    if np.any(X <= 0):
        raise ValueError("distances must be strictly positive")
    if np.any(X < min_km):
        raise ValueError(f"distances below the minimum evaluation distance {min_km} km")
    return X


class SchemeComparison(TransformerMixin, BaseEstimator):
    """Compare conventional borrowing against interference declination.

    Parameters
    ----------
    config : ScenarioConfig or None
        Scenario parameters; ``None`` uses the defaults.
    strategy : str or None
        Overrides ``config.strategy`` ("none", "blocking", "bifurcation", "auto").
    seed : int or None
        Overrides ``config.seed``.

    Attributes
    ----------
    state_ : ScenarioState
        Topology, borrow plan and per-scheme channel state after the replay.
    config_ : ScenarioConfig
        The effective configuration.
    """

    def __init__(self, config=None, strategy=None, seed=None):
        self.config = config
        self.strategy = strategy
        self.seed = seed

    def _effective_config(self) -> ScenarioConfig:
        cfg = self.config if self.config is not None else ScenarioConfig()
        changes = {}
        if self.strategy is not None:
            changes["strategy"] = str(self.strategy)
        if self.seed is not None:
            changes["seed"] = int(self.seed)
        return cfg.replace(**changes) if changes else cfg

    def fit(self, X=None, y=None):
        """Build the topology, replay traffic and perform the borrow.

        ``X`` and ``y`` are ignored; they exist for pipeline compatibility.
        """
        self.config_ = self._effective_config()
        self.state_ = replay(self.config_)
        self.n_features_in_ = 1
        return self

    def evaluate(self, distances_km):
        """Per-scheme :class:`ProbeResult` lists for each distance."""
        check_is_fitted(self, "state_")
        d = check_distances(distances_km, self.config_.sweep.min_eval_km)
        return {s: [evaluate_probe(self.state_, s, float(x)) for x in d] for s in SCHEMES}

    def transform(self, X):
        """Return an ``(n, 10)`` array: the :data:`METRICS` for conventional then proposed."""
        results = self.evaluate(X)
        cols = []
        for scheme in SCHEMES:
            for name in METRICS:
                cols.append([getattr(r, name) for r in results[scheme]])
        return np.asarray(cols, dtype=float).T

    def get_feature_names_out(self, input_features=None):
        return np.asarray([f"{s}_{m}" for s in SCHEMES for m in METRICS], dtype=object)
