import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from chanborrow import SchemeComparison, ScenarioConfig
from chanborrow.estimator import METRICS, check_distances

CFG = ScenarioConfig(monte_carlo_samples=0)


def test_get_params_and_clone():
    est = SchemeComparison(CFG, strategy="blocking", seed=4)
    params = est.get_params()
    assert params == {"config": CFG, "strategy": "blocking", "seed": 4}
    twin = clone(est)
    assert twin.get_params() == params
    est.set_params(seed=5)
    assert est.seed == 5


def test_not_fitted():
    with pytest.raises(NotFittedError):
        SchemeComparison(CFG).transform([[0.5]])


def test_transform_shape_and_names():
    est = SchemeComparison(CFG).fit()
    X = np.array([[0.2], [0.4], [0.8]])
    out = est.transform(X)
    assert out.shape == (3, 2 * len(METRICS))
    names = list(est.get_feature_names_out())
    assert names[0] == "conventional_sinr_db" and names[-1] == "proposed_active_tier2"
    i_c, i_p = names.index("conventional_sinr_db"), names.index("proposed_sinr_db")
    assert np.all(out[:, i_p] >= out[:, i_c])


def test_transform_matches_report():
    from chanborrow import run_scenario

    rep = run_scenario(CFG)
    est = SchemeComparison(CFG).fit()
    d = rep.distances()
    out = est.transform(np.asarray(d)[:, None])
    conv = rep.scheme_rows("conventional")
    np.testing.assert_allclose(out[:, 0], [r.sinr_db for r in conv], rtol=1e-12)


def test_pipeline_composition():
    pipe = make_pipeline(FunctionTransformer(lambda m: m / 1000.0), SchemeComparison(CFG))
    out = pipe.fit_transform(np.array([[250.0], [500.0]]))
    assert out.shape == (2, 10)


@pytest.mark.parametrize("bad", [[[0.0]], [[-1.0]], [[0.1, 0.2]], [[np.nan]]])
def test_distance_validation(bad):
    with pytest.raises(ValueError):
        check_distances(bad)


def test_distance_below_eval_floor():
    est = SchemeComparison(CFG).fit()
    with pytest.raises(ValueError):
        est.transform([[0.01]])


def test_overrides_do_not_mutate_config():
    est = SchemeComparison(CFG, strategy="none", seed=9).fit()
    assert est.config_.strategy == "none" and est.config_.seed == 9
    assert CFG.strategy == "auto"
