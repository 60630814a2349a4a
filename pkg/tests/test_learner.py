import numpy as np
import pytest

from rulemix import (
    ESConfig,
    FitnessParams,
    GAConfig,
    LearnerConfig,
    Pool,
    Rule,
    TrainedModel,
    config_from_dict,
    config_to_dict,
    fit,
    fit_transform,
    mix_predict,
)
from rulemix.composition import SolutionIndividual
from rulemix.errors import ConfigError, DataError

from conftest import linear_data, small_config


class TestLearnerConfig:
    def test_defaults(self):
        config = LearnerConfig()
        assert config.n_iter == 32
        assert config.ridge_coeff == 0.01
        assert config.master_seed == 0
        assert config.es.n_rules == 4
        assert config.ga.population_size == 32

    def test_validation(self):
        with pytest.raises(ConfigError):
            LearnerConfig(n_iter=0)
        with pytest.raises(ConfigError):
            LearnerConfig(ridge_coeff=-1.0)
        with pytest.raises(ConfigError):
            LearnerConfig(master_seed=-1)
        with pytest.raises(ConfigError):
            LearnerConfig(master_seed=2**64)


class TestConfigDict:
    def test_round_trip_identity(self):
        config = LearnerConfig(
            n_iter=5,
            ridge_coeff=0.02,
            master_seed=9,
            es=ESConfig(lambda_=7, delta=3, n_rules=2, mutation_spread=0.2, init_spread=0.01),
            ga=GAConfig(population_size=8, generations=4, n_elitists=2, mutation_rate=0.125),
            rule_fitness=FitnessParams(alpha=0.1, beta=1.0),
            solution_fitness=FitnessParams(alpha=0.2, beta=3.0),
        )
        assert config_from_dict(config_to_dict(config)) == config

    def test_lambda_spelled_without_underscore(self):
        doc = config_to_dict(LearnerConfig())
        assert "lambda" in doc["es"]
        assert "lambda_" not in doc["es"]

    def test_partial_override(self):
        doc = {"es": {"lambda": 5}, "n_iter": 2}
        config = config_from_dict(doc)
        assert config.es.lambda_ == 5
        assert config.es.delta == 8
        assert config.n_iter == 2

    def test_partial_override_on_base(self):
        base = small_config(master_seed=3)
        config = config_from_dict({"ga": {"generations": 9}}, base=base)
        assert config.ga.generations == 9
        assert config.ga.population_size == base.ga.population_size
        assert config.master_seed == 3

    def test_unknown_keys_rejected_by_name(self):
        with pytest.raises(ConfigError) as err:
            config_from_dict({"es": {"lambada": 5}})
        assert "lambada" in str(err.value)
        with pytest.raises(ConfigError) as err:
            config_from_dict({"madeup": 1})
        assert "madeup" in str(err.value)

    def test_invalid_values_still_validated(self):
        with pytest.raises(ConfigError):
            config_from_dict({"es": {"lambda": 0}})


class TestFit:
    def test_learns_a_linear_function(self):
        X, y = linear_data(n=150, d=1, seed=2)
        model = fit(X, y, small_config(n_iter=4))
        X_test, y_test = linear_data(n=60, d=1, seed=3)
        inside = (X_test[:, 0] >= X.min()) & (X_test[:, 0] <= X.max())
        predictions = model.predict(X_test[inside])
        mse = float(np.mean((y_test[inside] - predictions) ** 2))
        assert mse < 0.5 * float(np.var(y_test[inside]))

    def test_pool_growth_and_history_length(self):
        X, y = linear_data(n=80, d=2, seed=4)
        config = small_config(n_iter=3)
        model = fit(X, y, config)
        assert len(model.pool) == config.n_iter * config.es.n_rules
        assert len(model.fitness_history) == config.n_iter
        assert len(model.elitist.genome) == len(model.pool)
        assert model.complexity == int(np.count_nonzero(model.elitist.genome))

    def test_fitness_history_is_monotone(self):
        X, y = linear_data(n=100, d=1, noise=0.3, seed=5)
        model = fit(X, y, small_config(n_iter=5))
        history = model.fitness_history
        assert all(b >= a for a, b in zip(history, history[1:]))

    def test_same_seed_same_model(self):
        X, y = linear_data(n=80, d=2, seed=6)
        a = fit(X, y, small_config(master_seed=11))
        b = fit(X, y, small_config(master_seed=11))
        assert np.array_equal(a.elitist.genome, b.elitist.genome)
        assert a.elitist.fitness == b.elitist.fitness
        for ra, rb in zip(a.pool, b.pool):
            assert np.array_equal(ra.lower, rb.lower)
            assert np.array_equal(ra.coefficients, rb.coefficients)

    def test_different_seed_different_model(self):
        X, y = linear_data(n=80, d=2, noise=0.5, seed=7)
        a = fit(X, y, small_config(master_seed=1))
        b = fit(X, y, small_config(master_seed=2))
        assert any(
            not np.array_equal(ra.lower, rb.lower) for ra, rb in zip(a.pool, b.pool)
        )

    def test_default_config_used_when_none(self):
        # tiny data keeps the default-size run affordable
        X, y = linear_data(n=40, d=1, seed=8)
        config = LearnerConfig(n_iter=1, es=ESConfig(lambda_=3, delta=1, n_rules=1), ga=GAConfig(population_size=4, generations=1, n_elitists=1))
        model = fit(X, y, config)
        assert model.config is config

    def test_predict_validates_shape(self):
        X, y = linear_data(n=60, d=2, seed=9)
        model = fit(X, y, small_config())
        with pytest.raises(DataError):
            model.predict(np.zeros(2))

    def test_predict_round_trips_scaling(self):
        X, y = linear_data(n=90, d=2, seed=10)
        model = fit(X, y, small_config())
        X_query = X[:17]
        scaled = model.transform.transform_features(X_query)
        manual = model.transform.inverse_target(mix_predict(model.selected_rules, scaled))
        assert np.array_equal(model.predict(X_query), manual)


class TestMixingBehavior:
    def test_two_disjoint_rules_blend_to_their_own_lines(self):
        # hand-built model: x < 0 predicts 2 (scaled), x > 0 predicts -1
        lower_a, upper_a = np.array([-1.0]), np.array([0.0])
        lower_b, upper_b = np.array([0.0]), np.array([1.0])
        rule_a = Rule(lower_a, upper_a, np.zeros(1), 2.0, 0.1, 10, 0.5, 0.5)
        rule_b = Rule(lower_b, upper_b, np.zeros(1), -1.0, 0.1, 10, 0.5, 0.5)
        X = np.array([[-0.5], [0.5]])
        out = mix_predict([rule_a, rule_b], X)
        assert out.tolist() == [2.0, -1.0]
        # at the shared boundary both rules match with equal weight
        out_mid = mix_predict([rule_a, rule_b], np.array([[0.0]]))
        assert out_mid[0] == pytest.approx(0.5, rel=1e-12)
