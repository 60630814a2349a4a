import json

import numpy as np
import pytest

from rulemix import fit, load_model, model_document, save_model
from rulemix.errors import ModelFormatError, ModelVersionError
from rulemix.persistence import FORMAT_VERSION, document_to_model

from conftest import linear_data, small_config


@pytest.fixture(scope="module")
def trained():
    X, y = linear_data(n=100, d=2, noise=0.2, seed=42)
    return fit(X, y, small_config(master_seed=5)), X


class TestSaveLoad:
    def test_round_trip_predictions_bit_exact(self, trained, tmp_path):
        model, X = trained
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        gen = np.random.default_rng(0)
        X_query = gen.uniform(X.min(axis=0), X.max(axis=0), size=(100, 2))
        assert np.array_equal(model.predict(X_query), loaded.predict(X_query))

    def test_round_trip_structure(self, trained, tmp_path):
        model, _ = trained
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert len(loaded.pool) == len(model.pool)
        assert loaded.elitist.complexity == model.elitist.complexity
        assert loaded.elitist.fitness == model.elitist.fitness
        assert np.array_equal(loaded.elitist.genome, model.elitist.genome)
        assert loaded.config == model.config
        for ra, rb in zip(model.pool, loaded.pool):
            assert np.array_equal(ra.lower, rb.lower)
            assert np.array_equal(ra.upper, rb.upper)
            assert np.array_equal(ra.coefficients, rb.coefficients)
            assert ra.intercept == rb.intercept
            assert ra.in_sample_mse == rb.in_sample_mse
            assert ra.experience == rb.experience
            assert ra.volume == rb.volume
            assert ra.fitness == rb.fitness

    def test_transform_round_trips(self, trained, tmp_path):
        model, _ = trained
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert np.array_equal(loaded.transform.feature_min, model.transform.feature_min)
        assert np.array_equal(loaded.transform.feature_max, model.transform.feature_max)
        assert loaded.transform.target_mean == model.transform.target_mean
        assert loaded.transform.target_std == model.transform.target_std

    def test_file_is_stable_json(self, trained, tmp_path):
        model, _ = trained
        p1 = tmp_path / "a.json"
        p2 = tmp_path / "b.json"
        save_model(model, p1)
        save_model(model, p2)
        assert p1.read_bytes() == p2.read_bytes()
        doc = json.loads(p1.read_text())
        assert doc["format_version"] == FORMAT_VERSION

    def test_genome_serialized_as_bit_string(self, trained):
        model, _ = trained
        doc = model_document(model)
        bits = doc["elitist"]["genome_bits"]
        assert isinstance(bits, str)
        assert set(bits) <= {"0", "1"}
        assert len(bits) == len(model.pool)

    def test_save_load_save_is_identical(self, trained, tmp_path):
        model, _ = trained
        p1 = tmp_path / "first.json"
        save_model(model, p1)
        p2 = tmp_path / "second.json"
        save_model(load_model(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()


class TestFormatErrors:
    def base_doc(self, trained):
        model, _ = trained
        return model_document(model)

    def test_truncated_file(self, trained, tmp_path):
        model, _ = trained
        path = tmp_path / "model.json"
        save_model(model, path)
        path.write_text(path.read_text()[: len(path.read_text()) // 2])
        with pytest.raises(ModelFormatError):
            load_model(path)

    def test_missing_version(self, trained):
        doc = self.base_doc(trained)
        del doc["format_version"]
        with pytest.raises(ModelFormatError):
            document_to_model(doc)

    def test_future_version(self, trained):
        doc = self.base_doc(trained)
        doc["format_version"] = FORMAT_VERSION + 1
        with pytest.raises(ModelVersionError) as err:
            document_to_model(doc)
        assert "version" in str(err.value)

    def test_version_error_is_a_format_error(self):
        assert issubclass(ModelVersionError, ModelFormatError)

    def test_genome_length_mismatch(self, trained):
        doc = self.base_doc(trained)
        doc["elitist"]["genome_bits"] = doc["elitist"]["genome_bits"] + "0"
        with pytest.raises(ModelFormatError):
            document_to_model(doc)

    def test_complexity_popcount_mismatch(self, trained):
        doc = self.base_doc(trained)
        doc["elitist"]["complexity"] = doc["elitist"]["complexity"] + 1
        with pytest.raises(ModelFormatError):
            document_to_model(doc)

    def test_inverted_rule_bounds(self, trained):
        doc = self.base_doc(trained)
        doc["pool"][0]["lower"], doc["pool"][0]["upper"] = (
            doc["pool"][0]["upper"],
            doc["pool"][0]["lower"],
        )
        with pytest.raises(ModelFormatError):
            document_to_model(doc)

    def test_dimension_mismatch_across_rules(self, trained):
        doc = self.base_doc(trained)
        doc["pool"][1]["lower"] = doc["pool"][1]["lower"] + [0.0]
        with pytest.raises(ModelFormatError):
            document_to_model(doc)

    def test_nonpositive_target_std(self, trained):
        doc = self.base_doc(trained)
        doc["transform"]["target_std"] = 0.0
        with pytest.raises(ModelFormatError):
            document_to_model(doc)

    def test_bad_experience(self, trained):
        doc = self.base_doc(trained)
        doc["pool"][0]["experience"] = 0
        with pytest.raises(ModelFormatError):
            document_to_model(doc)

    def test_negative_mse(self, trained):
        doc = self.base_doc(trained)
        doc["pool"][0]["mse"] = -0.5
        with pytest.raises(ModelFormatError):
            document_to_model(doc)

    def test_invalid_config_reported_as_format_error(self, trained):
        doc = self.base_doc(trained)
        doc["config"]["n_iter"] = 0
        with pytest.raises(ModelFormatError):
            document_to_model(doc)

    def test_stray_genome_characters(self, trained):
        doc = self.base_doc(trained)
        bits = doc["elitist"]["genome_bits"]
        doc["elitist"]["genome_bits"] = "2" + bits[1:]
        with pytest.raises(ModelFormatError):
            document_to_model(doc)

    def test_non_object_document(self):
        with pytest.raises(ModelFormatError):
            document_to_model([1, 2, 3])

    def test_not_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("not json at all{{{")
        with pytest.raises(ModelFormatError):
            load_model(path)
