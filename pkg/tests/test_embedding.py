import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA
from faqwise.embedding import (
    BASELINE_EMBEDDER_ID,
    EmbedderSpec,
    embed,
    embed_batch,
    fnv1a_64,
    load_precomputed,
    register_embedder,
)
from faqwise.errors import UnknownEmbedder
from faqwise.model_store import save_model

SPEC = EmbedderSpec(dimension=64)


class TestFnv1a:
    # Published FNV-1a 64-bit test vectors.
    @pytest.mark.parametrize("data,expected", [
        (b"", 0xCBF29CE484222325),
        (b"a", 0xAF63DC4C8601EC8C),
        (b"foobar", 0x85944171F73967E8),
    ])
    def test_known_values(self, data, expected):
        assert fnv1a_64(data) == expected


class TestEmbed:
    def test_deterministic(self):
        a = embed("abc", SPEC)
        b = embed("abc", SPEC)
        assert a.dtype == np.float32
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("text", ["", "   ", "\t\n"])
    def test_blank_text_is_null_embedding(self, text):
        assert not embed(text, SPEC).any()

    def test_unit_norm_by_independent_summation(self):
        # Oracle: accumulate squares with exact fractions, no numpy.
        from fractions import Fraction

        vec = embed("What is COVID-19?", SPEC)
        total = sum(Fraction(float(v)) ** 2 for v in vec)
        assert abs(math.sqrt(float(total)) - 1.0) < 1e-5

    @settings(max_examples=100, deadline=None)
    @given(st.text(min_size=1, max_size=120))
    def test_unit_norm_property(self, text):
        vec = embed(text, SPEC)
        norm = float(np.linalg.norm(vec.astype(np.float64)))
        if text.strip():
            assert abs(norm - 1.0) < 1e-5
        else:
            assert norm == 0.0

    def test_case_insensitive(self):
        assert np.array_equal(embed("Hello World", SPEC), embed("hello world", SPEC))

    def test_short_text_still_unit_norm(self):
        for text in ["a", "ab", "é"]:
            norm = float(np.linalg.norm(embed(text, SPEC)))
            assert abs(norm - 1.0) < 1e-5

    def test_dimension_follows_spec(self):
        for dim in (16, 512):
            assert embed("question", EmbedderSpec(dimension=dim)).shape == (dim,)

    def test_unknown_embedder(self):
        with pytest.raises(UnknownEmbedder):
            embed("x", EmbedderSpec(id="no-such-model"))

    def test_registered_embedder_is_used(self):
        spec = EmbedderSpec(id="test-constant", dimension=4)
        register_embedder(
            "test-constant",
            lambda text, s: np.asarray([1, 0, 0, 0], dtype=np.float32),
        )
        assert np.array_equal(embed("anything", spec), [1, 0, 0, 0])


class TestEmbedBatch:
    def test_rows_match_individual_embed(self):
        questions = ["one?", "two?", "three?"]
        matrix = embed_batch(questions, SPEC)
        assert matrix.shape == (3, 64)
        for i, q in enumerate(questions):
            assert np.array_equal(matrix[i], embed(q, SPEC))

    def test_empty_list(self):
        assert embed_batch([], SPEC).shape == (0, 64)

    def test_paper_scale_shape(self):
        questions = [f"question number {i}?" for i in range(119)]
        matrix = embed_batch(questions, EmbedderSpec(dimension=512))
        assert matrix.shape == (119, 512)

    @settings(max_examples=30, deadline=None)
    @given(st.permutations(list(range(5))))
    def test_permutation_equivariance(self, perm):
        questions = [f"unique question {i}?" for i in range(5)]
        base = embed_batch(questions, SPEC)
        shuffled = embed_batch([questions[i] for i in perm], SPEC)
        assert np.array_equal(shuffled, base[perm])


class TestGoldenVectors:
    def test_baseline_output_is_frozen(self):
        golden = json.loads((DATA / "baseline_golden.json").read_text())
        spec = EmbedderSpec(
            id=golden["embedder_id"], dimension=golden["dimension"]
        )
        assert spec.id == BASELINE_EMBEDDER_ID
        for sentence, expected in zip(golden["sentences"], golden["vectors"]):
            got = embed(sentence, spec)
            assert np.array_equal(got, np.asarray(expected, dtype=np.float32)), (
                f"baseline embedder drifted for {sentence!r}; "
                "this is a breaking format revision"
            )


class TestLoadPrecomputed:
    def test_round_trip_matches(self, small_kb, tmp_path):
        path = tmp_path / "model.json"
        save_model(small_kb, path)
        spec, matrix = load_precomputed(path)
        assert spec == small_kb.embedder
        assert np.array_equal(matrix, small_kb.matrix)

    def test_external_vectors_loaded_without_embedder(self, tmp_path):
        # Offline-produced vectors under an id that is NOT registered:
        # loading must not invoke any embedder.
        rng = np.random.default_rng(7)
        rows = rng.normal(size=(5, 512))
        rows /= np.linalg.norm(rows, axis=1, keepdims=True)
        doc = {
            "format_version": 1,
            "embedder": {"id": "external-use-v4", "dimension": 512, "params": {}},
            "threshold": 0.75,
            "source": "offline",
            "pairs": [
                {"question": f"q{i}?", "answer": f"a{i}"} for i in range(5)
            ],
            "embeddings": [
                [float(np.float32(v)) for v in row] for row in rows
            ],
        }
        path = tmp_path / "external.json"
        path.write_text(json.dumps(doc))
        spec, matrix = load_precomputed(path)
        assert spec.id == "external-use-v4"
        assert matrix.shape == (5, 512)
        assert np.array_equal(matrix, rows.astype(np.float32))
