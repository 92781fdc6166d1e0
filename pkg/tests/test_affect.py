"""Emotion scoring: lexicon loading, the hand-average oracle for
score_vad, the scalar mood, and the words rendering."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ethnosim.affect import (
    VadLexicon,
    VadVector,
    default_lexicon,
    overall_emotion,
    score_vad,
    tokenize,
    vad_to_words,
)

LEX = default_lexicon()


def hand_average(terms: list[str]) -> tuple[float, float, float]:
    """Oracle: look each term up directly and average componentwise."""
    rows = [LEX.rows[t] for t in terms]
    n = len(rows)
    return tuple(sum(r[i] for r in rows) / n for i in range(3))


def test_lexicon_loads_with_bounded_rows():
    assert len(LEX) > 100
    for term, (v, a, d) in LEX.rows.items():
        assert term == term.lower()
        assert -1.0 <= v <= 1.0 and -1.0 <= a <= 1.0 and -1.0 <= d <= 1.0


def test_empty_and_no_hit_text_score_zero():
    assert score_vad("", LEX).as_tuple() == (0.0, 0.0, 0.0)
    assert score_vad("qwzx flrg bnpt", LEX).as_tuple() == (0.0, 0.0, 0.0)
    assert score_vad("!!! ... ???", LEX).as_tuple() == (0.0, 0.0, 0.0)


def test_single_term_scores_its_exact_lexicon_row():
    for term in ("angry", "alive", "alone", "afraid"):
        assert score_vad(term, LEX).as_tuple() == LEX.rows[term]


def test_two_terms_score_their_hand_mean():
    got = score_vad("angry alive", LEX).as_tuple()
    expect = hand_average(["angry", "alive"])
    assert got == pytest.approx(expect, abs=1e-12)


def test_unknown_tokens_are_ignored_not_zeroed():
    alone = score_vad("alone", LEX).as_tuple()
    padded = score_vad("the xyzzy alone frobnicate", LEX).as_tuple()
    assert padded == pytest.approx(alone, abs=1e-12)


def test_case_and_punctuation_insensitive():
    a = score_vad("Angry, ALIVE!", LEX).as_tuple()
    b = score_vad("angry alive", LEX).as_tuple()
    assert a == pytest.approx(b, abs=1e-12)


def test_sampled_lexicon_terms_match_lookup_oracle():
    rng = np.random.default_rng(11)
    terms = sorted(LEX.rows)
    unigrams = [t for t in terms if " " not in t]
    for idx in rng.choice(len(unigrams), size=60, replace=False):
        term = unigrams[idx]
        assert score_vad(term, LEX).as_tuple() == pytest.approx(
            LEX.rows[term], abs=1e-12
        )


def test_random_sentences_match_hand_average_oracle():
    rng = np.random.default_rng(23)
    unigrams = [t for t in sorted(LEX.rows) if " " not in t]
    for _ in range(80):
        k = int(rng.integers(2, 11))
        picks = [unigrams[int(i)] for i in rng.integers(0, len(unigrams), size=k)]
        sentence = " ".join(picks)
        assert score_vad(sentence, LEX).as_tuple() == pytest.approx(
            hand_average(picks), abs=1e-9
        )


def test_multiword_terms_match_longest_first():
    lex = VadLexicon(
        {
            "give up": (-0.5, 0.0, -0.5),
            "give": (0.2, 0.0, 0.2),
            "up": (0.1, 0.1, 0.1),
        }
    )
    assert score_vad("give up", lex).as_tuple() == (-0.5, 0.0, -0.5)
    assert score_vad("give it", lex).as_tuple() == (0.2, 0.0, 0.2)


def test_score_is_token_permutation_invariant():
    a = score_vad("angry alive alone", LEX)
    b = score_vad("alone angry alive", LEX)
    assert a.as_tuple() == pytest.approx(b.as_tuple(), abs=1e-12)


@given(
    st.lists(
        st.sampled_from([t for t in sorted(LEX.rows) if " " not in t]),
        min_size=1,
        max_size=8,
    )
)
@settings(max_examples=100, deadline=None)
def test_duplicating_the_token_multiset_preserves_the_score(terms):
    once = score_vad(" ".join(terms), LEX).as_tuple()
    twice = score_vad(" ".join(terms + terms), LEX).as_tuple()
    assert once == pytest.approx(twice, abs=1e-9)


def test_tokenize_strips_punctuation_only_tokens():
    assert tokenize("Hello, world! -- ok") == ["hello", "world", "ok"]


def test_vad_vector_rejects_out_of_range():
    with pytest.raises(ValueError):
        VadVector(1.5, 0.0, 0.0)


def test_overall_emotion_is_the_component_sum():
    assert overall_emotion(VadVector()) == 0.0
    assert overall_emotion(VadVector(0.2, 0.1, -0.05)) == pytest.approx(0.25)
    assert overall_emotion(VadVector(-1, -1, -1)) == -3.0


@given(
    st.floats(-0.5, 0.5),
    st.floats(-0.5, 0.5),
    st.floats(-0.5, 0.5),
    st.floats(-0.5, 0.5),
    st.floats(-0.5, 0.5),
    st.floats(-0.5, 0.5),
)
@settings(max_examples=100, deadline=None)
def test_overall_emotion_is_linear(v1, a1, d1, v2, a2, d2):
    lhs = overall_emotion(VadVector(v1, a1, d1)) + overall_emotion(
        VadVector(v2, a2, d2)
    )
    rhs = overall_emotion(VadVector(v1 + v2, a1 + a2, d1 + d2))
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_vad_to_words_fixtures():
    assert vad_to_words(VadVector()) == "emotionally neutral"
    assert vad_to_words(VadVector(0.8, 0.5, 0.5)) == "pleasant, agitated, in-control"
    assert vad_to_words(VadVector(-0.5, 0.1, -0.9)) == "unpleasant, submissive"
    assert vad_to_words(VadVector(1 / 3, 0.0, 0.0)) == "pleasant"  # inclusive bound
    assert vad_to_words(VadVector(0.32, 0.0, 0.0)) == "emotionally neutral"
