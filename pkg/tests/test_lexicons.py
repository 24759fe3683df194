import pytest

from metlit import (ConcretenessEntry, EmotionEntry, InputError, coverage,
                    emotional_load, load_concreteness, load_emotion)


class TestConcretenessEntry:
    def test_rating_range(self):
        ConcretenessEntry("idea", 1.0)
        ConcretenessEntry("stone", 5.0)
        with pytest.raises(ValueError, match=r"outside \[1, 5\]"):
            ConcretenessEntry("idea", 0.9)
        with pytest.raises(ValueError):
            ConcretenessEntry("stone", 5.1)

    def test_pos_validated(self):
        ConcretenessEntry("stone", 4.8, dominant_pos="NOUN")
        with pytest.raises(ValueError, match="pos"):
            ConcretenessEntry("stone", 4.8, dominant_pos="NN")


class TestEmotionEntry:
    def test_scores_tuple_order(self):
        e = EmotionEntry("truth", 2.24, 1.46, 1.4, 1.49, 1.46)
        assert e.scores == (2.24, 1.46, 1.4, 1.49, 1.46)

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="anger"):
            EmotionEntry("x", 1.0, -0.1, 1.0, 1.0, 1.0)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            EmotionEntry("x", float("nan"), 1.0, 1.0, 1.0, 1.0)


class TestLoadConcreteness:
    def test_fixture_tsv(self, fixture_inputs):
        lexicon = load_concreteness(fixture_inputs["concreteness"])
        assert lexicon["idea"].rating == 1.6
        assert lexicon["london"].dominant_pos == "PROPN"

    def test_comma_delimited_and_case_folding(self, tmp_path):
        path = tmp_path / "conc.csv"
        path.write_text("lemma,rating\nStone,4.8\n")
        lexicon = load_concreteness(path)
        assert lexicon["stone"].rating == 4.8
        assert lexicon["stone"].dominant_pos is None

    def test_pos_column_optional_and_blank_allowed(self, tmp_path):
        path = tmp_path / "conc.tsv"
        path.write_text("lemma\trating\tpos\nidea\t1.6\tnoun\nriver\t4.6\t\n")
        lexicon = load_concreteness(path)
        assert lexicon["idea"].dominant_pos == "NOUN"
        assert lexicon["river"].dominant_pos is None

    def test_duplicate_lemma(self, tmp_path):
        path = tmp_path / "conc.csv"
        path.write_text("lemma,rating\nidea,1.6\nIdea,2.0\n")
        with pytest.raises(InputError, match=r"conc\.csv:3.*duplicate"):
            load_concreteness(path)

    def test_rating_out_of_range_reports_line(self, tmp_path):
        path = tmp_path / "conc.csv"
        path.write_text("lemma,rating\nidea,1.6\nvoid,0.2\n")
        with pytest.raises(InputError, match=r"conc\.csv:3"):
            load_concreteness(path)

    def test_missing_column(self, tmp_path):
        path = tmp_path / "conc.csv"
        path.write_text("lemma,score\nidea,1.6\n")
        with pytest.raises(InputError, match="missing column"):
            load_concreteness(path)

    def test_short_row(self, tmp_path):
        path = tmp_path / "conc.csv"
        path.write_text("lemma,rating\nidea\n")
        with pytest.raises(InputError, match="expected 2 columns"):
            load_concreteness(path)


class TestLoadEmotion:
    def test_fixture_csv(self, fixture_inputs):
        lexicon = load_emotion(fixture_inputs["emotion"])
        assert lexicon["truth"].scores == (2.24, 1.46, 1.4, 1.49, 1.46)

    def test_requires_all_five_emotions(self, tmp_path):
        path = tmp_path / "emo.csv"
        path.write_text("lemma,joy,anger,sadness,fear\nx,1,1,1,1\n")
        with pytest.raises(InputError, match="surprise"):
            load_emotion(path)

    def test_negative_score_reports_line(self, tmp_path):
        path = tmp_path / "emo.csv"
        path.write_text("lemma,joy,anger,sadness,fear,surprise\nx,1,1,-1,1,1\n")
        with pytest.raises(InputError, match=r"emo\.csv:2"):
            load_emotion(path)


def test_emotional_load_is_max_of_scores():
    entry = EmotionEntry("truth", 2.24, 1.46, 1.4, 1.49, 1.46)
    assert emotional_load(entry) == 2.24
    flat = EmotionEntry("x", 1.0, 1.0, 1.0, 1.0, 1.0)
    assert emotional_load(flat) == 1.0


class TestCoverage:
    def test_counts(self, tok):
        lexicon = {"idea": object(), "stone": object()}
        stat = coverage(lexicon, [tok("idea"), tok("stone"), tok("xyzzy")])
        assert (stat.tokens_considered, stat.tokens_matched) == (3, 2)
        assert stat.fraction == pytest.approx(2 / 3)

    def test_empty_input(self):
        stat = coverage({}, [])
        assert stat.fraction == 0.0
