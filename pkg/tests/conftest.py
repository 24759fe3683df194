import importlib.util
from pathlib import Path

import pytest

from metlit import Discourse, Token
from metlit.cli import main as cli_main

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"


def _load_generator():
    spec = importlib.util.spec_from_file_location(
        "fixturegen", FIXTURES / "generate.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture(scope="session")
def fixturegen():
    """The fixture-builder module, with its EXPECTED_* design constants."""
    return _load_generator()


@pytest.fixture(scope="session")
def fixture_inputs(tmp_path_factory, fixturegen):
    """Input files for the 16-discourse corpus, generated once per session."""
    directory = tmp_path_factory.mktemp("fixture-inputs")
    return fixturegen.build_fixture(directory)


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN


@pytest.fixture(scope="session")
def pipeline_out(tmp_path_factory, fixture_inputs):
    """One completed end-to-end run over the fixture (figures skipped)."""
    out = tmp_path_factory.mktemp("pipeline-out")
    status = cli_main([
        "run",
        "--corpus", str(fixture_inputs["corpus"]),
        "--pairs", str(fixture_inputs["pairs"]),
        "--concreteness", str(fixture_inputs["concreteness"]),
        "--emotion", str(fixture_inputs["emotion"]),
        "--embeddings", str(fixture_inputs["embeddings"]),
        "--cloze", str(fixture_inputs["cloze"]),
        "--annotations", str(fixture_inputs["annotations"]),
        "--out", str(out),
        "--no-figures",
    ])
    assert status == 0
    return out


@pytest.fixture
def tok():
    def build(lemma, upos="NOUN", surface=None):
        return Token(surface=surface or lemma, lemma=lemma, upos=upos)
    return build


@pytest.fixture
def disc(tok):
    """A discourse from bare (lemma, upos) preceding tokens and a stock final."""
    def build(preceding, discourse_id="dx", pair_id="px", label="literal",
              final=None, slot=1):
        if final is None:
            final = (tok("she", "PRON"), tok("grasp", "VERB"),
                     tok("meaning", "NOUN"), tok(".", "PUNCT"))
        sentences = tuple(
            tuple(tok(lemma, upos) for lemma, upos in sentence)
            for sentence in preceding
        ) + (tuple(final),)
        return Discourse(
            discourse_id=discourse_id,
            pair_id=pair_id,
            sentences=sentences,
            final_sentence_index=len(sentences) - 1,
            slot_token_index=slot,
            original_label=label,
        )
    return build
