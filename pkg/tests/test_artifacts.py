import hashlib
import json

import pytest

from metlit import InputError, load_cloze, load_embeddings, sha256_file

MANIFEST = {"model": "toy", "version": "1", "layer": "last", "pooling": "mean",
            "context_mode": "discourse", "created_at": "2026-01-01T00:00:00Z",
            "corpus_digest": "sha256:abc", "dim": 2}


def write_jsonl(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records))
    return path


def context_record(discourse_id="d1", sentence=0, token=0, vector=(1.0, 0.0)):
    return {"discourse_id": discourse_id,
            "ref": {"kind": "context", "sentence": sentence, "token": token},
            "vector": list(vector)}


def component_record(discourse_id="d1", role="verb", variant="metaphorical",
                     vector=(0.0, 1.0)):
    return {"discourse_id": discourse_id,
            "ref": {"kind": "component", "role": role, "variant": variant},
            "vector": list(vector)}


def test_sha256_file(tmp_path):
    path = tmp_path / "blob"
    path.write_bytes(b"hello\n")
    expected = hashlib.sha256(b"hello\n").hexdigest()
    assert sha256_file(path) == "sha256:" + expected


class TestLoadEmbeddings:
    def test_loads_and_indexes(self, tmp_path):
        path = write_jsonl(tmp_path / "emb.jsonl", [
            MANIFEST,
            context_record(vector=(1.0, 0.0)),
            context_record(sentence=0, token=1, vector=(0.5, 0.5)),
            component_record(role="verb", variant="metaphorical"),
            component_record(role="argument", variant="metaphorical"),
            component_record(role="verb", variant="literal"),
            component_record(role="argument", variant="literal"),
        ])
        artifact = load_embeddings(path)
        assert artifact.manifest.model == "toy"
        assert artifact.context_vector("d1", 0, 1) == (0.5, 0.5)
        assert artifact.context_vector("d1", 9, 9) is None
        assert artifact.component_vectors("d1", "metaphorical") == (
            (0.0, 1.0), (0.0, 1.0))
        assert artifact.discourse_ids() == {"d1"}

    def test_digest_checked_when_given(self, tmp_path):
        path = write_jsonl(tmp_path / "emb.jsonl", [MANIFEST, context_record()])
        load_embeddings(path, corpus_digest="sha256:abc")
        with pytest.raises(InputError, match="built for corpus"):
            load_embeddings(path, corpus_digest="sha256:def")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "emb.jsonl"
        path.write_text("")
        with pytest.raises(InputError, match="manifest"):
            load_embeddings(path)

    def test_manifest_missing_model(self, tmp_path):
        manifest = {k: v for k, v in MANIFEST.items() if k != "model"}
        path = write_jsonl(tmp_path / "emb.jsonl", [manifest])
        with pytest.raises(InputError, match="missing field model"):
            load_embeddings(path)

    def test_manifest_needs_positive_dim(self, tmp_path):
        manifest = dict(MANIFEST, dim=0)
        path = write_jsonl(tmp_path / "emb.jsonl", [manifest])
        with pytest.raises(InputError, match="dim"):
            load_embeddings(path)
        manifest.pop("dim")
        path = write_jsonl(tmp_path / "emb.jsonl", [manifest])
        with pytest.raises(InputError, match="dim"):
            load_embeddings(path)

    def test_vector_dimension_checked(self, tmp_path):
        path = write_jsonl(tmp_path / "emb.jsonl", [
            MANIFEST, context_record(vector=(1.0, 0.0, 0.0))])
        with pytest.raises(InputError, match=r"emb\.jsonl:2.*dimension 3"):
            load_embeddings(path)

    def test_zero_norm_vector_rejected(self, tmp_path):
        path = write_jsonl(tmp_path / "emb.jsonl", [
            MANIFEST, context_record(vector=(0.0, 0.0))])
        with pytest.raises(InputError, match="zero norm"):
            load_embeddings(path)

    def test_non_finite_vector_rejected(self, tmp_path):
        record = context_record()
        record["vector"] = [1.0, float("nan")]
        text = json.dumps(MANIFEST) + "\n" + json.dumps(record) + "\n"
        path = tmp_path / "emb.jsonl"
        path.write_text(text)
        with pytest.raises(InputError):  # NaN may die in json or in validation
            load_embeddings(path)

    def test_duplicate_context_rejected(self, tmp_path):
        path = write_jsonl(tmp_path / "emb.jsonl", [
            MANIFEST, context_record(), context_record()])
        with pytest.raises(InputError, match="duplicate context"):
            load_embeddings(path)

    def test_duplicate_component_rejected(self, tmp_path):
        path = write_jsonl(tmp_path / "emb.jsonl", [
            MANIFEST, component_record(), component_record()])
        with pytest.raises(InputError, match="duplicate metaphorical verb"):
            load_embeddings(path)

    def test_bad_role_rejected(self, tmp_path):
        path = write_jsonl(tmp_path / "emb.jsonl", [
            MANIFEST, component_record(role="object")])
        with pytest.raises(InputError, match="role"):
            load_embeddings(path)

    def test_unknown_kind_rejected(self, tmp_path):
        record = context_record()
        record["ref"]["kind"] = "sentence"
        path = write_jsonl(tmp_path / "emb.jsonl", [MANIFEST, record])
        with pytest.raises(InputError, match="unknown ref kind"):
            load_embeddings(path)

    def test_incomplete_component_set_is_absent(self, tmp_path):
        path = write_jsonl(tmp_path / "emb.jsonl", [
            MANIFEST, component_record(role="verb")])
        artifact = load_embeddings(path)
        assert artifact.component_vectors("d1", "metaphorical") is None

    def test_malformed_json_line(self, tmp_path):
        path = tmp_path / "emb.jsonl"
        path.write_text(json.dumps(MANIFEST) + "\n{oops\n")
        with pytest.raises(InputError, match=r"emb\.jsonl:2.*malformed"):
            load_embeddings(path)


def cloze_record(discourse_id="d1", candidate="metaphorical", logprob=-1.0,
                 n_subtokens=1):
    return {"discourse_id": discourse_id, "candidate": candidate,
            "logprob": logprob, "n_subtokens": n_subtokens}


class TestLoadCloze:
    def manifest(self):
        return {k: v for k, v in MANIFEST.items() if k != "dim"}

    def test_loads(self, tmp_path):
        path = write_jsonl(tmp_path / "cloze.jsonl", [
            self.manifest(),
            cloze_record(logprob=-4.0, n_subtokens=2),
            cloze_record(candidate="literal", logprob=-2.5),
        ])
        artifact = load_cloze(path)
        scores = artifact.scores_for("d1")
        assert scores["metaphorical"].n_subtokens == 2
        assert scores["literal"].logprob == -2.5
        assert artifact.scores_for("d9") is None
        assert artifact.discourse_ids() == {"d1"}

    def test_digest_checked(self, tmp_path):
        path = write_jsonl(tmp_path / "cloze.jsonl", [self.manifest()])
        with pytest.raises(InputError, match="built for corpus"):
            load_cloze(path, corpus_digest="sha256:def")

    def test_dim_not_required(self, tmp_path):
        path = write_jsonl(tmp_path / "cloze.jsonl", [self.manifest()])
        assert load_cloze(path).manifest.dim is None

    def test_duplicate_record_rejected(self, tmp_path):
        path = write_jsonl(tmp_path / "cloze.jsonl", [
            self.manifest(), cloze_record(), cloze_record()])
        with pytest.raises(InputError, match="duplicate cloze record"):
            load_cloze(path)

    def test_bad_candidate_rejected(self, tmp_path):
        path = write_jsonl(tmp_path / "cloze.jsonl", [
            self.manifest(), cloze_record(candidate="met")])
        with pytest.raises(InputError, match="candidate"):
            load_cloze(path)

    def test_subtoken_count_must_be_positive(self, tmp_path):
        path = write_jsonl(tmp_path / "cloze.jsonl", [
            self.manifest(), cloze_record(n_subtokens=0)])
        with pytest.raises(InputError, match="n_subtokens"):
            load_cloze(path)

    def test_missing_field_reports_line(self, tmp_path):
        record = cloze_record()
        record.pop("logprob")
        path = write_jsonl(tmp_path / "cloze.jsonl", [self.manifest(), record])
        with pytest.raises(InputError, match=r"cloze\.jsonl:2.*logprob"):
            load_cloze(path)


class TestFixtureArtifacts:
    def test_embeddings_cover_every_discourse(self, fixture_inputs):
        artifact = load_embeddings(fixture_inputs["embeddings"],
                                   corpus_digest=fixture_inputs["corpus_digest"])
        assert artifact.manifest.dim == 4
        assert len(artifact.discourse_ids()) == 16

    def test_cloze_covers_every_discourse(self, fixture_inputs):
        artifact = load_cloze(fixture_inputs["cloze"],
                              corpus_digest=fixture_inputs["corpus_digest"])
        assert len(artifact.discourse_ids()) == 16
        for discourse_id in artifact.discourse_ids():
            assert set(artifact.scores_for(discourse_id)) == {
                "metaphorical", "literal"}
