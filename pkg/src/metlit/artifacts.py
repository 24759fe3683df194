"""Provider artifacts: contextual embeddings and cloze log-probabilities.

Both artifact files are JSON lines with the provider manifest as the first
line.  The manifest pins the producing model (name, version, layer, pooling,
context mode) and carries a digest of the corpus file it was computed from;
artifacts whose digest disagrees with the corpus being processed are
rejected.
"""

import hashlib
import json
import math
from dataclasses import dataclass

from .corpus import LITERAL, METAPHORICAL
from .errors import InputError

COMPONENT_ROLES = ("verb", "argument")


def sha256_file(path):
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return "sha256:" + digest.hexdigest()


@dataclass(frozen=True)
class Manifest:
    model: str
    version: str
    layer: str
    pooling: str
    context_mode: str
    created_at: str
    corpus_digest: str
    dim: int | None = None  # embedding artifacts declare their dimension


@dataclass(frozen=True)
class ClozeScore:
    discourse_id: str
    candidate: str
    logprob: float
    n_subtokens: int

    def __post_init__(self):
        if self.candidate not in (METAPHORICAL, LITERAL):
            raise ValueError(f"candidate must be metaphorical or literal: "
                             f"{self.candidate!r}")
        if not math.isfinite(self.logprob):
            raise ValueError(
                f"{self.discourse_id}/{self.candidate}: logprob must be finite")
        if self.n_subtokens < 1:
            raise ValueError(
                f"{self.discourse_id}/{self.candidate}: n_subtokens must be >= 1")


def _parse_manifest(obj, path, needs_dim):
    try:
        manifest = Manifest(
            model=str(obj["model"]),
            version=str(obj["version"]),
            layer=str(obj.get("layer", "")),
            pooling=str(obj.get("pooling", "")),
            context_mode=str(obj.get("context_mode", "")),
            created_at=str(obj.get("created_at", "")),
            corpus_digest=str(obj["corpus_digest"]),
            dim=int(obj["dim"]) if "dim" in obj else None,
        )
    except KeyError as exc:
        raise InputError(f"manifest missing field {exc.args[0]}", path, 1) from None
    if needs_dim:
        if manifest.dim is None or manifest.dim <= 0:
            raise InputError("embedding manifest must declare dim > 0", path, 1)
    return manifest


def _check_digest(manifest, corpus_digest, path):
    if corpus_digest is not None and manifest.corpus_digest != corpus_digest:
        raise InputError(
            f"artifact was built for corpus {manifest.corpus_digest}, "
            f"but the loaded corpus has digest {corpus_digest}", path, 1)


def _read_jsonl(path):
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield line_no, json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed JSON ({exc.msg})", path, line_no) from None


def _parse_vector(raw, dim, path, line_no):
    if not isinstance(raw, list) or not raw:
        raise InputError("vector must be a non-empty list", path, line_no)
    vector = tuple(float(x) for x in raw)
    if len(vector) != dim:
        raise InputError(
            f"vector dimension {len(vector)} != manifest dim {dim}", path, line_no)
    if not all(math.isfinite(x) for x in vector):
        raise InputError("vector has non-finite entries", path, line_no)
    if all(x == 0.0 for x in vector):
        raise InputError("vector has zero norm", path, line_no)
    return vector


class EmbeddingArtifact:
    """Per-discourse context-token vectors and expression-component vectors."""

    def __init__(self, manifest, context, components):
        self.manifest = manifest
        self._context = context        # (discourse_id, sentence, token) -> vector
        self._components = components  # (discourse_id, variant) -> {role: vector}

    def context_vector(self, discourse_id, sentence, token):
        return self._context.get((discourse_id, sentence, token))

    def component_vectors(self, discourse_id, variant):
        """The (verb, argument) vectors of one variant, or None if absent."""
        roles = self._components.get((discourse_id, variant))
        if roles is None or set(roles) != set(COMPONENT_ROLES):
            return None
        return tuple(roles[role] for role in COMPONENT_ROLES)

    def discourse_ids(self):
        ids = {key[0] for key in self._context}
        ids.update(key[0] for key in self._components)
        return ids


def load_embeddings(path, corpus_digest=None):
    """Load an embedding artifact, validating dimensions, norms, and digest."""
    rows = _read_jsonl(path)
    try:
        line_no, manifest_obj = next(rows)
    except StopIteration:
        raise InputError("empty artifact, expected a manifest line", path) from None
    manifest = _parse_manifest(manifest_obj, path, needs_dim=True)
    _check_digest(manifest, corpus_digest, path)
    context = {}
    components = {}
    for line_no, obj in rows:
        try:
            discourse_id = str(obj["discourse_id"])
            ref = obj["ref"]
            kind = ref["kind"]
        except (KeyError, TypeError):
            raise InputError("record needs discourse_id and ref.kind", path, line_no) from None
        vector = _parse_vector(obj.get("vector"), manifest.dim, path, line_no)
        if kind == "context":
            try:
                key = (discourse_id, int(ref["sentence"]), int(ref["token"]))
            except (KeyError, ValueError):
                raise InputError("context ref needs sentence and token", path, line_no) from None
            if key in context:
                raise InputError(
                    f"duplicate context vector for {key}", path, line_no)
            context[key] = vector
        elif kind == "component":
            role = ref.get("role")
            variant = ref.get("variant")
            if role not in COMPONENT_ROLES or variant not in (METAPHORICAL, LITERAL):
                raise InputError(
                    "component ref needs role in {verb, argument} and "
                    "variant in {metaphorical, literal}", path, line_no)
            roles = components.setdefault((discourse_id, variant), {})
            if role in roles:
                raise InputError(
                    f"duplicate {variant} {role} vector for {discourse_id}",
                    path, line_no)
            roles[role] = vector
        else:
            raise InputError(f"unknown ref kind {kind!r}", path, line_no)
    return EmbeddingArtifact(manifest, context, components)


class ClozeArtifact:
    """Per-discourse, per-candidate masked log-probability records."""

    def __init__(self, manifest, scores):
        self.manifest = manifest
        self._scores = scores  # discourse_id -> {candidate: ClozeScore}

    def scores_for(self, discourse_id):
        return self._scores.get(discourse_id)

    def discourse_ids(self):
        return set(self._scores)


def load_cloze(path, corpus_digest=None):
    """Load a cloze artifact: exactly one record per (discourse, candidate)."""
    rows = _read_jsonl(path)
    try:
        line_no, manifest_obj = next(rows)
    except StopIteration:
        raise InputError("empty artifact, expected a manifest line", path) from None
    manifest = _parse_manifest(manifest_obj, path, needs_dim=False)
    _check_digest(manifest, corpus_digest, path)
    scores = {}
    for line_no, obj in rows:
        try:
            record = ClozeScore(
                discourse_id=str(obj["discourse_id"]),
                candidate=str(obj["candidate"]),
                logprob=float(obj["logprob"]),
                n_subtokens=int(obj["n_subtokens"]),
            )
        except KeyError as exc:
            raise InputError(f"record missing field {exc.args[0]}", path, line_no) from None
        except (ValueError, TypeError) as exc:
            raise InputError(str(exc), path, line_no) from None
        per_discourse = scores.setdefault(record.discourse_id, {})
        if record.candidate in per_discourse:
            raise InputError(
                f"duplicate cloze record for {record.discourse_id}/"
                f"{record.candidate}", path, line_no)
        per_discourse[record.candidate] = record
    return ClozeArtifact(manifest, scores)
