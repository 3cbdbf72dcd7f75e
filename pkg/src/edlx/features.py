"""Token-level categorical features and their vocabularies.

Every token contributes four features: its raw 3-character prefix and
suffix, a character-class shape, and a normalized variant (lowercase,
accents stripped, digits folded to '0'). Each feature family has its own
integer vocabulary with id 0 reserved for unknowns.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .document import LineBox

SHAPE_MAX_LEN = 8

FAMILIES = ("prefix", "suffix", "shape", "norm")


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[str]:
    """Whitespace split, then peel leading/trailing punctuation into separate
    tokens. Internal punctuation (dates, dosages) stays attached."""
    tokens: list[str] = []
    for chunk in text.split():
        lead: list[str] = []
        trail: list[str] = []
        start, end = 0, len(chunk)
        while start < end and _is_punct(chunk[start]):
            lead.append(chunk[start])
            start += 1
        while end > start and _is_punct(chunk[end - 1]):
            trail.append(chunk[end - 1])
            end -= 1
        tokens.extend(lead)
        if end > start:
            tokens.append(chunk[start:end])
        tokens.extend(reversed(trail))
    return tokens


def token_shape(token: str) -> str:
    """Character-class sketch: X for upper, x for lower, d for digit, other
    characters kept; truncated to SHAPE_MAX_LEN characters."""
    out = []
    for ch in token[:SHAPE_MAX_LEN]:
        if ch.isupper():
            out.append("X")
        elif ch.islower():
            out.append("x")
        elif ch.isdigit():
            out.append("d")
        else:
            out.append(ch)
    return "".join(out)


def strip_accents(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def normalize_token(token: str) -> str:
    norm = strip_accents(token).lower()
    return "".join("0" if ch.isdigit() else ch for ch in norm)


@dataclass(frozen=True)
class TokenFeatures:
    prefix3: str
    suffix3: str
    shape: str
    norm: str

    @classmethod
    def of(cls, token: str) -> "TokenFeatures":
        return cls(prefix3=token[:3], suffix3=token[-3:], shape=token_shape(token), norm=normalize_token(token))


class Vocab:
    """Four string-to-id maps, one per feature family.

    While building, unseen strings get fresh dense ids starting at 1.
    After freeze(), lookups of unseen strings return UNK (0) and existing
    ids never change.
    """

    UNK = 0

    def __init__(self):
        self._maps: dict[str, dict[str, int]] = {f: {} for f in FAMILIES}
        self.frozen = False

    def id_of(self, family: str, value: str) -> int:
        table = self._maps[family]
        found = table.get(value)
        if found is not None:
            return found
        if self.frozen:
            return self.UNK
        fresh = len(table) + 1
        table[value] = fresh
        return fresh

    def freeze(self) -> "Vocab":
        self.frozen = True
        return self

    def size(self, family: str) -> int:
        # +1 for the reserved UNK row
        return len(self._maps[family]) + 1

    def sizes(self) -> dict[str, int]:
        return {f: self.size(f) for f in FAMILIES}

    def to_json(self) -> dict:
        return {"frozen": self.frozen, "maps": self._maps}

    @classmethod
    def from_json(cls, data: dict) -> "Vocab":
        vocab = cls()
        vocab._maps = {f: dict(data["maps"].get(f, {})) for f in FAMILIES}
        vocab.frozen = bool(data["frozen"])
        return vocab

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocab) and self._maps == other._maps and self.frozen == other.frozen


def featurize_text(text: str, vocab: Vocab) -> list[tuple[int, int, int, int]]:
    ids = []
    for token in tokenize(text):
        feats = TokenFeatures.of(token)
        ids.append(
            (
                vocab.id_of("prefix", feats.prefix3),
                vocab.id_of("suffix", feats.suffix3),
                vocab.id_of("shape", feats.shape),
                vocab.id_of("norm", feats.norm),
            )
        )
    return ids


def featurize_line(line: LineBox, vocab: Vocab) -> list[tuple[int, int, int, int]]:
    """One (prefix, suffix, shape, norm) id tuple per token of the line."""
    return featurize_text(line.text, vocab)


def build_vocab(texts) -> Vocab:
    """Build and freeze a vocabulary over an iterable of line texts."""
    vocab = Vocab()
    for text in texts:
        featurize_text(text, vocab)
    return vocab.freeze()
