"""
Text Utilities
Shared tokenizer and sentence splitter for lint rules and revision diffs
"""

import re
from dataclasses import dataclass
from typing import List

# One-to-one character replacements, so offsets in the normalized text
# are valid offsets in the original text.
_CHAR_MAP = str.maketrans({
    "\u2018": "'", "\u2019": "'", "\u201a": "'", "\u2032": "'",
    "\u201c": "\"", "\u201d": "\"", "\u201e": "\"",
    "\u2013": "-", "\u2014": "-", "\u2212": "-",
    "\u00a0": " ",
})

WORD_RE = re.compile(r"[A-Za-z0-9]+(?:['\-][A-Za-z0-9]+)*")
_SENTENCE_END_RE = re.compile(r"[.?!]+(?=[\s\"')\]]|$)")
_ABBREVIATION_RE = re.compile(r"(?:\be\.g|\bi\.e|\betc|\bvs|\bapprox|\bdr|\bmr|\bmrs|\bms)$", re.IGNORECASE)


@dataclass(frozen=True)
class Token:
    """A word token with its character offsets in the source text"""
    text: str  # as written
    norm: str  # case-folded, quotes straightened
    start: int
    end: int


@dataclass(frozen=True)
class Sentence:
    """A sentence span; offsets exclude surrounding whitespace"""
    start: int
    end: int
    text: str

    @property
    def interrogative(self) -> bool:
        return self.text.rstrip().endswith('?')


def normalize(text: str) -> str:
    """Straighten quotes and dashes without changing the text length"""
    return text.translate(_CHAR_MAP)


def tokenize(text: str) -> List[Token]:
    """Split text into word tokens (punctuation separates, never joins)"""
    normalized = normalize(text)
    return [
        Token(text[m.start():m.end()], m.group().lower(), m.start(), m.end())
        for m in WORD_RE.finditer(normalized)
    ]


def normalized_tokens(text: str) -> List[str]:
    """Case-folded, punctuation-free token strings"""
    return [token.norm for token in tokenize(text)]


def split_sentences(text: str) -> List[Sentence]:
    """
    Split text into sentences on terminal punctuation

    "e.g." and similar abbreviations do not end a sentence. Trailing text
    without terminal punctuation forms a final sentence.
    """
    normalized = normalize(text)
    sentences: List[Sentence] = []
    start = 0

    for match in _SENTENCE_END_RE.finditer(normalized):
        if _ABBREVIATION_RE.search(normalized[start:match.start()]):
            continue
        _append_sentence(sentences, text, start, match.end())
        start = match.end()

    _append_sentence(sentences, text, start, len(text))
    return sentences


def tokens_between(tokens: List[Token], start: int, end: int) -> List[Token]:
    """Tokens lying entirely inside [start, end)"""
    return [t for t in tokens if t.start >= start and t.end <= end]


def _append_sentence(sentences: List[Sentence], text: str, start: int, end: int):
    chunk = text[start:end]
    stripped = chunk.strip()
    if not stripped:
        return
    lead = len(chunk) - len(chunk.lstrip())
    s_start = start + lead
    sentences.append(Sentence(s_start, s_start + len(stripped), stripped))
