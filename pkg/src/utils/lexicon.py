"""
Lexicon Loading
Plain-text word lists (one entry per line, '#' starts a comment line), plus
the word-frequency ranking and stopwords taken from NLTK corpora
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from types import MappingProxyType
from typing import FrozenSet, List, Mapping, Optional, Tuple, Union

import nltk
from nltk.corpus import brown, stopwords
from nltk.probability import FreqDist

from utils.config import PROJECT_ROOT

logger = logging.getLogger(__name__)

DEFAULT_LEXICON_DIR = PROJECT_ROOT / "config" / "lexicons"

# A word_frequency.txt in the lexicon directory replaces the corpus ranking
FREQUENCY_FILE = "word_frequency.txt"
FREQUENCY_CORPUS = "brown"
STOPWORD_LANGUAGE = "english"

PathLike = Union[str, Path]


class LexiconUnavailable(FileNotFoundError):
    """A configured lexicon file is missing or unreadable"""

    def __init__(self, path: PathLike):
        super().__init__(f"Lexicon unavailable: {path}")
        self.path = str(path)


def read_entries(path: PathLike) -> List[str]:
    """Read non-empty, non-comment lines (stripped) in file order"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.read().splitlines()
    except OSError as e:
        logger.error(f"Cannot read lexicon {path}: {e}")
        raise LexiconUnavailable(path) from e

    return [
        line.strip() for line in lines
        if line.strip() and not line.lstrip().startswith('#')
    ]


def read_pairs(path: PathLike, separator: str) -> List[Tuple[str, str]]:
    """Read 'key <separator> value' entries, split on the first separator"""
    pairs = []
    for entry in read_entries(path):
        key, sep, value = entry.partition(separator)
        if not sep:
            logger.warning(f"Ignoring malformed entry in {path}: {entry!r}")
            continue
        pairs.append((key.strip(), value.strip()))
    return pairs


def ensure_nltk_data(package: str, resource: str):
    """Make an NLTK data package available, downloading it on first use"""
    try:
        nltk.data.find(resource)
        return
    except LookupError:
        pass

    logger.info(f"Downloading NLTK data package '{package}'")
    try:
        downloaded = nltk.download(package, quiet=True)
    except (OSError, ValueError) as e:
        logger.error(f"NLTK download of '{package}' failed: {e}")
        downloaded = False
    if not downloaded:
        raise LexiconUnavailable(f"nltk:{package}")


@lru_cache(maxsize=1)
def corpus_word_ranks() -> Mapping[str, int]:
    """
    Rank every alphabetic word of the reference corpus by frequency

    Case is folded; ties are broken alphabetically so the ranking is stable.
    """
    ensure_nltk_data(FREQUENCY_CORPUS, f"corpora/{FREQUENCY_CORPUS}")
    distribution = FreqDist(word.lower() for word in brown.words() if word.isalpha())
    ordered = sorted(distribution.items(), key=lambda item: (-item[1], item[0]))
    logger.info(f"Ranked {len(ordered)} words from the {FREQUENCY_CORPUS} corpus")
    return MappingProxyType({word: rank for rank, (word, _) in enumerate(ordered, start=1)})


@lru_cache(maxsize=2)
def stopword_set(language: str = STOPWORD_LANGUAGE) -> FrozenSet[str]:
    """NLTK stopwords for a language, lower-cased"""
    ensure_nltk_data("stopwords", "corpora/stopwords")
    return frozenset(word.lower() for word in stopwords.words(language))


def resolve_lexicon_dir(directory: Optional[PathLike]) -> Path:
    """Resolve a configured lexicon directory (None means the bundled one)"""
    return Path(directory).resolve() if directory else DEFAULT_LEXICON_DIR


@dataclass(frozen=True)
class LexiconSet:
    """Immutable bundle of the word lists the lint rules consult"""
    word_ranks: Mapping[str, int]
    frequency_source: str
    function_words: FrozenSet[str]
    vague_terms: FrozenSet[str]
    broad_nouns: FrozenSet[str]
    subordinators: FrozenSet[str]
    nominalization_suffixes: Tuple[str, ...]
    nominalization_exceptions: FrozenSet[str]
    leading_phrases: Tuple[str, ...]
    emotional_terms: Tuple[str, ...]
    negations: FrozenSet[str]
    intention_phrases: Tuple[str, ...]

    @classmethod
    def load(cls, directory: Optional[PathLike] = None) -> 'LexiconSet':
        """Load (and cache) the lexicon set found in a directory"""
        return _load_lexicon_set(str(resolve_lexicon_dir(directory)))


@lru_cache(maxsize=8)
def _load_lexicon_set(directory: str) -> LexiconSet:
    base = Path(directory)

    def words(name: str) -> FrozenSet[str]:
        return frozenset(entry.lower() for entry in read_entries(base / name))

    def phrases(name: str) -> Tuple[str, ...]:
        # Longest first so multi-word phrases win over their prefixes
        entries = {entry.lower() for entry in read_entries(base / name)}
        return tuple(sorted(entries, key=lambda e: (-len(e), e)))

    lists = dict(
        function_words=words("function_words.txt"),
        vague_terms=words("vague_terms.txt"),
        broad_nouns=words("broad_nouns.txt"),
        subordinators=words("subordinators.txt"),
        nominalization_suffixes=phrases("nominalization_suffixes.txt"),
        nominalization_exceptions=words("nominalization_exceptions.txt"),
        leading_phrases=phrases("leading_phrases.txt"),
        emotional_terms=phrases("emotional_terms.txt"),
        negations=words("negations.txt"),
        intention_phrases=phrases("intention_phrases.txt"),
    )

    frequency_file = base / FREQUENCY_FILE
    if frequency_file.exists():
        ranks = {}
        for rank, word in enumerate(read_entries(frequency_file), start=1):
            ranks.setdefault(word.lower(), rank)
        word_ranks, source = MappingProxyType(ranks), str(frequency_file)
    else:
        word_ranks, source = corpus_word_ranks(), f"nltk:{FREQUENCY_CORPUS}"

    # The file lists closed-class words the NLTK stopword list leaves out
    lists["function_words"] = lists["function_words"] | stopword_set()

    lexicons = LexiconSet(word_ranks=word_ranks, frequency_source=source, **lists)
    logger.info(f"Lexicons loaded from {base} ({len(word_ranks)} ranked words from {source})")
    return lexicons
