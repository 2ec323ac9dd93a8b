"""
Feedback Parser Service
Splits AI pretest answers into classified suggestions and extracts revisions
"""

import logging
import re
from functools import lru_cache
from typing import List, Optional, Tuple

from models.feedback import PretestFeedback, Suggestion, SuggestionKind
from utils.lexicon import PathLike, read_pairs, resolve_lexicon_dir
from utils.text import normalize

logger = logging.getLogger(__name__)

MAX_TITLE_WORDS = 8
PROPOSAL_PLACEHOLDER = "[proposal]"

# "N." at the start of a line or right after a sentence end
_NUMBERED_RE = re.compile(r"(?:^|(?<=[.!?:\"')]\s))[ \t]*(\d{1,2})\.[ \t]+", re.MULTILINE)

_REVISION_LABEL_RE = re.compile(r"\b(?:improved version|revised version|revised question)\s*:", re.IGNORECASE)
_HERES_REVISION_RE = re.compile(
    r"here(?:'s| is) a revised version[^\n\"\[]*?(?:\"[^\"\n]*\?\"|\[proposal\])",
    re.IGNORECASE,
)
_TRAILING_QUOTE_RE = re.compile(r"\"[^\"\n]*\?\"\s*$")

_BULLET_LINE_RE = re.compile(r"^[ \t]*[-\u2022*][ \t]+(.+?)[ \t]*$", re.MULTILINE)
_INLINE_BULLETS_RE = re.compile(r"(?<=[:?.])\s+-\s+(?=\S)")
_BULLET_SPLIT_RE = re.compile(r"\s+[-\u2013\u2014]\s+")

_QUOTES = "\"'\u201c\u201d\u2018\u2019"


@lru_cache(maxsize=8)
def _load_keyword_families(directory: Optional[str]) -> Tuple[Tuple[SuggestionKind, re.Pattern], ...]:
    path = resolve_lexicon_dir(directory) / "feedback_keywords.txt"
    families = []
    for name, pattern in read_pairs(path, '='):
        try:
            families.append((SuggestionKind(name), re.compile(pattern)))
        except ValueError as e:
            logger.warning(f"Ignoring keyword family {name!r} in {path}: {e}")
    logger.info(f"Loaded {len(families)} keyword families from {path}")
    return tuple(families)


def classify_suggestion(title: Optional[str], body: str,
                        lexicon_dir: Optional[PathLike] = None) -> SuggestionKind:
    """
    Assign a suggestion kind by the first matching keyword family

    Args:
        title: Optional heading of the item
        body: Item text
        lexicon_dir: Directory holding feedback_keywords.txt (bundled when None)

    Returns:
        The kind of the first family matching title and body, else Other
    """
    text = normalize(f"{title or ''} {body}").lower()
    for kind, pattern in _load_keyword_families(str(lexicon_dir) if lexicon_dir else None):
        if pattern.search(text):
            return kind
    return SuggestionKind.OTHER


def parse_feedback(raw: str, lexicon_dir: Optional[PathLike] = None) -> PretestFeedback:
    """
    Parse an AI answer into suggestions and an optional revision

    Args:
        raw: Response text exactly as returned by the model
        lexicon_dir: Directory holding feedback_keywords.txt (bundled when None)

    Returns:
        PretestFeedback; raw is kept unmodified
    """
    if not raw.strip():
        return PretestFeedback(raw=raw)

    body, segment, revised_stem, revision_bullets = _extract_revision(raw)
    preamble, items = _split_items(body)

    suggestions: List[Suggestion] = []
    for index, (marker, text) in enumerate(items, start=1):
        title, item_body = _split_title(text[len(marker):].strip() if marker else text.strip(), bool(marker))
        kind = classify_suggestion(title, item_body, lexicon_dir)
        suggestions.append(Suggestion(index, item_body, kind, title, marker.strip(), text))

    if not suggestions:
        fallback = revised_stem or segment.strip() or raw.strip()
        suggestions.append(Suggestion(1, fallback, classify_suggestion(None, fallback, lexicon_dir)))

    revised_categories = revision_bullets or _categories_from_suggestions(suggestions)

    feedback = PretestFeedback(
        raw=raw,
        suggestions=tuple(suggestions),
        revised_stem=revised_stem,
        revised_categories=revised_categories,
        preamble=preamble,
        revision_segment=segment,
    )
    logger.debug(
        f"Parsed feedback: {len(suggestions)} suggestions, "
        f"revised stem {'present' if revised_stem else 'absent'}"
    )
    return feedback


def _extract_revision(raw: str) -> Tuple[str, str, Optional[str], Optional[Tuple[str, ...]]]:
    """Return (remaining body, revision segment, revised stem, revised bullets)"""
    normalized = normalize(raw)

    label = _REVISION_LABEL_RE.search(normalized)
    if label:
        lead, bullets = _split_bullets(raw[label.end():])
        stem = re.split(r"\n\s*\n", lead.strip(), maxsplit=1)[0]
        return raw[:label.start()], raw[label.start():], _clean_stem(stem), bullets

    for pattern in (_HERES_REVISION_RE, _TRAILING_QUOTE_RE):
        match = pattern.search(normalized)
        if match:
            quoted = re.search(r"\"([^\"\n]*\?)\"", normalized[match.start():match.end()])
            stem = quoted.group(1) if quoted else None
            if stem is not None:
                offset = match.start() + quoted.start(1)
                stem = raw[offset:offset + len(stem)]
            rest = raw[:match.start()] + raw[match.end():]
            return rest, raw[match.start():match.end()], _clean_stem(stem), None

    return raw, "", None, None


def _split_items(body: str) -> Tuple[str, List[Tuple[str, str]]]:
    """Split on sequential 'N.' markers; returns (preamble, [(marker, item text)])"""
    starts = []
    expected = 1
    for match in _NUMBERED_RE.finditer(normalize(body)):
        if int(match.group(1)) == expected:
            starts.append(match)
            expected += 1

    if not starts:
        return "", ([("", body)] if body.strip() else [])

    items = []
    for i, match in enumerate(starts):
        end = starts[i + 1].start() if i + 1 < len(starts) else len(body)
        text = body[match.start():end]
        marker = text[:match.end() - match.start()]
        items.append((marker, text))
    return body[:starts[0].start()], items


def _split_title(content: str, numbered: bool) -> Tuple[Optional[str], str]:
    if not numbered:
        return None, content
    first_line = content.split('\n', 1)[0]
    colon = first_line.find(':')
    if colon <= 0:
        return None, content
    title = first_line[:colon].strip()
    if len(title.split()) > MAX_TITLE_WORDS:
        return None, content
    rest = content[colon + 1:].strip()
    return title, rest or title


def _split_bullets(text: str) -> Tuple[str, Optional[Tuple[str, ...]]]:
    """Separate a lead text from a dash-bulleted list (one per line or inline)"""
    normalized = normalize(text)
    lines = list(_BULLET_LINE_RE.finditer(normalized))
    if lines:
        lead = text[:lines[0].start()]
        bullets = tuple(_clean_label(text[m.start(1):m.end(1)]) for m in lines)
        return lead, tuple(b for b in bullets if b) or None

    inline = _INLINE_BULLETS_RE.search(normalized)
    if inline:
        lead = text[:inline.start()]
        parts = _BULLET_SPLIT_RE.split(text[inline.end():].strip())
        bullets = tuple(b for b in (_clean_label(p) for p in parts) if b)
        return lead, bullets or None

    return text, None


def _categories_from_suggestions(suggestions: List[Suggestion]) -> Optional[Tuple[str, ...]]:
    for suggestion in suggestions:
        if suggestion.kind is not SuggestionKind.REVISE_CATEGORIES:
            continue
        _, bullets = _split_bullets(suggestion.body)
        if bullets:
            return bullets
    return None


def _clean_label(text: str) -> str:
    return text.strip().rstrip('.,;').strip()


def _clean_stem(text: Optional[str]) -> Optional[str]:
    if text is None:
        return None
    stem = " ".join(text.split()).strip(_QUOTES + " ")
    if not stem or stem.lower() == PROPOSAL_PLACEHOLDER:
        return None
    return stem
