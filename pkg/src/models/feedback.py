"""
Feedback Data Models
Structured form of an AI pretest answer: numbered suggestions and an optional revision
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple


class SuggestionKind(Enum):
    """Closed taxonomy of pretest advice"""
    CLARIFY_TERM = "ClarifyTerm"
    ADD_EXAMPLES = "AddExamples"
    REVISE_CATEGORIES = "ReviseCategories"
    MUTUAL_EXCLUSIVITY = "MutualExclusivity"
    ADD_TIMEFRAME = "AddTimeframe"
    SPECIFY_LOCATION = "SpecifyLocation"
    NEUTRAL_TONE = "NeutralTone"
    SIMPLIFY_WORDING = "SimplifyWording"
    ADD_SCALE = "AddScale"
    OTHER = "Other"


@dataclass(frozen=True)
class Suggestion:
    """One piece of advice in source order"""
    index: int
    body: str
    kind: SuggestionKind = SuggestionKind.OTHER
    title: Optional[str] = None
    marker: str = ""  # "1." for numbered items, empty otherwise
    text: str = ""    # the item as it appeared in the response

    def __post_init__(self):
        if not self.body.strip():
            raise ValueError("Suggestion body must be non-empty")

    @property
    def label(self) -> str:
        return self.title or self.body

    def to_dict(self) -> Dict:
        return {
            'index': self.index,
            'title': self.title,
            'body': self.body,
            'kind': self.kind.value,
            'marker': self.marker,
            'text': self.text,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'Suggestion':
        return cls(
            index=data['index'],
            body=data['body'],
            kind=SuggestionKind(data['kind']),
            title=data.get('title'),
            marker=data.get('marker', ''),
            text=data.get('text', ''),
        )


@dataclass(frozen=True)
class PretestFeedback:
    """Parsed AI answer; raw is kept exactly as received"""
    raw: str = ""
    suggestions: Tuple[Suggestion, ...] = ()
    revised_stem: Optional[str] = None
    revised_categories: Optional[Tuple[str, ...]] = None
    preamble: str = ""
    revision_segment: str = ""

    @property
    def kinds(self) -> set:
        return {s.kind for s in self.suggestions}

    def to_dict(self) -> Dict:
        return {
            'raw': self.raw,
            'suggestions': [s.to_dict() for s in self.suggestions],
            'revised_stem': self.revised_stem,
            'revised_categories': (
                list(self.revised_categories) if self.revised_categories is not None else None
            ),
            'preamble': self.preamble,
            'revision_segment': self.revision_segment,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'PretestFeedback':
        categories = data.get('revised_categories')
        return cls(
            raw=data['raw'],
            suggestions=tuple(Suggestion.from_dict(s) for s in data.get('suggestions', [])),
            revised_stem=data.get('revised_stem'),
            revised_categories=tuple(categories) if categories is not None else None,
            preamble=data.get('preamble', ''),
            revision_segment=data.get('revision_segment', ''),
        )
