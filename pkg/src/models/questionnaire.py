"""
Questionnaire Data Models
The instrument under test: study context, questions, response categories
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple


class SurveyMode(Enum):
    """How the questionnaire is administered"""
    SELF_ADMINISTERED_WEB = "self-administered-web"
    FACE_TO_FACE = "face-to-face"
    TELEPHONE = "telephone"
    PAPER = "paper"
    UNSPECIFIED = "unspecified"

    @property
    def prose(self) -> str:
        """Mode as it reads inside a sentence"""
        return {
            SurveyMode.SELF_ADMINISTERED_WEB: "self-administered web",
            SurveyMode.FACE_TO_FACE: "face-to-face",
            SurveyMode.TELEPHONE: "telephone",
            SurveyMode.PAPER: "paper",
            SurveyMode.UNSPECIFIED: "unspecified",
        }[self]


class QuestionKind(Enum):
    """Answer semantics of a question"""
    CLOSED_FREQUENCY = "closed-frequency"
    CLOSED_AGREEMENT = "closed-agreement"
    OPEN = "open"
    OTHER = "other"

    @property
    def is_closed(self) -> bool:
        return self in (QuestionKind.CLOSED_FREQUENCY, QuestionKind.CLOSED_AGREEMENT)


@dataclass(frozen=True)
class StudyMeta:
    """Study context used by the higher prompt levels"""
    aim: Optional[str] = None
    mode: SurveyMode = SurveyMode.UNSPECIFIED
    population: Optional[str] = None

    def __post_init__(self):
        for name in ('aim', 'population'):
            value = getattr(self, name)
            if value is not None and not value.strip():
                raise ValueError(f"{name} must be non-empty when present")

    def to_dict(self) -> Dict:
        data: Dict = {'mode': self.mode.value}
        if self.aim is not None:
            data['aim'] = self.aim
        if self.population is not None:
            data['population'] = self.population
        return data


@dataclass(frozen=True)
class Question:
    """One survey question with its ordered response categories"""
    id: str
    stem: str
    categories: Tuple[str, ...] = ()
    kind: QuestionKind = QuestionKind.OTHER

    def __post_init__(self):
        if not self.stem.strip():
            raise ValueError(f"Question {self.id}: stem must be non-empty")
        seen = set()
        for label in self.categories:
            key = label.strip().casefold()
            if key in seen:
                raise ValueError(f"Question {self.id}: duplicate category {label!r}")
            seen.add(key)

    def to_dict(self) -> Dict:
        return {
            'id': self.id,
            'stem': self.stem,
            'kind': self.kind.value,
            'categories': list(self.categories),
        }


@dataclass(frozen=True)
class Questionnaire:
    """An instrument: study context plus ordered questions"""
    meta: StudyMeta = field(default_factory=StudyMeta)
    questions: Tuple[Question, ...] = ()

    def __post_init__(self):
        ids = [q.id for q in self.questions]
        if len(ids) != len(set(ids)):
            raise ValueError("Question ids must be unique")

    def get(self, question_id: str) -> Optional[Question]:
        """Find a question by id"""
        return next((q for q in self.questions if q.id == question_id), None)

    def to_dict(self) -> Dict:
        return {
            'meta': self.meta.to_dict(),
            'questions': [q.to_dict() for q in self.questions],
        }


class SpanTarget(Enum):
    """Which text of a question a span points into"""
    STEM = "stem"
    CATEGORY = "category"


@dataclass(frozen=True)
class SourceSpan:
    """Half-open character range [start, end) in a stem or one category label"""
    target: SpanTarget
    start: int
    end: int
    index: Optional[int] = None  # category index when target is CATEGORY

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"Invalid span [{self.start}, {self.end})")
        if (self.target is SpanTarget.CATEGORY) != (self.index is not None):
            raise ValueError("Category spans need an index; stem spans must not have one")

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        if self.target is SpanTarget.STEM:
            return (0, -1, self.start)
        return (1, self.index, self.start)

    def target_text(self, question: Question) -> str:
        """The text this span indexes into"""
        if self.target is SpanTarget.STEM:
            return question.stem
        return question.categories[self.index]

    def fits(self, text: str) -> bool:
        return self.end <= len(text)

    def extract(self, text: str) -> str:
        return text[self.start:self.end]

    def to_dict(self) -> Dict:
        data: Dict = {'target': self.target.value, 'start': self.start, 'end': self.end}
        if self.index is not None:
            data['index'] = self.index
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> 'SourceSpan':
        return cls(
            target=SpanTarget(data['target']),
            start=data['start'],
            end=data['end'],
            index=data.get('index'),
        )


@dataclass(frozen=True)
class StructuralIssue:
    """A structural gap that limits what can be done with the questionnaire"""
    code: str
    message: str
    question_id: Optional[str] = None

    def to_dict(self) -> Dict:
        return {'code': self.code, 'message': self.message, 'question_id': self.question_id}
