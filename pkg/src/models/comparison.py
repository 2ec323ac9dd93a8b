"""
Comparison Data Models
Token edits between question versions, proposal agreement and the judgment queue
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

from models.feedback import Suggestion, SuggestionKind
from models.finding import Finding


class EditKind(Enum):
    REPLACE = "Replace"
    INSERT = "Insert"
    DELETE = "Delete"


class EditSemantic(Enum):
    """What an edit does to the question"""
    TERM_REPLACEMENT = "TermReplacement"
    TIMEFRAME_CHANGE = "TimeframeChange"
    EXEMPLIFICATION_ADDED = "ExemplificationAdded"
    CATEGORY_CHANGE = "CategoryChange"
    REWORDING = "Rewording"


class JudgmentStatus(Enum):
    """Triage outcome of an AI suggestion or a lint finding"""
    CONFIRMED_BY_LINT = "ConfirmedByLint"
    UNSUPPORTED_BY_LINT = "UnsupportedByLint"
    MISSED_BY_AI = "MissedByAI"

    @property
    def needs_judgment(self) -> bool:
        return self is not JudgmentStatus.CONFIRMED_BY_LINT


@dataclass(frozen=True)
class EditOp:
    """
    One merged run of non-matching tokens

    Token ranges are half-open; an insertion is the empty range at old_start.
    old_span is the character range of the old tokens in the original text.
    """
    kind: EditKind
    old_start: int
    old_end: int
    new_start: int
    new_end: int
    old_tokens: Tuple[str, ...]
    new_tokens: Tuple[str, ...]
    old_span: Tuple[int, int]
    semantic: EditSemantic = EditSemantic.REWORDING

    def __post_init__(self):
        if self.kind is EditKind.REPLACE and not (self.old_tokens and self.new_tokens):
            raise ValueError("Replace needs old and new tokens")
        if self.kind is EditKind.INSERT and (self.old_tokens or not self.new_tokens):
            raise ValueError("Insert has new tokens only")
        if self.kind is EditKind.DELETE and (self.new_tokens or not self.old_tokens):
            raise ValueError("Delete has old tokens only")

    def overlaps(self, other: 'EditOp') -> bool:
        """Old-side overlap; insertion points touch the ranges around them"""
        a0, a1, b0, b1 = self.old_start, self.old_end, other.old_start, other.old_end
        if a0 == a1 and b0 == b1:
            return a0 == b0
        if a0 == a1:
            return b0 <= a0 <= b1
        if b0 == b1:
            return a0 <= b0 <= a1
        return a0 < b1 and b0 < a1

    def describe(self) -> str:
        old = " ".join(self.old_tokens) or "∅"
        new = " ".join(self.new_tokens) or "∅"
        return f"{old} → {new}"

    def to_dict(self) -> Dict:
        return {
            'kind': self.kind.value,
            'old_start': self.old_start,
            'old_end': self.old_end,
            'new_start': self.new_start,
            'new_end': self.new_end,
            'old_tokens': list(self.old_tokens),
            'new_tokens': list(self.new_tokens),
            'old_span': list(self.old_span),
            'semantic': self.semantic.value,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'EditOp':
        return cls(
            kind=EditKind(data['kind']),
            old_start=data['old_start'],
            old_end=data['old_end'],
            new_start=data['new_start'],
            new_end=data['new_end'],
            old_tokens=tuple(data['old_tokens']),
            new_tokens=tuple(data['new_tokens']),
            old_span=tuple(data['old_span']),
            semantic=EditSemantic(data['semantic']),
        )


@dataclass(frozen=True)
class RevisionDiff:
    """Edits turning the original token sequence into the revised one"""
    original: str
    revised: str
    original_tokens: Tuple[str, ...]
    revised_tokens: Tuple[str, ...]
    edits: Tuple[EditOp, ...] = ()

    @property
    def semantics(self) -> set:
        return {edit.semantic for edit in self.edits}

    def to_dict(self) -> Dict:
        return {
            'original': self.original,
            'revised': self.revised,
            'original_tokens': list(self.original_tokens),
            'revised_tokens': list(self.revised_tokens),
            'edits': [edit.to_dict() for edit in self.edits],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'RevisionDiff':
        return cls(
            original=data['original'],
            revised=data['revised'],
            original_tokens=tuple(data['original_tokens']),
            revised_tokens=tuple(data['revised_tokens']),
            edits=tuple(EditOp.from_dict(e) for e in data.get('edits', [])),
        )


@dataclass(frozen=True)
class AgreementReport:
    """AI and expert edits of the same original, paired where they agree"""
    ai_diff: RevisionDiff
    expert_diff: RevisionDiff
    shared: Tuple[Tuple[EditOp, EditOp], ...] = ()  # (ai edit, expert edit)
    ai_only: Tuple[EditOp, ...] = ()
    expert_only: Tuple[EditOp, ...] = ()

    def to_dict(self) -> Dict:
        return {
            'ai_diff': self.ai_diff.to_dict(),
            'expert_diff': self.expert_diff.to_dict(),
            'shared': [{'ai': ai.to_dict(), 'expert': ex.to_dict()} for ai, ex in self.shared],
            'ai_only': [e.to_dict() for e in self.ai_only],
            'expert_only': [e.to_dict() for e in self.expert_only],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'AgreementReport':
        return cls(
            ai_diff=RevisionDiff.from_dict(data['ai_diff']),
            expert_diff=RevisionDiff.from_dict(data['expert_diff']),
            shared=tuple(
                (EditOp.from_dict(p['ai']), EditOp.from_dict(p['expert'])) for p in data.get('shared', [])
            ),
            ai_only=tuple(EditOp.from_dict(e) for e in data.get('ai_only', [])),
            expert_only=tuple(EditOp.from_dict(e) for e in data.get('expert_only', [])),
        )


@dataclass(frozen=True)
class JudgmentItem:
    """A triage entry pairing AI advice with deterministic evidence (or its absence)"""
    status: JudgmentStatus
    kind: Optional[SuggestionKind]
    suggestions: Tuple[Suggestion, ...] = ()
    findings: Tuple[Finding, ...] = ()
    note: str = ""

    def __post_init__(self):
        if self.status is JudgmentStatus.CONFIRMED_BY_LINT and not (self.suggestions and self.findings):
            raise ValueError("ConfirmedByLint needs a suggestion and a finding")
        if self.status is JudgmentStatus.UNSUPPORTED_BY_LINT and not self.suggestions:
            raise ValueError("UnsupportedByLint needs a suggestion")
        if self.status is JudgmentStatus.MISSED_BY_AI and not self.findings:
            raise ValueError("MissedByAI needs a finding")

    def to_dict(self) -> Dict:
        return {
            'status': self.status.value,
            'kind': self.kind.value if self.kind else None,
            'suggestions': [s.to_dict() for s in self.suggestions],
            'findings': [f.to_dict() for f in self.findings],
            'note': self.note,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'JudgmentItem':
        return cls(
            status=JudgmentStatus(data['status']),
            kind=SuggestionKind(data['kind']) if data.get('kind') else None,
            suggestions=tuple(Suggestion.from_dict(s) for s in data.get('suggestions', [])),
            findings=tuple(Finding.from_dict(f) for f in data.get('findings', [])),
            note=data.get('note', ''),
        )
