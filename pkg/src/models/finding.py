"""
Lint Finding Models
Rule identifiers, severities, findings and lint configuration
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Optional, Tuple

from models.feedback import SuggestionKind
from models.questionnaire import SourceSpan


class Severity(Enum):
    """How serious a finding is"""
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"

    @property
    def rank(self) -> int:
        return {Severity.ERROR: 2, Severity.WARNING: 1, Severity.INFO: 0}[self]

    def at_least(self, other: 'Severity') -> bool:
        return self.rank >= other.rank


class RuleId(Enum):
    """Registered lint rules; declaration order is the tie-break order"""
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"
    L5 = "L5"
    L6 = "L6"
    L7 = "L7"
    N1 = "N1"
    N3 = "N3"
    N4 = "N4"
    N5 = "N5"
    N6 = "N6"
    N7 = "N7"
    N8 = "N8"
    N9 = "N9"
    N10 = "N10"
    RTF = "RTF"

    @property
    def title(self) -> str:
        return _RULE_TITLES[self]

    @property
    def order(self) -> int:
        return list(RuleId).index(self)


_RULE_TITLES = {
    RuleId.L1: "LowFrequencyWord",
    RuleId.L2: "VagueRelativeTerm",
    RuleId.L3: "VagueNounPhrase",
    RuleId.L4: "ComplexSyntax",
    RuleId.L5: "ComplexLogicalStructure",
    RuleId.L6: "Nominalization",
    RuleId.L7: "BridgingInference",
    RuleId.N1: "JargonOrAbbreviation",
    RuleId.N3: "EmotionalOrPrestige",
    RuleId.N4: "DoubleBarreled",
    RuleId.N5: "Leading",
    RuleId.N6: "BeyondCapability",
    RuleId.N7: "FalsePremise",
    RuleId.N8: "FutureIntention",
    RuleId.N9: "DoubleNegative",
    RuleId.N10: "CategoryScale",
    RuleId.RTF: "MissingTimeframe",
}


@dataclass(frozen=True)
class Finding:
    """One deterministic lint result"""
    rule_id: RuleId
    severity: Severity
    span: SourceSpan
    message: str
    evidence: str
    hint: Optional[SuggestionKind] = None
    subkind: str = ""  # scale finding kind for N10

    @property
    def sort_key(self):
        return self.span.sort_key + (self.rule_id.order, self.span.end, self.subkind)

    def to_dict(self) -> Dict:
        return {
            'rule_id': self.rule_id.value,
            'rule': self.rule_id.title,
            'severity': self.severity.value,
            'span': self.span.to_dict(),
            'message': self.message,
            'evidence': self.evidence,
            'hint': self.hint.value if self.hint else None,
            'subkind': self.subkind,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'Finding':
        return cls(
            rule_id=RuleId(data['rule_id']),
            severity=Severity(data['severity']),
            span=SourceSpan.from_dict(data['span']),
            message=data['message'],
            evidence=data['evidence'],
            hint=SuggestionKind(data['hint']) if data.get('hint') else None,
            subkind=data.get('subkind', ''),
        )


@dataclass(frozen=True)
class LintConfig:
    """Thresholds, lexicon location and rule switches for one lint run"""
    frequency_rank_threshold: int = 5000
    max_sentence_tokens: int = 30
    min_subordinators: int = 3
    min_coordinators: int = 3
    lexicon_dir: Optional[str] = None
    disabled_rules: FrozenSet[RuleId] = field(default_factory=frozenset)
    strict: bool = False
    month_weeks: int = 4

    def __post_init__(self):
        for name in ('frequency_rank_threshold', 'max_sentence_tokens',
                     'min_subordinators', 'min_coordinators', 'month_weeks'):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        object.__setattr__(self, 'disabled_rules', frozenset(RuleId(r) for r in self.disabled_rules))

    def enabled(self, rule_id: RuleId) -> bool:
        return rule_id not in self.disabled_rules

    @classmethod
    def from_settings(cls, lint: Dict, scale: Optional[Dict] = None) -> 'LintConfig':
        """Build from the 'lint' (and 'scale') config sections"""
        scale = scale or {}
        return cls(
            frequency_rank_threshold=lint.get('frequency_rank_threshold', 5000),
            max_sentence_tokens=lint.get('max_sentence_tokens', 30),
            min_subordinators=lint.get('min_subordinators', 3),
            min_coordinators=lint.get('min_coordinators', 3),
            lexicon_dir=lint.get('lexicon_dir'),
            disabled_rules=frozenset(lint.get('disabled_rules', [])),
            strict=lint.get('strict', False),
            month_weeks=scale.get('month_weeks', 4),
        )


@dataclass(frozen=True)
class SentenceComplexity:
    """Token, subordinator and coordinator counts of one sentence"""
    start: int
    end: int
    tokens: int
    subordinators: int
    coordinators: int

    def to_dict(self) -> Dict:
        return {
            'start': self.start,
            'end': self.end,
            'tokens': self.tokens,
            'subordinators': self.subordinators,
            'coordinators': self.coordinators,
        }


@dataclass(frozen=True)
class ComplexityProfile:
    """Per-sentence complexity counts of a stem"""
    sentences: Tuple[SentenceComplexity, ...] = ()

    @property
    def total_tokens(self) -> int:
        return sum(s.tokens for s in self.sentences)

    def to_dict(self) -> Dict:
        return {'sentences': [s.to_dict() for s in self.sentences]}
