"""
Response Scale Models
Frequency intervals (occurrences per week) and scale analysis results
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Tuple


@dataclass(frozen=True)
class FrequencyInterval:
    """
    Numeric meaning of one frequency label, in occurrences per week

    hi of None means unbounded above. discrete marks bare day counts
    ("3-4 days") that belong to a count scale rather than a rate scale.
    """
    lo: Fraction
    hi: Optional[Fraction]
    lo_inclusive: bool = True
    hi_inclusive: bool = True
    discrete: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'lo', Fraction(self.lo))
        if self.hi is not None:
            object.__setattr__(self, 'hi', Fraction(self.hi))

        if self.lo < 0:
            raise ValueError("lo must be >= 0")
        if self.hi is None:
            if self.hi_inclusive:
                raise ValueError("An unbounded upper end is never inclusive")
        elif self.lo > self.hi:
            raise ValueError("lo must not exceed hi")
        elif self.lo == self.hi and not (self.lo_inclusive and self.hi_inclusive):
            raise ValueError("A point interval must be closed")

    @classmethod
    def point(cls, value, discrete: bool = False) -> 'FrequencyInterval':
        return cls(Fraction(value), Fraction(value), True, True, discrete)

    @property
    def is_point(self) -> bool:
        return self.hi is not None and self.lo == self.hi

    def contains(self, value: Fraction) -> bool:
        """Whether a single value lies in the interval"""
        above_lo = value > self.lo or (self.lo_inclusive and value == self.lo)
        if self.hi is None:
            return above_lo
        below_hi = value < self.hi or (self.hi_inclusive and value == self.hi)
        return above_lo and below_hi

    def intersection(self, other: 'FrequencyInterval') -> Optional['FrequencyInterval']:
        """Exact intersection, or None when empty"""
        if self.lo > other.lo:
            lo, lo_inclusive = self.lo, self.lo_inclusive
        elif other.lo > self.lo:
            lo, lo_inclusive = other.lo, other.lo_inclusive
        else:
            lo, lo_inclusive = self.lo, self.lo_inclusive and other.lo_inclusive

        if self.hi is None and other.hi is None:
            hi, hi_inclusive = None, False
        elif other.hi is None or (self.hi is not None and self.hi < other.hi):
            hi, hi_inclusive = self.hi, self.hi_inclusive
        elif self.hi is None or other.hi < self.hi:
            hi, hi_inclusive = other.hi, other.hi_inclusive
        else:
            hi, hi_inclusive = self.hi, self.hi_inclusive and other.hi_inclusive

        if hi is not None:
            if lo > hi:
                return None
            if lo == hi and not (lo_inclusive and hi_inclusive):
                return None
        return FrequencyInterval(lo, hi, lo_inclusive, hi_inclusive)

    def intersects(self, other: 'FrequencyInterval') -> bool:
        return self.intersection(other) is not None

    def __str__(self) -> str:
        left = '[' if self.lo_inclusive else '('
        if self.hi is None:
            return f"{left}{self.lo}, inf)"
        right = ']' if self.hi_inclusive else ')'
        return f"{left}{self.lo}, {self.hi}{right}"

    def to_dict(self) -> Dict:
        return {
            'lo': str(self.lo),
            'hi': None if self.hi is None else str(self.hi),
            'lo_inclusive': self.lo_inclusive,
            'hi_inclusive': self.hi_inclusive,
            'discrete': self.discrete,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'FrequencyInterval':
        return cls(
            lo=Fraction(data['lo']),
            hi=None if data['hi'] is None else Fraction(data['hi']),
            lo_inclusive=data['lo_inclusive'],
            hi_inclusive=data['hi_inclusive'],
            discrete=data.get('discrete', False),
        )


# Occurrences per week strictly between never and once a week
SUB_WEEKLY_BAND = FrequencyInterval(Fraction(0), Fraction(1), False, False)

# Integer day counts checked for exhaustiveness
DAY_COUNTS = tuple(range(8))


class ScaleFindingKind(Enum):
    """Problems a response scale can have"""
    OVERLAP = "Overlap"
    INTERIOR_GAP = "InteriorGap"
    TOP_NOT_COVERED = "TopNotCovered"
    BOTTOM_NOT_COVERED = "BottomNotCovered"
    SUB_WEEKLY_GAP = "SubWeeklyGap"
    UNBALANCED = "UnbalancedAgreementScale"
    NOT_PARSABLE = "NotParsable"


@dataclass(frozen=True)
class ScaleFinding:
    """One scale problem with the categories and day counts involved"""
    kind: ScaleFindingKind
    detail: str
    categories: Tuple[int, ...] = ()
    uncovered: Tuple[int, ...] = ()

    def to_dict(self) -> Dict:
        return {
            'kind': self.kind.value,
            'detail': self.detail,
            'categories': list(self.categories),
            'uncovered': list(self.uncovered),
        }


@dataclass(frozen=True)
class ScaleAnalysis:
    """Per-category intervals (None = not parsable) and the findings"""
    intervals: Tuple[Optional[FrequencyInterval], ...] = ()
    findings: Tuple[ScaleFinding, ...] = ()

    @property
    def kinds(self) -> set:
        return {finding.kind for finding in self.findings}

    def to_dict(self) -> Dict:
        return {
            'intervals': [None if i is None else i.to_dict() for i in self.intervals],
            'findings': [f.to_dict() for f in self.findings],
        }
