"""
Scale Analyzer Service
Parses frequency labels into intervals and checks response scales for
overlap, gaps, non-exhaustiveness and agreement imbalance
"""

import logging
import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

from models.questionnaire import QuestionKind
from models.scale import (
    DAY_COUNTS, SUB_WEEKLY_BAND, FrequencyInterval, ScaleAnalysis, ScaleFinding, ScaleFindingKind
)
from utils.lexicon import PathLike, read_pairs, resolve_lexicon_dir
from utils.text import normalize

logger = logging.getLogger(__name__)

_NUMBER_WORDS = {
    'zero': 0, 'one': 1, 'two': 2, 'three': 3, 'four': 4, 'five': 5,
    'six': 6, 'seven': 7, 'eight': 8, 'nine': 9, 'ten': 10,
    'once': 1, 'twice': 2,
}
_NUM = r"\d+|zero|one|two|three|four|five|six|seven|eight|nine|ten|once|twice"

_LABEL_RE = re.compile(
    r"^(?:(?P<less>less than)|(?P<more>more than)|(?P<least>at least)\s)?\s*"
    rf"(?P<a>{_NUM})(?:\s*(?:-|to)\s*(?P<b>{_NUM}))?\s*"
    r"(?P<plus>\+|or more)?\s*"
    r"(?P<unit>days?|times?)?\s*"
    r"(?:(?:a|per|each|every)\s+(?P<period>week|month))?$"
)
_ENUMERATOR_RE = re.compile(r"^\(?\d+[.)]\s+")

# Rate patterns are recognized only in these units
_ALLOWED_WITHOUT_UNIT = {'once', 'twice'}

Polarity = str  # 'positive' | 'negative' | 'neutral'
_POLARITY_ORDER = ('neutral', 'negative', 'positive')


def _canonical_label(label: str) -> str:
    text = normalize(label).lower().strip()
    text = _ENUMERATOR_RE.sub('', text)
    text = text.rstrip('.;,')
    return re.sub(r"\s+", " ", text)


class ScaleAnalyzer:
    """
    Numeric reading of response scales

    Frequency labels become intervals of occurrences per week; a month is
    month_weeks weeks. Agreement scales are checked for polarity balance.
    """

    def __init__(self, month_weeks: int = 4, lexicon_dir: Optional[PathLike] = None):
        """
        Initialize scale analyzer

        Args:
            month_weeks: Weeks per month used to normalize monthly rates
            lexicon_dir: Directory holding frequency_terms.txt and agreement_polarity.txt
        """
        if month_weeks <= 0:
            raise ValueError("month_weeks must be positive")
        self.month_weeks = month_weeks
        self.point_terms, self.polarity_terms = _load_scale_lexicons(str(resolve_lexicon_dir(lexicon_dir)))

    def parse_category_interval(self, label: str) -> Optional[FrequencyInterval]:
        """
        Map a category label to a frequency interval

        Args:
            label: Category text such as "1-2 days a week"

        Returns:
            FrequencyInterval, or None when the label is not recognized
        """
        text = _canonical_label(label)
        if not text:
            return None

        if text in self.point_terms:
            return FrequencyInterval.point(self.point_terms[text])

        match = _LABEL_RE.match(text)
        if not match:
            return None

        a_word, b_word = match.group('a'), match.group('b')
        unit, period = match.group('unit'), match.group('period')
        if unit is None and a_word not in _ALLOWED_WITHOUT_UNIT:
            return None
        if a_word in _ALLOWED_WITHOUT_UNIT and (unit is not None or b_word is not None):
            return None
        if period is None and (unit is None or not unit.startswith('day')):
            return None

        discrete = period is None
        per = 1 if period in (None, 'week') else self.month_weeks
        a = Fraction(_number(a_word), per)
        b = Fraction(_number(b_word), per) if b_word else None
        open_high = match.group('plus') or match.group('least')

        if match.group('less'):
            # Open at both ends: "less than once a month" is (0, 1/4), not (0, 1/4],
            # so it stays disjoint from "1-3 times a month" (see DESIGN.md, open questions)
            if b is not None or open_high or a == 0:
                return None
            return FrequencyInterval(Fraction(0), a, False, False, discrete)
        if match.group('more'):
            if b is not None or open_high:
                return None
            return FrequencyInterval(a, None, False, False, discrete)
        if open_high:
            if b is not None:
                return None
            return FrequencyInterval(a, None, True, False, discrete)
        if b is not None:
            if b <= a:
                return None
            return FrequencyInterval(a, b, True, True, discrete)
        return FrequencyInterval.point(a, discrete)

    def label_polarity(self, label: str) -> Optional[Polarity]:
        """Polarity of an agreement label; neutral wins over negative over positive"""
        text = _canonical_label(label)
        for polarity in _POLARITY_ORDER:
            for term in self.polarity_terms.get(polarity, ()):
                if re.search(rf"\b{re.escape(term)}\b", text):
                    return polarity
        return None

    def analyze_scale(self, labels: Sequence[str], kind: QuestionKind) -> ScaleAnalysis:
        """
        Check an ordered list of category labels

        Args:
            labels: Category texts in presentation order
            kind: Question kind deciding frequency or agreement semantics

        Returns:
            ScaleAnalysis; problems are findings, never exceptions
        """
        if kind is QuestionKind.CLOSED_FREQUENCY:
            return self._analyze_frequency(labels)
        if kind is QuestionKind.CLOSED_AGREEMENT:
            return ScaleAnalysis(findings=tuple(self._check_balance(labels)))
        return ScaleAnalysis()

    def _analyze_frequency(self, labels: Sequence[str]) -> ScaleAnalysis:
        intervals = tuple(self.parse_category_interval(label) for label in labels)
        unparsable = tuple(i for i, interval in enumerate(intervals) if interval is None)

        if not labels:
            return ScaleAnalysis(intervals=intervals)

        if unparsable:
            names = ", ".join(repr(labels[i]) for i in unparsable)
            logger.warning(f"Unparsable frequency label(s): {names}")
            finding = ScaleFinding(
                ScaleFindingKind.NOT_PARSABLE,
                f"Cannot read a frequency from {names}; interval checks skipped",
                categories=unparsable,
            )
            return ScaleAnalysis(intervals=intervals, findings=(finding,))

        findings: List[ScaleFinding] = []
        findings.extend(_overlaps(labels, intervals))
        findings.extend(_coverage(intervals))
        return ScaleAnalysis(intervals=intervals, findings=tuple(findings))

    def _check_balance(self, labels: Sequence[str]) -> List[ScaleFinding]:
        polarities = [self.label_polarity(label) for label in labels]
        positive = [i for i, p in enumerate(polarities) if p == 'positive']
        negative = [i for i, p in enumerate(polarities) if p == 'negative']
        if len(positive) == len(negative):
            return []
        return [ScaleFinding(
            ScaleFindingKind.UNBALANCED,
            f"{len(positive)} positive vs {len(negative)} negative categories",
            categories=tuple(sorted(positive + negative)),
        )]


def _number(word: str) -> int:
    return int(word) if word.isdigit() else _NUMBER_WORDS[word]


def _overlaps(labels: Sequence[str], intervals: Sequence[FrequencyInterval]) -> List[ScaleFinding]:
    findings = []
    for i, j in combinations(range(len(intervals)), 2):
        common = intervals[i].intersection(intervals[j])
        if common is None:
            continue
        where = f"at {common.lo}" if common.is_point else f"on {common}"
        findings.append(ScaleFinding(
            ScaleFindingKind.OVERLAP,
            f"'{labels[i]}' and '{labels[j]}' overlap {where} per week",
            categories=(i, j),
        ))
    return findings


def is_count_scale(intervals: Sequence[FrequencyInterval]) -> bool:
    """Bare day counts with no rate label ("never"/"none" may accompany them)"""
    has_count = any(interval.discrete for interval in intervals)
    has_rate = any(
        not interval.discrete and not (interval.is_point and interval.lo == 0)
        for interval in intervals
    )
    return has_count and not has_rate


# Check positions in ascending order; 'band' is the sub-weekly band (0, 1)
_POSITIONS: Tuple[Union[int, str], ...] = (0, 'band') + DAY_COUNTS[1:]


def _covering(intervals: Sequence[FrequencyInterval], position) -> Tuple[int, ...]:
    if position == 'band':
        return tuple(i for i, iv in enumerate(intervals) if iv.intersects(SUB_WEEKLY_BAND))
    return tuple(i for i, iv in enumerate(intervals) if iv.contains(Fraction(position)))


def _coverage(intervals: Sequence[FrequencyInterval]) -> List[ScaleFinding]:
    covering = {p: _covering(intervals, p) for p in _POSITIONS}
    covered = [k for k, p in enumerate(_POSITIONS) if covering[p]]

    if not covered:
        return [ScaleFinding(
            ScaleFindingKind.TOP_NOT_COVERED,
            "No day count from 0 to 7 is covered",
            categories=tuple(range(len(intervals))),
            uncovered=DAY_COUNTS,
        )]

    first, last = covered[0], covered[-1]
    findings: List[ScaleFinding] = []

    below = [p for p in _POSITIONS[:first] if p != 'band']
    if below:
        findings.append(ScaleFinding(
            ScaleFindingKind.BOTTOM_NOT_COVERED,
            f"No category for {_describe(below)} per week",
            categories=covering[_POSITIONS[first]],
            uncovered=tuple(below),
        ))

    for run in _uncovered_runs(covering, first, last):
        start, end = _POSITIONS.index(run[0]), _POSITIONS.index(run[-1])
        before = max(k for k in covered if k < start)
        after = min(k for k in covered if k > end)
        neighbours = covering[_POSITIONS[before]] + covering[_POSITIONS[after]]
        findings.append(ScaleFinding(
            ScaleFindingKind.INTERIOR_GAP,
            f"No category for {_describe(run)} per week",
            categories=tuple(sorted(set(neighbours))),
            uncovered=tuple(run),
        ))

    above = [p for p in _POSITIONS[last + 1:] if p != 'band']
    if above:
        findings.append(ScaleFinding(
            ScaleFindingKind.TOP_NOT_COVERED,
            f"No category for {_describe(above)} per week",
            categories=covering[_POSITIONS[last]],
            uncovered=tuple(above),
        ))

    above_zero = next((p for p in DAY_COUNTS[1:] if covering[p]), None)
    if (covering[0] and above_zero is not None and not covering['band']
            and not is_count_scale(intervals)):
        findings.append(ScaleFinding(
            ScaleFindingKind.SUB_WEEKLY_GAP,
            "No category between never and once a week",
            categories=tuple(sorted(set(covering[0] + covering[above_zero]))),
        ))

    return findings


def _uncovered_runs(covering: Dict, first: int, last: int) -> List[List[int]]:
    """Contiguous runs of uncovered day counts strictly inside the covered range"""
    runs: List[List[int]] = []
    current: List[int] = []
    for position in _POSITIONS[first + 1:last]:
        if position == 'band':
            continue
        if covering[position]:
            if current:
                runs.append(current)
            current = []
        else:
            current.append(position)
    if current:
        runs.append(current)
    return runs


def _describe(days: Sequence[int]) -> str:
    if len(days) == 1:
        return f"{days[0]} days"
    return f"{days[0]}-{days[-1]} days"


@lru_cache(maxsize=8)
def _load_scale_lexicons(directory: str) -> Tuple[Dict[str, Fraction], Dict[str, Tuple[str, ...]]]:
    base = resolve_lexicon_dir(directory)

    point_terms = {
        _canonical_label(term): Fraction(value)
        for term, value in read_pairs(base / "frequency_terms.txt", '=')
    }

    polarity: Dict[str, List[str]] = {p: [] for p in _POLARITY_ORDER}
    for term, value in read_pairs(base / "agreement_polarity.txt", '='):
        if value not in polarity:
            logger.warning(f"Unknown polarity {value!r} for {term!r}")
            continue
        polarity[value].append(term.lower())

    # Longest terms first so "somewhat agree" is tested before "agree"
    ordered = {p: tuple(sorted(terms, key=lambda t: (-len(t), t))) for p, terms in polarity.items()}
    logger.debug(f"Scale lexicons loaded from {base}")
    return point_terms, ordered


@lru_cache(maxsize=8)
def get_scale_analyzer(month_weeks: int = 4, lexicon_dir: Optional[str] = None) -> ScaleAnalyzer:
    """Shared analyzer per (month_weeks, lexicon_dir)"""
    return ScaleAnalyzer(month_weeks, lexicon_dir)


def parse_category_interval(label: str, month_weeks: int = 4) -> Optional[FrequencyInterval]:
    """Parse one label with the bundled lexicons"""
    return get_scale_analyzer(month_weeks).parse_category_interval(label)


def analyze_scale(labels: Sequence[str], kind: QuestionKind, month_weeks: int = 4) -> ScaleAnalysis:
    """Analyze a scale with the bundled lexicons"""
    return get_scale_analyzer(month_weeks).analyze_scale(labels, kind)
