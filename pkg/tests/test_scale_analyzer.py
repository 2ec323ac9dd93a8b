"""Frequency label parsing and response-scale checks"""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from models.questionnaire import QuestionKind
from models.scale import DAY_COUNTS, FrequencyInterval, ScaleFindingKind
from services.scale_analyzer import analyze_scale, is_count_scale, parse_category_interval

FREQ = QuestionKind.CLOSED_FREQUENCY

CAMPUS = ["Never", "1-2 days a week", "3-4 days a week"]
AI_SEVEN_OPTIONS = [
    "Never", "Less than once a month", "1-3 times a month", "Once a week",
    "2-3 times a week", "4-5 times a week", "Daily",
]
DAY_COUNT_SCALE = ["None", "1-2 days", "3-4 days", "5-6 days", "7 days"]
OVERLAPPING = ["Never", "1-3 days a week", "3-5 days a week", "5 or more days a week"]
MISSING_BOTTOM = ["3-4 days a week", "5 or more days a week"]
COMPLETE = ["Never", "Less than once a week", "Once a week", "2-3 times a week", "4 or more times a week"]


@pytest.mark.parametrize("label, expected", [
    ("Never", FrequencyInterval.point(0)),
    ("Daily", FrequencyInterval.point(7)),
    ("1-2 days a week", FrequencyInterval(Fraction(1), Fraction(2))),
    ("Twice a week", FrequencyInterval.point(2)),
    ("Once a week", FrequencyInterval.point(1)),
    ("Less than once a month", FrequencyInterval(Fraction(0), Fraction(1, 4), False, False)),
    ("1-3 times a month", FrequencyInterval(Fraction(1, 4), Fraction(3, 4))),
    ("5 or more days a week", FrequencyInterval(Fraction(5), None, True, False)),
    ("3+ days a week", FrequencyInterval(Fraction(3), None, True, False)),
    ("More than 5 times a week", FrequencyInterval(Fraction(5), None, False, False)),
    ("(2) 3-4 days a week", FrequencyInterval(Fraction(3), Fraction(4))),
    ("7 days", FrequencyInterval.point(7, discrete=True)),
])
def test_parse_category_interval(label, expected):
    assert parse_category_interval(label) == expected


@pytest.mark.parametrize("label", ["Sometimes", "A lot", "2-1 days a week", "3 times", ""])
def test_unrecognized_labels(label):
    assert parse_category_interval(label) is None


def test_month_weeks_setting():
    assert parse_category_interval("Once a month", month_weeks=5) == FrequencyInterval.point(Fraction(1, 5))


def test_campus_scale_has_gaps_but_no_overlap():
    analysis = analyze_scale(CAMPUS, FREQ)
    assert analysis.kinds == {ScaleFindingKind.TOP_NOT_COVERED, ScaleFindingKind.SUB_WEEKLY_GAP}
    top = next(f for f in analysis.findings if f.kind is ScaleFindingKind.TOP_NOT_COVERED)
    assert top.uncovered == (5, 6, 7)


def test_seven_option_proposal_misses_six_days():
    analysis = analyze_scale(AI_SEVEN_OPTIONS, FREQ)
    assert [(f.kind, f.uncovered) for f in analysis.findings] == [(ScaleFindingKind.INTERIOR_GAP, (6,))]


def test_overlap_names_both_categories():
    analysis = analyze_scale(OVERLAPPING, FREQ)
    overlaps = [f.categories for f in analysis.findings if f.kind is ScaleFindingKind.OVERLAP]
    assert overlaps == [(1, 2), (2, 3)]
    assert ScaleFindingKind.SUB_WEEKLY_GAP in analysis.kinds


def test_bottom_not_covered():
    analysis = analyze_scale(MISSING_BOTTOM, FREQ)
    assert [(f.kind, f.uncovered) for f in analysis.findings] == [
        (ScaleFindingKind.BOTTOM_NOT_COVERED, (0, 1, 2)),
    ]


def test_day_count_scale_is_clean():
    analysis = analyze_scale(DAY_COUNT_SCALE, FREQ)
    assert is_count_scale(analysis.intervals)
    assert analysis.findings == ()


def test_complete_rate_scale_is_clean():
    assert analyze_scale(COMPLETE, FREQ).findings == ()


def test_unparsable_label_skips_interval_checks():
    analysis = analyze_scale(["Never", "Sometimes", "Often"], FREQ)
    assert [(f.kind, f.categories) for f in analysis.findings] == [(ScaleFindingKind.NOT_PARSABLE, (1, 2))]
    assert analysis.intervals[1] is None


def test_agreement_balance():
    balanced = ["Strongly agree", "Somewhat agree", "Neither agree nor disagree",
                "Somewhat disagree", "Strongly disagree"]
    assert analyze_scale(balanced, QuestionKind.CLOSED_AGREEMENT).findings == ()

    unbalanced = analyze_scale(["Strongly agree", "Agree", "Disagree"], QuestionKind.CLOSED_AGREEMENT)
    assert unbalanced.kinds == {ScaleFindingKind.UNBALANCED}


def test_open_question_is_not_analyzed():
    assert analyze_scale(["anything"], QuestionKind.OPEN).findings == ()


def test_interval_intersection_is_exact():
    below = FrequencyInterval(Fraction(0), Fraction(1, 4), False, False)
    above = FrequencyInterval(Fraction(1, 4), Fraction(3, 4))
    assert below.intersection(above) is None
    closed = FrequencyInterval(Fraction(0), Fraction(1, 4))
    assert closed.intersection(above) == FrequencyInterval.point(Fraction(1, 4))


# Brute-force oracle: test every endpoint, every midpoint between endpoints and a
# point beyond the largest one; any non-empty intersection contains one of them.

def _sample_points(intervals):
    points = {Fraction(0), Fraction(1)}
    for interval in intervals:
        points.add(interval.lo)
        if interval.hi is not None:
            points.add(interval.hi)
    ordered = sorted(points)
    points_to_check = set(ordered)
    points_to_check.update((x + y) / 2 for x, y in zip(ordered, ordered[1:]))
    points_to_check.add(ordered[-1] + 1)
    return points_to_check


def _oracle(intervals):
    points_to_check = _sample_points(intervals)
    expected = set()

    for i, j in combinations(range(len(intervals)), 2):
        if any(intervals[i].contains(p) and intervals[j].contains(p) for p in points_to_check):
            expected.add((ScaleFindingKind.OVERLAP, (i, j)))

    covered = [d for d in DAY_COUNTS if any(iv.contains(Fraction(d)) for iv in intervals)]
    uncovered = [d for d in DAY_COUNTS if d not in covered]
    low, high = min(covered), max(covered)

    below = tuple(d for d in uncovered if d < low)
    if below:
        expected.add((ScaleFindingKind.BOTTOM_NOT_COVERED, below))
    above = tuple(d for d in uncovered if d > high)
    if above:
        expected.add((ScaleFindingKind.TOP_NOT_COVERED, above))
    run = []
    for d in range(low, high + 1):
        if d in uncovered:
            run.append(d)
        elif run:
            expected.add((ScaleFindingKind.INTERIOR_GAP, tuple(run)))
            run = []

    band = [p for p in points_to_check if 0 < p < 1]
    band_covered = any(iv.contains(p) for iv in intervals for p in band)
    if 0 in covered and high > 0 and not band_covered and not is_count_scale(intervals):
        expected.add((ScaleFindingKind.SUB_WEEKLY_GAP, ()))
    return expected


def _observed(analysis):
    observed = set()
    for finding in analysis.findings:
        if finding.kind is ScaleFindingKind.OVERLAP:
            observed.add((finding.kind, finding.categories))
        else:
            observed.add((finding.kind, finding.uncovered))
    return observed


@pytest.mark.parametrize("labels", [
    CAMPUS, AI_SEVEN_OPTIONS, DAY_COUNT_SCALE, OVERLAPPING, MISSING_BOTTOM, COMPLETE,
    ["Never", "Once a week", "3-4 days a week", "Daily"],
    ["1-2 days a week", "2-3 days a week", "2-4 days a week"],
])
def test_analysis_matches_brute_force_oracle(labels):
    analysis = analyze_scale(labels, FREQ)
    assert _observed(analysis) == _oracle(analysis.intervals)


def _order_free(analysis, order):
    """Findings with category positions mapped back to the unshuffled labels"""
    observed = set()
    for finding in analysis.findings:
        if finding.kind is ScaleFindingKind.OVERLAP:
            observed.add((finding.kind, tuple(sorted(order[i] for i in finding.categories))))
        else:
            observed.add((finding.kind, finding.uncovered))
    return observed


@pytest.mark.parametrize("labels", [
    CAMPUS, AI_SEVEN_OPTIONS, OVERLAPPING, MISSING_BOTTOM, COMPLETE,
    ["1-2 days a week", "2-3 days a week", "2-4 days a week"],
])
def test_findings_do_not_depend_on_label_order(labels):
    rng = random.Random(11)
    identity = list(range(len(labels)))
    expected = _order_free(analyze_scale(labels, FREQ), identity)

    for _ in range(20):
        order = identity[:]
        rng.shuffle(order)
        shuffled = [labels[i] for i in order]
        assert _order_free(analyze_scale(shuffled, FREQ), order) == expected
