"""
Revision Compare Service
Token-level diffs of question versions, AI/expert agreement and lint cross-checks
"""

import logging
import re
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from models.comparison import (
    AgreementReport, EditKind, EditOp, EditSemantic, JudgmentItem, JudgmentStatus, RevisionDiff
)
from models.feedback import PretestFeedback, Suggestion, SuggestionKind
from models.finding import Finding
from services.lint_rules import REFERENCE_PERIOD_RE
from utils.lexicon import LexiconSet, PathLike, read_pairs, resolve_lexicon_dir
from utils.text import Token, normalize, tokenize

logger = logging.getLogger(__name__)

MAX_TERM_TOKENS = 3
EXEMPLIFICATION_MARKERS = (" such as ", " e g ", " for example ", " for instance ", " including ")

_MATCH, _DELETE, _INSERT = 0, 1, 2


def lcs_table(a: Sequence[str], b: Sequence[str]) -> np.ndarray:
    """
    Suffix LCS lengths: table[i, j] = LCS(a[i:], b[j:])

    Each row is the right-to-left running maximum of the match/skip
    candidates, so rows fill without a Python loop over columns.
    """
    ids: Dict[str, int] = {}
    a_ids = np.array([ids.setdefault(t, len(ids)) for t in a], dtype=np.int64)
    b_ids = np.array([ids.setdefault(t, len(ids)) for t in b], dtype=np.int64)

    table = np.zeros((len(a) + 1, len(b) + 1), dtype=np.int32)
    if not len(a) or not len(b):
        return table

    for i in range(len(a) - 1, -1, -1):
        below = table[i + 1]
        candidates = np.where(b_ids == a_ids[i], below[1:] + 1, below[:-1])
        table[i, :-1] = np.maximum.accumulate(candidates[::-1])[::-1]
    return table


def _alignment(a: Sequence[str], b: Sequence[str]) -> List[int]:
    """Forward walk over the table; deletions win ties"""
    table = lcs_table(a, b)
    steps = []
    i = j = 0
    while i < len(a) or j < len(b):
        if i < len(a) and j < len(b) and a[i] == b[j]:
            steps.append(_MATCH)
            i += 1
            j += 1
        elif j == len(b) or (i < len(a) and table[i + 1, j] >= table[i, j + 1]):
            steps.append(_DELETE)
            i += 1
        else:
            steps.append(_INSERT)
            j += 1
    return steps


def _raw_edits(a: Sequence[str], b: Sequence[str]) -> List[Tuple[int, int, int, int]]:
    """Merged non-matching runs as (old_start, old_end, new_start, new_end)"""
    runs = []
    i = j = 0
    open_run: Optional[List[int]] = None
    for step in _alignment(a, b):
        if step == _MATCH:
            if open_run:
                runs.append((open_run[0], i, open_run[1], j))
                open_run = None
            i += 1
            j += 1
            continue
        if open_run is None:
            open_run = [i, j]
        if step == _DELETE:
            i += 1
        else:
            j += 1
    if open_run:
        runs.append((open_run[0], i, open_run[1], j))
    return runs


def apply_edits(tokens: Sequence[str], edits: Sequence[EditOp]) -> List[str]:
    """Replay edits (ordered by position) over the original tokens"""
    result: List[str] = []
    cursor = 0
    for edit in edits:
        result.extend(tokens[cursor:edit.old_start])
        result.extend(edit.new_tokens)
        cursor = edit.old_end
    result.extend(tokens[cursor:])
    return result


@lru_cache(maxsize=8)
def _function_words(directory: Optional[str]) -> frozenset:
    return LexiconSet.load(directory).function_words


def _reference_ranges(text: str, tokens: Sequence[Token]) -> List[Tuple[int, int]]:
    ranges = []
    for match in REFERENCE_PERIOD_RE.finditer(normalize(text).lower()):
        inside = [k for k, t in enumerate(tokens) if t.start < match.end() and match.start() < t.end]
        if inside:
            ranges.append((inside[0], inside[-1] + 1))
    return ranges


def _touches(start: int, end: int, ranges: Sequence[Tuple[int, int]]) -> bool:
    return start < end and any(start < r1 and r0 < end for r0, r1 in ranges)


def _has_content_word(tokens: Sequence[str], function_words: frozenset) -> bool:
    return any(t not in function_words and any(c.isalpha() for c in t) for t in tokens)


def _classify_edit(kind: EditKind, old: Tuple[str, ...], new: Tuple[str, ...],
                   old_range: Tuple[int, int], new_range: Tuple[int, int],
                   old_periods, new_periods, function_words: frozenset) -> EditSemantic:
    if _touches(*old_range, old_periods) or _touches(*new_range, new_periods):
        return EditSemantic.TIMEFRAME_CHANGE
    padded = f" {' '.join(new)} "
    if any(marker in padded for marker in EXEMPLIFICATION_MARKERS):
        return EditSemantic.EXEMPLIFICATION_ADDED
    if (kind is EditKind.REPLACE
            and len(old) <= MAX_TERM_TOKENS and len(new) <= MAX_TERM_TOKENS
            and _has_content_word(old, function_words) and _has_content_word(new, function_words)):
        return EditSemantic.TERM_REPLACEMENT
    return EditSemantic.REWORDING


def _edit_kind(old_start: int, old_end: int, new_start: int, new_end: int) -> EditKind:
    if old_start == old_end:
        return EditKind.INSERT
    if new_start == new_end:
        return EditKind.DELETE
    return EditKind.REPLACE


def diff_revision(original: str, revised: str, lexicon_dir: Optional[PathLike] = None) -> RevisionDiff:
    """
    Align two question texts token by token and classify each edit

    Args:
        original: Original question text
        revised: Revised question text
        lexicon_dir: Lexicon directory for the function-word list

    Returns:
        RevisionDiff whose edits turn the normalized original into the normalized revision
    """
    old_tokens = tokenize(original)
    new_tokens = tokenize(revised)
    a = tuple(t.norm for t in old_tokens)
    b = tuple(t.norm for t in new_tokens)

    function_words = _function_words(str(lexicon_dir) if lexicon_dir else None)
    old_periods = _reference_ranges(original, old_tokens)
    new_periods = _reference_ranges(revised, new_tokens)

    edits = []
    for old_start, old_end, new_start, new_end in _raw_edits(a, b):
        kind = _edit_kind(old_start, old_end, new_start, new_end)
        old, new = a[old_start:old_end], b[new_start:new_end]
        if old_start < old_end:
            span = (old_tokens[old_start].start, old_tokens[old_end - 1].end)
        else:
            point = old_tokens[old_start].start if old_start < len(old_tokens) else len(original)
            span = (point, point)
        semantic = _classify_edit(kind, old, new, (old_start, old_end), (new_start, new_end),
                                  old_periods, new_periods, function_words)
        edits.append(EditOp(kind, old_start, old_end, new_start, new_end, old, new, span, semantic))

    logger.debug(f"Diffed revision: {len(edits)} edits over {len(a)} → {len(b)} tokens")
    return RevisionDiff(original, revised, a, b, tuple(edits))


def diff_categories(original: Sequence[str], revised: Sequence[str]) -> RevisionDiff:
    """Label-level diff of two category lists; every edit is a CategoryChange"""
    a = tuple(" ".join(t.norm for t in tokenize(label)) for label in original)
    b = tuple(" ".join(t.norm for t in tokenize(label)) for label in revised)
    edits = tuple(
        EditOp(_edit_kind(os_, oe, ns, ne), os_, oe, ns, ne, a[os_:oe], b[ns:ne], (os_, oe),
               EditSemantic.CATEGORY_CHANGE)
        for os_, oe, ns, ne in _raw_edits(a, b)
    )
    return RevisionDiff("\n".join(original), "\n".join(revised), a, b, edits)


def compare_proposals(original: str, ai: str, expert: str,
                      lexicon_dir: Optional[PathLike] = None) -> AgreementReport:
    """
    Pair AI and expert edits of the same original

    Edits are shared when their old-side ranges overlap and their semantic
    class is equal; each expert edit pairs at most once.
    """
    ai_diff = diff_revision(original, ai, lexicon_dir)
    expert_diff = diff_revision(original, expert, lexicon_dir)

    shared = []
    ai_only = []
    taken = set()
    for ai_edit in ai_diff.edits:
        partner = next(
            (k for k, ex in enumerate(expert_diff.edits)
             if k not in taken and ex.semantic is ai_edit.semantic and ex.overlaps(ai_edit)),
            None,
        )
        if partner is None:
            ai_only.append(ai_edit)
        else:
            taken.add(partner)
            shared.append((ai_edit, expert_diff.edits[partner]))

    expert_only = tuple(ex for k, ex in enumerate(expert_diff.edits) if k not in taken)
    logger.debug(f"Agreement: {len(shared)} shared, {len(ai_only)} AI-only, {len(expert_only)} expert-only")
    return AgreementReport(ai_diff, expert_diff, tuple(shared), tuple(ai_only), expert_only)


@lru_cache(maxsize=8)
def load_kind_mapping(directory: Optional[str] = None) -> Dict[str, Tuple[SuggestionKind, ...]]:
    """Rule key ('L3' or 'N10:Overlap') → suggestion kinds, preferred first"""
    path = resolve_lexicon_dir(directory) / "kind_mapping.txt"
    mapping = {}
    for key, value in read_pairs(path, '='):
        try:
            mapping[key] = tuple(SuggestionKind(v.strip()) for v in value.split(',') if v.strip())
        except ValueError as e:
            logger.warning(f"Ignoring kind mapping {key!r} in {path}: {e}")
    return mapping


def mapped_kinds(finding: Finding, mapping: Dict[str, Tuple[SuggestionKind, ...]]) -> Tuple[SuggestionKind, ...]:
    if finding.subkind:
        scoped = mapping.get(f"{finding.rule_id.value}:{finding.subkind}")
        if scoped is not None:
            return scoped
    return mapping.get(finding.rule_id.value, ())


def cross_check(findings: Sequence[Finding], feedback: PretestFeedback,
                lexicon_dir: Optional[PathLike] = None) -> List[JudgmentItem]:
    """
    Triage AI suggestions against lint findings

    Each mapped finding goes to the first kind in its mapping entry that some
    suggestion has; such kinds become ConfirmedByLint items. Remaining
    suggestions are UnsupportedByLint and remaining mapped findings MissedByAI.
    Findings whose rule has no mapping stay out of the queue.
    """
    mapping = load_kind_mapping(str(lexicon_dir) if lexicon_dir else None)
    suggested = {s.kind for s in feedback.suggestions}

    assigned: Dict[SuggestionKind, List[Finding]] = {}
    missed: List[Tuple[SuggestionKind, Finding]] = []
    for finding in sorted(findings, key=lambda f: f.sort_key):
        kinds = mapped_kinds(finding, mapping)
        if not kinds:
            continue
        target = next((k for k in kinds if k in suggested), None)
        if target is None:
            missed.append((kinds[0], finding))
        else:
            assigned.setdefault(target, []).append(finding)

    items: List[JudgmentItem] = []
    for kind in SuggestionKind:
        if kind not in assigned:
            continue
        group = tuple(s for s in feedback.suggestions if s.kind is kind)
        evidence = tuple(assigned[kind])
        items.append(JudgmentItem(
            JudgmentStatus.CONFIRMED_BY_LINT, kind, group, evidence,
            f"{len(evidence)} lint finding(s) support this advice",
        ))

    for suggestion in sorted(feedback.suggestions, key=_suggestion_order):
        if suggestion.kind in assigned:
            continue
        items.append(JudgmentItem(
            JudgmentStatus.UNSUPPORTED_BY_LINT, suggestion.kind, (suggestion,), (),
            "No lint finding supports this advice; needs researcher judgment",
        ))

    for kind, finding in missed:
        items.append(JudgmentItem(
            JudgmentStatus.MISSED_BY_AI, kind, (), (finding,),
            f"{finding.rule_id.title} on '{finding.evidence}' is not addressed by the AI feedback",
        ))

    logger.debug(
        f"Cross-check: {sum(1 for i in items if not i.status.needs_judgment)} confirmed, "
        f"{sum(1 for i in items if i.status.needs_judgment)} for judgment"
    )
    return items


def _suggestion_order(suggestion: Suggestion):
    return suggestion.index, suggestion.body
