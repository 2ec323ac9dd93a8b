"""
Linter Service
Runs every enabled rule over a question and merges scale findings (N10)
"""

import logging
from typing import List, Optional

from models.feedback import SuggestionKind
from models.finding import Finding, LintConfig, RuleId, Severity
from models.questionnaire import Question, SourceSpan, SpanTarget, StudyMeta
from models.scale import ScaleFinding, ScaleFindingKind
from services.lint_rules import STEM_DETECTORS
from services.scale_analyzer import get_scale_analyzer
from utils.lexicon import LexiconSet

logger = logging.getLogger(__name__)

_SCALE_SEVERITY = {
    ScaleFindingKind.OVERLAP: Severity.WARNING,
    ScaleFindingKind.INTERIOR_GAP: Severity.WARNING,
    ScaleFindingKind.TOP_NOT_COVERED: Severity.WARNING,
    ScaleFindingKind.BOTTOM_NOT_COVERED: Severity.WARNING,
    ScaleFindingKind.SUB_WEEKLY_GAP: Severity.INFO,
    ScaleFindingKind.UNBALANCED: Severity.INFO,
    ScaleFindingKind.NOT_PARSABLE: Severity.INFO,
}

_SCALE_HINT = {
    ScaleFindingKind.OVERLAP: SuggestionKind.MUTUAL_EXCLUSIVITY,
    ScaleFindingKind.INTERIOR_GAP: SuggestionKind.REVISE_CATEGORIES,
    ScaleFindingKind.TOP_NOT_COVERED: SuggestionKind.REVISE_CATEGORIES,
    ScaleFindingKind.BOTTOM_NOT_COVERED: SuggestionKind.REVISE_CATEGORIES,
    ScaleFindingKind.SUB_WEEKLY_GAP: SuggestionKind.REVISE_CATEGORIES,
    ScaleFindingKind.UNBALANCED: SuggestionKind.ADD_SCALE,
}


class Linter:
    """
    Deterministic question linter

    Lexicons are loaded once per linter; linting distinct questions is
    safe from several threads.
    """

    def __init__(self, cfg: Optional[LintConfig] = None):
        """
        Initialize linter

        Args:
            cfg: Lint configuration (defaults when omitted)

        Raises:
            LexiconUnavailable: a lexicon file is missing
        """
        self.cfg = cfg or LintConfig()
        self.lexicons = LexiconSet.load(self.cfg.lexicon_dir)
        self.scale_analyzer = get_scale_analyzer(self.cfg.month_weeks, self.cfg.lexicon_dir)

    def lint_question(self, question: Question, meta: Optional[StudyMeta] = None) -> List[Finding]:
        """
        Lint one question

        Args:
            question: The question to check
            meta: Study context (no current rule depends on it)

        Returns:
            Findings sorted by target, start offset and rule
        """
        findings: List[Finding] = []
        for detector in STEM_DETECTORS:
            findings.extend(detector(question.stem, self.cfg, self.lexicons))

        if question.kind.is_closed and question.categories:
            analysis = self.scale_analyzer.analyze_scale(question.categories, question.kind)
            findings.extend(self._scale_finding(question, f) for f in analysis.findings)

        findings = [f for f in findings if self.cfg.enabled(f.rule_id)]
        findings.sort(key=lambda f: f.sort_key)
        logger.debug(f"Question {question.id}: {len(findings)} findings")
        return findings

    def _scale_finding(self, question: Question, scale_finding: ScaleFinding) -> Finding:
        index = scale_finding.categories[0] if scale_finding.categories else 0
        label = question.categories[index]
        start = len(label) - len(label.lstrip())
        end = start + len(label.strip())
        return Finding(
            rule_id=RuleId.N10,
            severity=_SCALE_SEVERITY[scale_finding.kind],
            span=SourceSpan(SpanTarget.CATEGORY, start, end, index),
            message=f"{scale_finding.kind.value}: {scale_finding.detail}",
            evidence=label[start:end],
            hint=_SCALE_HINT.get(scale_finding.kind),
            subkind=scale_finding.kind.value,
        )


def lint_question(question: Question, meta: Optional[StudyMeta] = None,
                  cfg: Optional[LintConfig] = None) -> List[Finding]:
    """Lint a single question with a fresh linter"""
    return Linter(cfg).lint_question(question, meta)


def gate_tripped(findings: List[Finding]) -> bool:
    """Whether any finding is warning or worse (the strict gate)"""
    return any(f.severity.at_least(Severity.WARNING) for f in findings)
