"""
Pretest Run Data Models
Everything one pretest round produced, per question
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from models.comparison import AgreementReport, JudgmentItem, RevisionDiff
from models.feedback import PretestFeedback
from models.finding import Finding
from models.prompt import PromptLevel, PromptSpec
from models.questionnaire import Questionnaire

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class QuestionRecord:
    """Lint, prompt, feedback and comparison results for one question"""
    question_id: str
    findings: Tuple[Finding, ...] = ()
    prompts: Tuple[PromptSpec, ...] = ()
    feedbacks: Tuple[PretestFeedback, ...] = ()
    revision_diffs: Tuple[RevisionDiff, ...] = ()
    category_diff: Optional[RevisionDiff] = None
    expert_proposal: Optional[str] = None
    agreement: Optional[AgreementReport] = None
    judgments: Tuple[JudgmentItem, ...] = ()

    def to_dict(self) -> Dict:
        return {
            'question_id': self.question_id,
            'findings': [f.to_dict() for f in self.findings],
            'prompts': [p.to_dict() for p in self.prompts],
            'feedbacks': [fb.to_dict() for fb in self.feedbacks],
            'revision_diffs': [d.to_dict() for d in self.revision_diffs],
            'category_diff': self.category_diff.to_dict() if self.category_diff else None,
            'expert_proposal': self.expert_proposal,
            'agreement': self.agreement.to_dict() if self.agreement else None,
            'judgments': [j.to_dict() for j in self.judgments],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'QuestionRecord':
        return cls(
            question_id=data['question_id'],
            findings=tuple(Finding.from_dict(f) for f in data.get('findings', [])),
            prompts=tuple(PromptSpec.from_dict(p) for p in data.get('prompts', [])),
            feedbacks=tuple(PretestFeedback.from_dict(fb) for fb in data.get('feedbacks', [])),
            revision_diffs=tuple(RevisionDiff.from_dict(d) for d in data.get('revision_diffs', [])),
            category_diff=RevisionDiff.from_dict(data['category_diff']) if data.get('category_diff') else None,
            expert_proposal=data.get('expert_proposal'),
            agreement=AgreementReport.from_dict(data['agreement']) if data.get('agreement') else None,
            judgments=tuple(JudgmentItem.from_dict(j) for j in data.get('judgments', [])),
        )


@dataclass(frozen=True)
class PretestRun:
    """
    One pretest round

    The questionnaire snapshot, records and digests form the canonical
    body; run id and timestamps travel in the envelope.
    """
    questionnaire: Questionnaire
    records: Tuple[QuestionRecord, ...] = ()
    level: Optional[PromptLevel] = None
    tool_version: str = ""
    transcript_digests: Tuple[str, ...] = ()
    run_id: str = ""
    started_at: str = ""
    finished_at: str = ""
    schema_version: int = field(default=SCHEMA_VERSION)

    def __post_init__(self):
        known = {q.id for q in self.questionnaire.questions}
        for record in self.records:
            if record.question_id not in known:
                raise ValueError(f"Record for unknown question {record.question_id!r}")

    def record(self, question_id: str) -> Optional[QuestionRecord]:
        return next((r for r in self.records if r.question_id == question_id), None)

    def body_dict(self) -> Dict:
        return {
            'schema_version': self.schema_version,
            'tool_version': self.tool_version,
            'level': self.level.value if self.level else None,
            'questionnaire': self.questionnaire.to_dict(),
            'questions': {r.question_id: r.to_dict() for r in self.records},
            'transcript_digests': sorted(set(self.transcript_digests)),
        }

    def envelope_dict(self) -> Dict:
        return {
            'run_id': self.run_id,
            'started_at': self.started_at,
            'finished_at': self.finished_at,
        }
