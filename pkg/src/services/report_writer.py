"""
Report Writer Service
Canonical JSON and reviewer-facing markdown for pretest runs
"""

import json
import logging
from pathlib import Path
from typing import List, Tuple, Union

from models.comparison import JudgmentItem, JudgmentStatus, RevisionDiff
from models.finding import Finding
from models.prompt import PromptLevel
from models.pretest_run import SCHEMA_VERSION, PretestRun, QuestionRecord
from models.questionnaire import Question
from services.questionnaire_io import QuestionnaireError, parse_questionnaire
from utils.files import atomic_write_many

logger = logging.getLogger(__name__)

JUDGMENT_CAUTION = (
    "AI feedback is input for the researcher, not a verdict. The items below either lack "
    "deterministic support or were missed by the AI; review them before changing the question."
)
NO_ISSUES = "No issues detected."


class ReportError(ValueError):
    """Stored run document cannot be read back"""


def render_json(run: PretestRun) -> str:
    """Canonical document: sorted keys, body separate from the timestamped envelope"""
    document = {'body': run.body_dict(), 'envelope': run.envelope_dict()}
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def parse_run_json(text: str) -> PretestRun:
    """
    Restore a run from its JSON document

    Raises:
        ReportError: not a run document or an unsupported schema version
    """
    try:
        document = json.loads(text)
        body = document['body']
        envelope = document.get('envelope', {})
        if body.get('schema_version') != SCHEMA_VERSION:
            raise ReportError(f"Unsupported schema version {body.get('schema_version')!r}")
        questionnaire = parse_questionnaire(json.dumps(body['questionnaire']))
        stored = body.get('questions', {})
        records = tuple(
            QuestionRecord.from_dict(stored[q.id]) for q in questionnaire.questions if q.id in stored
        )
        return PretestRun(
            questionnaire=questionnaire,
            records=records,
            level=PromptLevel(body['level']) if body.get('level') else None,
            tool_version=body.get('tool_version', ''),
            transcript_digests=tuple(body.get('transcript_digests', [])),
            run_id=envelope.get('run_id', ''),
            started_at=envelope.get('started_at', ''),
            finished_at=envelope.get('finished_at', ''),
        )
    except ReportError:
        raise
    except (ValueError, KeyError, TypeError, AttributeError, QuestionnaireError) as e:
        logger.error(f"Cannot read run document: {e}")
        raise ReportError(f"Not a pretest run document: {e}") from e


def render_markdown(run: PretestRun) -> str:
    """Reviewer report: evidence-backed content first, judgment queue last"""
    lines = [f"# Pretest report {run.run_id}".rstrip(), ""]
    if run.level:
        lines.append(f"- Prompt level: {run.level.value}")
    lines.append(f"- Questions: {len(run.questionnaire.questions)}")
    if run.tool_version:
        lines.append(f"- Tool version: {run.tool_version}")
    lines.append("")

    for question in run.questionnaire.questions:
        record = run.record(question.id) or QuestionRecord(question.id)
        lines.extend(_question_section(question, record))

    return "\n".join(lines).rstrip() + "\n"


def report_paths(out_dir: Union[str, Path], run_id: str) -> Tuple[Path, Path]:
    out_dir = Path(out_dir)
    return out_dir / f"{run_id}.report.json", out_dir / f"{run_id}.report.md"


def write_reports(run: PretestRun, out_dir: Union[str, Path]) -> Tuple[Path, Path]:
    """Write both report files; either both appear or neither does"""
    json_path, md_path = report_paths(out_dir, run.run_id)
    atomic_write_many({json_path: render_json(run), md_path: render_markdown(run)})
    logger.info(f"Reports written: {json_path}, {md_path}")
    return json_path, md_path


def _question_section(question: Question, record: QuestionRecord) -> List[str]:
    lines = [f"## {question.id}", "", f"> {_inline(question.stem)}", ""]
    lines += [f"{n}. {label}" for n, label in enumerate(question.categories, start=1)]
    if question.categories:
        lines.append("")

    suggestions = [s for fb in record.feedbacks for s in fb.suggestions]
    if not record.findings and not suggestions:
        return lines + [NO_ISSUES, ""]

    lines += ["### Lint findings", ""]
    lines += _findings_table(record.findings) if record.findings else ["No lint findings.", ""]

    lines += ["### AI suggestions", ""]
    if suggestions:
        for feedback, prompt in zip(record.feedbacks, record.prompts):
            lines.append(f"*{prompt.level.value}*")
            lines.append("")
            lines += [
                f"{s.index}. **{s.kind.value}** {_inline(s.label)}" for s in feedback.suggestions
            ]
            lines.append("")
    else:
        lines += ["No AI feedback.", ""]

    lines += _proposal_lines(record)

    confirmed = [j for j in record.judgments if not j.status.needs_judgment]
    if confirmed:
        lines += ["### Evidence-backed", ""]
        lines += [f"- **{j.kind.value}**: {_subject(j)}" for j in confirmed]
        lines.append("")

    queue = [j for j in record.judgments if j.status.needs_judgment]
    if queue:
        lines += ["### Researcher judgment queue", "", f"_{JUDGMENT_CAUTION}_", ""]
        lines += ["| Status | Kind | Subject | Note |", "| --- | --- | --- | --- |"]
        lines += [
            f"| {j.status.value} | {j.kind.value if j.kind else ''} | {_cell(_subject(j))} | {_cell(j.note)} |"
            for j in queue
        ]
        lines.append("")
    return lines


def _findings_table(findings: Tuple[Finding, ...]) -> List[str]:
    rows = ["| Rule | Severity | Evidence | Message |", "| --- | --- | --- | --- |"]
    rows += [
        f"| {f.rule_id.value} {f.rule_id.title} | {f.severity.value} | {_cell(f.evidence)} | {_cell(f.message)} |"
        for f in findings
    ]
    return rows + [""]


def _proposal_lines(record: QuestionRecord) -> List[str]:
    revisions = [(fb.revised_stem, diff) for fb, diff in zip(
        [fb for fb in record.feedbacks if fb.revised_stem], record.revision_diffs
    )]
    if not revisions and not record.category_diff and not record.agreement:
        return []

    lines = ["### Proposals", ""]
    for stem, diff in revisions:
        lines += [f"AI revision: {_inline(stem)}", ""]
        lines += _edits_table(diff)
    if record.category_diff and record.category_diff.edits:
        lines += ["AI category revision:", ""]
        lines += _edits_table(record.category_diff)
    if record.agreement:
        agreement = record.agreement
        lines += [f"Expert revision: {_inline(record.expert_proposal or agreement.expert_diff.revised)}", ""]
        lines += [f"- Shared: {_edit_list([ai for ai, _ in agreement.shared])}"]
        lines += [f"- AI only: {_edit_list(agreement.ai_only)}"]
        lines += [f"- Expert only: {_edit_list(agreement.expert_only)}", ""]
    return lines


def _edits_table(diff: RevisionDiff) -> List[str]:
    if not diff.edits:
        return ["No changes.", ""]
    rows = ["| Edit | Change | Class |", "| --- | --- | --- |"]
    rows += [f"| {e.kind.value} | {_cell(e.describe())} | {e.semantic.value} |" for e in diff.edits]
    return rows + [""]


def _edit_list(edits) -> str:
    if not edits:
        return "none"
    return "; ".join(f"{e.semantic.value} ({e.describe()})" for e in edits)


def _subject(item: JudgmentItem) -> str:
    parts = [f"AI: {s.label}" for s in item.suggestions]
    parts += [f"{f.rule_id.value} {f.rule_id.title}: '{f.evidence}'" for f in item.findings]
    if item.status is JudgmentStatus.UNSUPPORTED_BY_LINT:
        parts.append("needs researcher judgment")
    return _inline(" / ".join(parts))


def _inline(text: str) -> str:
    return " ".join(text.split())


def _cell(text: str) -> str:
    return _inline(text).replace("|", "\\|")
