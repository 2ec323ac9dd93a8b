"""JSON and markdown reports"""

import json

import pytest

from models.pretest_run import PretestRun
from models.prompt import PromptLevel
from services.report_writer import (
    JUDGMENT_CAUTION, NO_ISSUES, ReportError, parse_run_json, render_json, render_markdown,
    report_paths, write_reports,
)


@pytest.fixture
def role_play_run(replay_pipeline, rule_cases, corpus):
    expert = {row['question_id']: row['expert_proposal'] for row in corpus['role_play']}
    return replay_pipeline.run(rule_cases, PromptLevel.ROLE_PLAY_GENERAL, expert=expert, run_id="rp")


def test_json_document_layout(role_play_run):
    document = json.loads(render_json(role_play_run))
    assert set(document) == {'body', 'envelope'}
    assert document['envelope']['run_id'] == "rp"
    assert document['body']['schema_version'] == 1
    assert document['body']['level'] == "RolePlayGeneral"
    assert list(document['body']['questions']) == sorted(document['body']['questions'])


def test_json_round_trip_is_byte_stable(role_play_run, replay_pipeline, campus):
    for run in (role_play_run, replay_pipeline.run(campus, PromptLevel.TASK_ONLY, run_id="t")):
        text = render_json(run)
        assert render_json(parse_run_json(text)) == text


def test_markdown_sections(role_play_run):
    markdown = render_markdown(role_play_run)
    assert markdown.startswith("# Pretest report rp\n")
    assert "- Prompt level: RolePlayGeneral" in markdown
    assert "## L1" in markdown
    assert "### Lint findings" in markdown
    assert "### Proposals" in markdown
    assert "Expert revision: During the last 4 weeks, how often did you suffer from physical pain?" in markdown
    assert "- Shared: TermReplacement (suffer from somatic → experienced physical)" in markdown


def test_judgment_queue_comes_last(role_play_run):
    markdown = render_markdown(role_play_run)
    section = markdown.split("## L6", 1)[1].split("\n## ", 1)[0]
    assert f"_{JUDGMENT_CAUTION}_" in section
    assert "| MissedByAI | SimplifyWording | L6 Nominalization: 'security' |" in section
    assert section.index("### Researcher judgment queue") > section.index("### Proposals")


def test_evidence_backed_items(replay_pipeline, campus):
    markdown = render_markdown(replay_pipeline.run(campus, PromptLevel.TASK_ONLY))
    assert "### Evidence-backed" in markdown
    assert "- **AddTimeframe**:" in markdown
    assert "| UnsupportedByLint | NeutralTone |" in markdown


def test_question_without_results(clean):
    run = PretestRun(questionnaire=clean, run_id="empty")
    markdown = render_markdown(run)
    assert NO_ISSUES in markdown
    assert "### Lint findings" not in markdown
    assert json.loads(render_json(run))['body']['questions'] == {}


def test_write_reports(role_play_run, tmp_path):
    json_path, md_path = write_reports(role_play_run, tmp_path / "out")

    assert (json_path, md_path) == report_paths(tmp_path / "out", "rp")
    assert json_path.name == "rp.report.json"
    assert json_path.read_text(encoding='utf-8') == render_json(role_play_run)
    assert md_path.read_text(encoding='utf-8') == render_markdown(role_play_run)
    assert sorted(p.name for p in (tmp_path / "out").iterdir()) == ["rp.report.json", "rp.report.md"]


@pytest.mark.parametrize("text", [
    "not json",
    "[]",
    '{"envelope": {}}',
    '{"body": {"schema_version": 99}}',
    '{"body": {"schema_version": 1, "questionnaire": {"questions": "x"}}}',
])
def test_unreadable_run_documents(text):
    with pytest.raises(ReportError):
        parse_run_json(text)


def test_record_for_unknown_question_is_rejected(role_play_run, clean):
    with pytest.raises(ValueError):
        PretestRun(questionnaire=clean, records=role_play_run.records)
