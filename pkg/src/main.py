"""
Questionnaire Pretest Toolkit - Main Entry Point
Command-line interface: lint, pretest, compare and report
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from models.completion import ClientMode, ModelParams
from models.finding import LintConfig, RuleId
from models.prompt import PromptLevel
from models.questionnaire import Question, Questionnaire
from services.feedback_parser import parse_feedback
from services.linter import Linter, gate_tripped
from services.llm_client import LLMClient, LLMClientError
from services.pretest_pipeline import PretestPipeline
from services.prompt_builder import PromptError
from services.questionnaire_io import QuestionnaireError, load_questionnaire, validate_structure
from services.report_writer import ReportError, parse_run_json, render_json, render_markdown, write_reports
from services.revision_compare import compare_proposals
from services.transcript_store import TranscriptError, TranscriptStore
from utils.config import Config
from utils.files import atomic_write_text
from utils.logger import setup_logging
from version import __version__

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_GATE = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NETWORK = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pretest",
        description="Lint survey questions and run AI-assisted questionnaire pretests",
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('--config', help="settings file (.json or .toml)")
    parser.add_argument('--log-level', help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument('--lexicons', help="lexicon directory (default: config/lexicons)")
    sub = parser.add_subparsers(dest='command', required=True)

    lint = sub.add_parser('lint', help="deterministic rules only")
    lint.add_argument('file')
    lint.add_argument('--strict', action='store_true', help="exit 1 on any warning or error finding")
    lint.add_argument('--format', choices=('text', 'json'), default='text')
    lint.add_argument('--disable', action='append', default=[], metavar='RULE',
                      choices=[r.value for r in RuleId])

    pretest = sub.add_parser('pretest', help="full pipeline: lint, prompt, complete, compare, report")
    pretest.add_argument('file')
    pretest.add_argument('--level', required=True, choices=('1', '2', '3', '4', 'roleplay'))
    pretest.add_argument('--profile', help="participant profile for role play")
    pretest.add_argument('--mode', choices=[m.value for m in ClientMode])
    pretest.add_argument('--transcripts', help="transcript file for record/replay")
    pretest.add_argument('--out-dir')
    pretest.add_argument('--run-id')
    pretest.add_argument('--expert', metavar='JSON', help="file mapping question id to expert proposal")
    pretest.add_argument('--include-mode', action='store_true', help="add the survey-mode sentence")

    compare = sub.add_parser('compare', help="AI vs expert revision of one question")
    compare.add_argument('file')
    compare.add_argument('--ai', required=True, metavar='TEXT-FILE')
    compare.add_argument('--expert', required=True, metavar='TEXT-FILE')
    compare.add_argument('--question', metavar='ID')
    compare.add_argument('--format', choices=('md', 'json'), default='md')

    report = sub.add_parser('report', help="re-render a stored run")
    report.add_argument('run_file', metavar='RUN.json')
    report.add_argument('--format', choices=('md', 'json'), default='md')
    report.add_argument('--out', metavar='PATH')

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Execute one command

    Returns:
        Exit code: 0 ok, 1 strict gate, 2 usage, 3 I/O, 4 network/transcript
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        config = Config(args.config)
    except (OSError, ValueError) as e:
        return _fail(EXIT_IO, f"cannot load config: {e}")

    log = config.get_section('logging')
    setup_logging(args.log_level or log.get('level', 'INFO'), log.get('log_to_file', False), log.get('log_dir', 'logs'))
    if args.lexicons:
        config.settings['lint']['lexicon_dir'] = args.lexicons

    handlers = {'lint': _cmd_lint, 'pretest': _cmd_pretest, 'compare': _cmd_compare, 'report': _cmd_report}
    try:
        return handlers[args.command](args, config)
    except PromptError as e:
        return _fail(EXIT_USAGE, str(e))
    except (LLMClientError, TranscriptError) as e:
        return _fail(EXIT_NETWORK, str(e))
    except QuestionnaireError as e:
        return _fail(EXIT_IO, f"{e} (at {e.location})")
    except (ReportError, OSError, ValueError) as e:
        return _fail(EXIT_IO, str(e))


def main():
    """Console entry point"""
    sys.exit(run())


def _fail(code: int, message: str) -> int:
    logger.error(message)
    print(f"pretest: error: {message}", file=sys.stderr)
    return code


def _lint_config(config: Config, disabled: Sequence[str] = (), strict: bool = False) -> LintConfig:
    lint = config.get_section('lint')
    lint['disabled_rules'] = list(lint.get('disabled_rules', [])) + list(disabled)
    lint['strict'] = strict or lint.get('strict', False)
    return LintConfig.from_settings(lint, config.get_section('scale'))


def _cmd_lint(args, config: Config) -> int:
    questionnaire = load_questionnaire(args.file)
    cfg = _lint_config(config, args.disable, args.strict)
    for issue in validate_structure(questionnaire):
        logger.warning(f"{issue.question_id or 'meta'}: {issue.code}: {issue.message}")

    findings = PretestPipeline(Linter(cfg), concurrency=config.get('llm.concurrency', 2)).lint(questionnaire)
    if args.format == 'json':
        document = {qid: [f.to_dict() for f in items] for qid, items in findings.items()}
        print(json.dumps({'questions': document}, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        for line in _lint_lines(questionnaire, findings):
            print(line)

    every = [f for items in findings.values() for f in items]
    if cfg.strict and gate_tripped(every):
        logger.info("Strict gate tripped")
        return EXIT_GATE
    return EXIT_OK


def _lint_lines(questionnaire: Questionnaire, findings: Dict[str, List]) -> List[str]:
    lines = []
    for question in questionnaire.questions:
        for f in findings[question.id]:
            where = f.span.target.value if f.span.index is None else f"{f.span.target.value}[{f.span.index}]"
            lines.append(
                f"{question.id}:{where}:{f.span.start}-{f.span.end}: "
                f"{f.rule_id.value} {f.severity.value}: {f.message}"
            )
    return lines


def _cmd_pretest(args, config: Config) -> int:
    questionnaire = load_questionnaire(args.file)
    prompt = config.get_section('prompt')
    profile = args.profile if args.profile is not None else prompt.get('profile')
    level = PromptLevel.from_cli(args.level, profile if args.level == 'roleplay' else None)

    mode = ClientMode(args.mode or config.get('transcripts.mode', 'replay'))
    transcript_path = args.transcripts or config.get('transcripts.path')
    store = None
    if mode is not ClientMode.LIVE:
        store = TranscriptStore.load(transcript_path, must_exist=mode is ClientMode.REPLAY)

    llm = config.get_section('llm')
    params = ModelParams(llm.get('model', 'gpt-4'), llm.get('temperature', 0.7), llm.get('max_tokens', 1024))
    pipeline = PretestPipeline(
        linter=Linter(_lint_config(config)),
        client=LLMClient.from_settings(llm),
        store=store,
        mode=mode,
        params=params,
        concurrency=llm.get('concurrency', 2),
        include_mode=args.include_mode or prompt.get('include_mode', False),
    )

    expert = _load_expert(args.expert) if args.expert else {}
    result = pipeline.run(questionnaire, level, profile, expert, args.run_id)
    json_path, md_path = write_reports(result, args.out_dir or config.get('reports.out_dir', 'reports'))

    suggestions = sum(len(fb.suggestions) for r in result.records for fb in r.feedbacks)
    print(json_path)
    print(md_path)
    logger.info(f"Pretest complete: {len(result.records)} questions, {suggestions} suggestions")
    return EXIT_OK


def _load_expert(path: str) -> Dict[str, str]:
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    if not isinstance(data, dict) or not all(isinstance(v, str) for v in data.values()):
        raise ValueError(f"{path}: expected an object of question id → proposal text")
    return data


def _cmd_compare(args, config: Config) -> int:
    questionnaire = load_questionnaire(args.file)
    question = _pick_question(questionnaire, args.question)
    ai_text = Path(args.ai).read_text(encoding='utf-8')
    expert_text = Path(args.expert).read_text(encoding='utf-8').strip()
    lexicon_dir = config.get('lint.lexicon_dir')

    ai_revision = parse_feedback(ai_text, lexicon_dir).revised_stem or ai_text.strip()
    if not ai_revision or not expert_text:
        raise ValueError("AI and expert revisions must be non-empty")
    report = compare_proposals(question.stem, ai_revision, expert_text, lexicon_dir)

    if args.format == 'json':
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False))
        return EXIT_OK

    print(f"Original: {question.stem}")
    print(f"AI:       {ai_revision}")
    print(f"Expert:   {expert_text}")
    for title, edits in (("Shared", [ai for ai, _ in report.shared]),
                         ("AI only", report.ai_only),
                         ("Expert only", report.expert_only)):
        print(f"\n{title}:")
        for edit in edits:
            print(f"  {edit.semantic.value}: {edit.describe()}")
        if not edits:
            print("  none")
    return EXIT_OK


def _pick_question(questionnaire: Questionnaire, question_id: Optional[str]) -> Question:
    if question_id is None:
        if not questionnaire.questions:
            raise ValueError("questionnaire has no questions")
        return questionnaire.questions[0]
    question = questionnaire.get(question_id)
    if question is None:
        raise ValueError(f"no question with id {question_id!r}")
    return question


def _cmd_report(args, config: Config) -> int:
    run_doc = parse_run_json(Path(args.run_file).read_text(encoding='utf-8'))
    text = render_json(run_doc) if args.format == 'json' else render_markdown(run_doc)
    if args.out:
        atomic_write_text(args.out, text)
        logger.info(f"Report written to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    main()
