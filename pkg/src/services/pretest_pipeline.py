"""
Pretest Pipeline Service
lint → prompt → complete → parse feedback → compare, for a whole questionnaire
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from typing import Dict, List, Mapping, Optional

from models.completion import ClientMode, CompletionRequest, ModelParams
from models.finding import Finding
from models.pretest_run import PretestRun, QuestionRecord
from models.prompt import PromptLevel, PromptSpec
from models.questionnaire import Question, Questionnaire
from services.feedback_parser import parse_feedback
from services.linter import Linter
from services.llm_client import LLMClient
from services.prompt_builder import build_prompt
from services.revision_compare import compare_proposals, cross_check, diff_categories, diff_revision
from services.transcript_store import TranscriptStore
from version import __version__

logger = logging.getLogger(__name__)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


def default_run_id() -> str:
    return datetime.now(timezone.utc).strftime("run-%Y%m%dT%H%M%SZ")


class PretestPipeline:
    """
    Orchestrates one pretest round

    Lint fans out over a worker pool; completions run with at most
    `concurrency` requests in flight (the client enforces the same bound).
    """

    def __init__(self,
                 linter: Linter,
                 client: Optional[LLMClient] = None,
                 store: Optional[TranscriptStore] = None,
                 mode: ClientMode = ClientMode.REPLAY,
                 params: Optional[ModelParams] = None,
                 concurrency: int = 2,
                 include_mode: bool = False):
        """
        Initialize pipeline

        Args:
            linter: Configured linter (its lexicon directory is reused for feedback and compare)
            client: Completion client (needed by run)
            store: Transcript for record and replay modes
            mode: How completions are obtained
            params: Model parameters for every prompt
            concurrency: Worker count for lint and completions
            include_mode: Add the survey-mode sentence to task prompts
        """
        self.linter = linter
        self.client = client
        self.store = store
        self.mode = mode
        self.params = params or ModelParams()
        self.concurrency = max(1, concurrency)
        self.include_mode = include_mode
        self.lexicon_dir = linter.cfg.lexicon_dir

    def lint(self, questionnaire: Questionnaire) -> Dict[str, List[Finding]]:
        """Findings per question id, in questionnaire order"""
        meta = questionnaire.meta
        with ThreadPoolExecutor(max_workers=self.concurrency) as pool:
            results = list(pool.map(lambda q: self.linter.lint_question(q, meta), questionnaire.questions))
        total = sum(len(r) for r in results)
        logger.info(f"Linted {len(results)} questions: {total} findings")
        return {q.id: findings for q, findings in zip(questionnaire.questions, results)}

    def build_prompts(self, questionnaire: Questionnaire, level: PromptLevel,
                      profile: Optional[str] = None) -> List[PromptSpec]:
        """Render every prompt; precondition errors surface before any completion"""
        return [
            build_prompt(level, q, questionnaire.meta, profile, self.params, self.include_mode)
            for q in questionnaire.questions
        ]

    def run(self, questionnaire: Questionnaire, level: PromptLevel,
            profile: Optional[str] = None,
            expert: Optional[Mapping[str, str]] = None,
            run_id: Optional[str] = None) -> PretestRun:
        """
        Run a full pretest round

        Args:
            questionnaire: Instrument to pretest
            level: Prompt protocol
            profile: Participant profile for role play
            expert: Expert proposals by question id
            run_id: Report name (timestamp-derived when None)

        Returns:
            PretestRun with one record per question

        Raises:
            PromptError before any completion; LLMClientError or TranscriptError from completions
        """
        if self.client is None:
            raise ValueError("A completion client is required to run a pretest")
        started_at = _now()
        run_id = run_id or default_run_id()
        expert = expert or {}

        prompts = self.build_prompts(questionnaire, level, profile)
        findings = self.lint(questionnaire)
        logger.info(f"Run {run_id}: {len(prompts)} {level.value} prompts, mode {self.mode.value}")

        with ThreadPoolExecutor(max_workers=self.concurrency) as pool:
            completions = list(pool.map(self._complete, prompts))

        records = [
            self._record(question, spec, completion.text, findings[question.id], expert.get(question.id))
            for question, spec, completion in zip(questionnaire.questions, prompts, completions)
        ]

        run = PretestRun(
            questionnaire=questionnaire,
            records=tuple(records),
            level=level,
            tool_version=__version__,
            transcript_digests=tuple(sorted({spec.digest for spec in prompts})),
            run_id=run_id,
            started_at=started_at,
            finished_at=_now(),
        )
        logger.info(f"Run {run_id} finished")
        return run

    def _complete(self, spec: PromptSpec):
        request = CompletionRequest.for_prompt(spec.text, spec.params)
        return self.client.complete(request, self.mode, self.store)

    def _record(self, question: Question, spec: PromptSpec, text: str,
                findings: List[Finding], expert_proposal: Optional[str]) -> QuestionRecord:
        feedback = parse_feedback(text, self.lexicon_dir)

        revision_diffs = ()
        agreement = None
        if feedback.revised_stem:
            revision_diffs = (diff_revision(question.stem, feedback.revised_stem, self.lexicon_dir),)
            if expert_proposal:
                agreement = compare_proposals(
                    question.stem, feedback.revised_stem, expert_proposal, self.lexicon_dir
                )

        category_diff = None
        if feedback.revised_categories and question.categories:
            category_diff = diff_categories(question.categories, feedback.revised_categories)

        judgments = cross_check(findings, feedback, self.lexicon_dir)
        logger.debug(
            f"Question {question.id}: {len(feedback.suggestions)} suggestions, {len(judgments)} judgment items"
        )
        return QuestionRecord(
            question_id=question.id,
            findings=tuple(findings),
            prompts=(spec,),
            feedbacks=(feedback,),
            revision_diffs=revision_diffs,
            category_diff=category_diff,
            expert_proposal=expert_proposal,
            agreement=agreement,
            judgments=tuple(judgments),
        )
