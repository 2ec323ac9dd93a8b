"""
Questionnaire I/O Service
Parses, validates and serializes questionnaire documents (UTF-8 JSON)
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from models.questionnaire import (
    Question, QuestionKind, Questionnaire, StructuralIssue, StudyMeta, SurveyMode
)

logger = logging.getLogger(__name__)

_ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")

_DOCUMENT_KEYS = {'meta', 'questions'}
_META_KEYS = {'aim', 'mode', 'population'}
_QUESTION_KEYS = {'id', 'stem', 'kind', 'categories'}


class QuestionnaireError(ValueError):
    """Base class for questionnaire document errors"""

    def __init__(self, message: str, location: str):
        super().__init__(f"{location}: {message}")
        self.location = location


class MalformedDocument(QuestionnaireError):
    """Syntax error or unexpected structure"""


class DuplicateQuestionId(QuestionnaireError):
    """Two questions share an id"""


class DuplicateCategoryLabel(QuestionnaireError):
    """A question lists the same category twice (case-insensitive)"""


class EmptyStem(QuestionnaireError):
    """A question stem is empty or whitespace"""


def parse_questionnaire(document: str) -> Questionnaire:
    """
    Parse a questionnaire document

    Args:
        document: JSON text with 'meta' and 'questions'

    Returns:
        Questionnaire with all invariants checked

    Raises:
        QuestionnaireError subclass naming the offending location
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as e:
        raise MalformedDocument(e.msg, f"line {e.lineno} column {e.colno}") from e

    if not isinstance(data, dict):
        raise MalformedDocument("document must be an object", "$")
    _reject_unknown(data, _DOCUMENT_KEYS, "$")

    meta = _parse_meta(data.get('meta', {}))

    raw_questions = data.get('questions', [])
    if not isinstance(raw_questions, list):
        raise MalformedDocument("'questions' must be a list", "$.questions")

    questions: List[Question] = []
    seen_ids = set()
    for position, raw in enumerate(raw_questions):
        question = _parse_question(raw, f"$.questions[{position}]")
        if question.id in seen_ids:
            raise DuplicateQuestionId(f"duplicate question id {question.id!r}", f"$.questions[{position}].id")
        seen_ids.add(question.id)
        questions.append(question)

    questionnaire = Questionnaire(meta=meta, questions=tuple(questions))
    logger.debug(f"Parsed questionnaire with {len(questions)} questions")
    return questionnaire


def load_questionnaire(path: Union[str, Path]) -> Questionnaire:
    """Read and parse a questionnaire file (OSError propagates)"""
    with open(path, 'r', encoding='utf-8') as f:
        document = f.read()
    questionnaire = parse_questionnaire(document)
    logger.info(f"Loaded {len(questionnaire.questions)} questions from {path}")
    return questionnaire


def serialize_questionnaire(questionnaire: Questionnaire) -> str:
    """Serialize to a document that parses back to an equal value"""
    return json.dumps(questionnaire.to_dict(), indent=2, ensure_ascii=False) + "\n"


def validate_structure(questionnaire: Questionnaire) -> List[StructuralIssue]:
    """List the structural gaps that limit prompt levels or scale checks"""
    issues: List[StructuralIssue] = []
    meta = questionnaire.meta

    if meta.aim is None:
        issues.append(StructuralIssue('missing-aim', "aim required for prompt levels 2–4"))
    if meta.population is None:
        issues.append(StructuralIssue('missing-population', "population required for prompt levels 3–4"))

    for question in questionnaire.questions:
        if question.kind.is_closed and len(question.categories) < 2:
            issues.append(StructuralIssue(
                'too-few-categories', "closed question needs ≥ 2 categories", question.id
            ))
        elif question.kind is QuestionKind.OPEN and question.categories:
            issues.append(StructuralIssue(
                'open-with-categories', "open question should not list categories", question.id
            ))

    return issues


def _reject_unknown(data: Dict, allowed: set, location: str):
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise MalformedDocument(f"unknown field(s) {', '.join(unknown)}", location)


def _optional_text(value: Any, location: str) -> Optional[str]:
    if value is None:
        return None
    if not isinstance(value, str):
        raise MalformedDocument("expected a string", location)
    if not value.strip():
        raise MalformedDocument("must be non-empty when present", location)
    return value


def _parse_meta(raw: Any) -> StudyMeta:
    if not isinstance(raw, dict):
        raise MalformedDocument("'meta' must be an object", "$.meta")
    _reject_unknown(raw, _META_KEYS, "$.meta")

    try:
        mode = SurveyMode(raw.get('mode', SurveyMode.UNSPECIFIED.value))
    except ValueError:
        raise MalformedDocument(f"unknown survey mode {raw.get('mode')!r}", "$.meta.mode") from None

    return StudyMeta(
        aim=_optional_text(raw.get('aim'), "$.meta.aim"),
        mode=mode,
        population=_optional_text(raw.get('population'), "$.meta.population"),
    )


def _parse_question(raw: Any, location: str) -> Question:
    if not isinstance(raw, dict):
        raise MalformedDocument("question must be an object", location)
    _reject_unknown(raw, _QUESTION_KEYS, location)

    question_id = raw.get('id')
    if not isinstance(question_id, str) or not _ID_RE.match(question_id):
        raise MalformedDocument(f"invalid question id {question_id!r}", f"{location}.id")

    stem = raw.get('stem')
    if not isinstance(stem, str):
        raise MalformedDocument("'stem' must be a string", f"{location}.stem")
    if not stem.strip():
        raise EmptyStem(f"question {question_id} has an empty stem", f"{location}.stem")

    try:
        kind = QuestionKind(raw.get('kind', QuestionKind.OTHER.value))
    except ValueError:
        raise MalformedDocument(f"unknown question kind {raw.get('kind')!r}", f"{location}.kind") from None

    categories = raw.get('categories', [])
    if not isinstance(categories, list) or not all(isinstance(c, str) for c in categories):
        raise MalformedDocument("'categories' must be a list of strings", f"{location}.categories")

    seen = set()
    for index, label in enumerate(categories):
        if not label.strip():
            raise MalformedDocument("empty category label", f"{location}.categories[{index}]")
        key = label.strip().casefold()
        if key in seen:
            raise DuplicateCategoryLabel(
                f"question {question_id} lists {label.strip()!r} twice",
                f"{location}.categories[{index}]",
            )
        seen.add(key)

    return Question(id=question_id, stem=stem, categories=tuple(categories), kind=kind)
