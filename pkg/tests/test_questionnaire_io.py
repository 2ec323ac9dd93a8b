"""Questionnaire parsing, validation and serialization"""

import json
import random
from pathlib import Path

import pytest

from models.questionnaire import Question, QuestionKind, Questionnaire, StudyMeta, SurveyMode
from services.questionnaire_io import (
    DuplicateCategoryLabel, DuplicateQuestionId, EmptyStem, MalformedDocument,
    load_questionnaire, parse_questionnaire, serialize_questionnaire, validate_structure,
)

FIXTURES = Path(__file__).parent / "fixtures"


def _document(**overrides):
    data = {
        'meta': {'aim': "study sleep", 'population': "adults", 'mode': "telephone"},
        'questions': [
            {'id': "Q1", 'stem': "How often do you nap?", 'kind': "closed-frequency",
             'categories': ["Never", "Once a week"]},
        ],
    }
    data.update(overrides)
    return json.dumps(data)


def test_load_campus(campus):
    assert campus.meta.population == "university students"
    assert campus.meta.mode is SurveyMode.UNSPECIFIED
    question = campus.get("T1")
    assert question.kind is QuestionKind.CLOSED_FREQUENCY
    assert question.categories == ("Never", "1-2 days a week", "3-4 days a week")


def test_load_rule_cases_keeps_question_order(rule_cases):
    assert [q.id for q in rule_cases.questions] == [f"L{n}" for n in range(1, 8)]
    assert rule_cases.meta.aim is None


def test_defaults_for_omitted_fields():
    questionnaire = parse_questionnaire('{"questions": [{"id": "a", "stem": "Why?"}]}')
    question = questionnaire.questions[0]
    assert question.kind is QuestionKind.OTHER
    assert question.categories == ()
    assert questionnaire.meta == StudyMeta()


def test_syntax_error_reports_line():
    with pytest.raises(MalformedDocument) as excinfo:
        parse_questionnaire('{"questions": [')
    assert excinfo.value.location.startswith("line 1")


def test_duplicate_question_id_location():
    questions = [{'id': "Q1", 'stem': "A?"}, {'id': "Q1", 'stem': "B?"}]
    with pytest.raises(DuplicateQuestionId) as excinfo:
        parse_questionnaire(_document(questions=questions))
    assert excinfo.value.location == "$.questions[1].id"


def test_duplicate_category_is_case_insensitive():
    questions = [{'id': "Q1", 'stem': "A?", 'categories': ["Never", " never "]}]
    with pytest.raises(DuplicateCategoryLabel) as excinfo:
        parse_questionnaire(_document(questions=questions))
    assert excinfo.value.location == "$.questions[0].categories[1]"


def test_empty_stem():
    with pytest.raises(EmptyStem) as excinfo:
        parse_questionnaire(_document(questions=[{'id': "Q1", 'stem': "   "}]))
    assert excinfo.value.location == "$.questions[0].stem"


@pytest.mark.parametrize("document, location", [
    (_document(extra=1), "$"),
    (_document(meta={'mode': "carrier pigeon"}), "$.meta.mode"),
    (_document(meta={'aim': ""}), "$.meta.aim"),
    (_document(questions=[{'id': "Q 1", 'stem': "A?"}]), "$.questions[0].id"),
    (_document(questions=[{'id': "Q1", 'stem': "A?", 'kind': "ranking"}]), "$.questions[0].kind"),
    (_document(questions=[{'id': "Q1", 'stem': "A?", 'categories': "Never"}]), "$.questions[0].categories"),
    ("[]", "$"),
])
def test_malformed_documents(document, location):
    with pytest.raises(MalformedDocument) as excinfo:
        parse_questionnaire(document)
    assert excinfo.value.location == location


def test_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        load_questionnaire(tmp_path / "absent.q.json")


def test_validate_structure_flags_missing_context(campus, rule_cases):
    assert validate_structure(campus) == []
    codes = [issue.code for issue in validate_structure(rule_cases)]
    assert codes == ['missing-aim', 'missing-population']


def test_validate_structure_question_issues():
    questionnaire = Questionnaire(
        meta=StudyMeta(aim="x", population="y"),
        questions=(
            Question("A", "How often?", ("Never",), QuestionKind.CLOSED_FREQUENCY),
            Question("B", "Why?", ("Because",), QuestionKind.OPEN),
        ),
    )
    issues = validate_structure(questionnaire)
    assert [(i.question_id, i.code) for i in issues] == [
        ("A", 'too-few-categories'), ("B", 'open-with-categories'),
    ]


def test_fixture_round_trip():
    for name in ("campus.q.json", "rule_cases.q.json", "clean.q.json"):
        questionnaire = load_questionnaire(FIXTURES / name)
        assert parse_questionnaire(serialize_questionnaire(questionnaire)) == questionnaire


_WORDS = ("how", "often", "do", "you", "visit", "the", "park", "café", "Zoë", "\"quoted\"", "{braces}")


def _random_questionnaire(rng: random.Random) -> Questionnaire:
    meta = StudyMeta(
        aim=rng.choice([None, "learn about " + rng.choice(_WORDS)]),
        mode=rng.choice(list(SurveyMode)),
        population=rng.choice([None, "students", "adults in Köln"]),
    )
    questions = []
    for n in range(rng.randint(0, 6)):
        stem = " ".join(rng.choice(_WORDS) for _ in range(rng.randint(1, 12))) + "?"
        labels = [f"{rng.choice(_WORDS)} {k}" for k in range(rng.randint(0, 5))]
        questions.append(Question(f"q{n}", stem, tuple(labels), rng.choice(list(QuestionKind))))
    return Questionnaire(meta, tuple(questions))


def test_random_round_trip():
    rng = random.Random(20240101)
    for _ in range(200):
        questionnaire = _random_questionnaire(rng)
        assert parse_questionnaire(serialize_questionnaire(questionnaire)) == questionnaire


@pytest.mark.parametrize("fixture", ["campus", "rule_cases", "clean"])
def test_validate_structure_is_pure(request, fixture):
    questionnaire = request.getfixturevalue(fixture)
    before = serialize_questionnaire(questionnaire)

    first = validate_structure(questionnaire)
    assert validate_structure(questionnaire) == first
    assert serialize_questionnaire(questionnaire) == before
