"""Parsing AI pretest answers into suggestions and revisions"""

import pytest

from models.feedback import SuggestionKind as K
from services.feedback_parser import classify_suggestion, parse_feedback

TASK_KINDS = {
    "1": [K.CLARIFY_TERM, K.SPECIFY_LOCATION, K.REVISE_CATEGORIES, K.ADD_TIMEFRAME, K.NEUTRAL_TONE],
    "2": [K.CLARIFY_TERM, K.REVISE_CATEGORIES, K.MUTUAL_EXCLUSIVITY, K.ADD_TIMEFRAME],
    "3": [K.CLARIFY_TERM, K.REVISE_CATEGORIES, K.REVISE_CATEGORIES, K.ADD_TIMEFRAME, K.SPECIFY_LOCATION],
    "4": [K.SIMPLIFY_WORDING, K.REVISE_CATEGORIES, K.CLARIFY_TERM],
}

ROLE_PLAY_KINDS = {
    "L1": K.CLARIFY_TERM,
    "L2": K.CLARIFY_TERM,
    "L3": K.CLARIFY_TERM,
    "L4": K.SIMPLIFY_WORDING,
    "L5": K.OTHER,
    "L6": K.ADD_SCALE,
    "L7": K.CLARIFY_TERM,
}


@pytest.mark.parametrize("level, count", [("1", 5), ("2", 4), ("3", 5), ("4", 3)])
def test_task_feedback_counts(corpus, level, count):
    feedback = parse_feedback(corpus['task_levels']['feedback'][level])
    assert len(feedback.suggestions) == count
    assert [s.index for s in feedback.suggestions] == list(range(1, count + 1))


@pytest.mark.parametrize("level", sorted(TASK_KINDS))
def test_task_feedback_kinds(corpus, level):
    feedback = parse_feedback(corpus['task_levels']['feedback'][level])
    assert [s.kind for s in feedback.suggestions] == TASK_KINDS[level]


def test_titles_and_bodies(corpus):
    feedback = parse_feedback(corpus['task_levels']['feedback']["1"])
    first = feedback.suggestions[0]
    assert first.title == 'Clarify the Definition of "Activities"'
    assert first.body.startswith("Specify what types of activities")
    assert first.marker == "1."
    assert first.label == first.title


def test_long_heading_is_not_a_title(corpus):
    first = parse_feedback(corpus['task_levels']['feedback']["4"]).suggestions[0]
    assert first.title is None
    assert first.body.startswith("Rephrase the question")


def test_revised_categories_from_category_advice(corpus):
    feedback = parse_feedback(corpus['task_levels']['feedback']["4"])
    assert feedback.revised_categories == (
        "Never", "Less than once a month", "1-3 times a month", "Once a week",
        "2-3 times a week", "4-5 times a week", "Daily",
    )
    assert feedback.revised_stem is None


@pytest.mark.parametrize("level", ["1", "2", "3", "4"])
def test_task_feedback_is_lossless(corpus, level):
    raw = corpus['task_levels']['feedback'][level]
    feedback = parse_feedback(raw)
    assert feedback.raw == raw
    assert feedback.preamble + "".join(s.text for s in feedback.suggestions) + feedback.revision_segment == raw


@pytest.mark.parametrize("question_id", sorted(ROLE_PLAY_KINDS))
def test_role_play_answers(role_play_answers, question_id):
    feedback = parse_feedback(role_play_answers[question_id])
    assert len(feedback.suggestions) == 1
    assert feedback.suggestions[0].kind is ROLE_PLAY_KINDS[question_id]
    assert feedback.suggestions[0].marker == ""
    assert feedback.preamble + feedback.suggestions[0].text + feedback.revision_segment == feedback.raw


@pytest.mark.parametrize("entry", range(5))
def test_role_play_revision_is_the_ai_proposal(corpus, role_play_answers, entry):
    row = corpus['role_play'][entry]
    feedback = parse_feedback(role_play_answers[row['question_id']])
    assert feedback.revised_stem == row['ai_proposal']
    assert feedback.revision_segment.startswith("Improved version:")


def test_revision_with_bulleted_scale(corpus, role_play_answers):
    proposal = corpus['role_play'][5]['ai_proposal']
    feedback = parse_feedback(role_play_answers["L6"])
    assert feedback.revised_stem == proposal.split("\n")[0]
    assert feedback.revised_categories == (
        "Strongly agree", "Somewhat agree", "Neither agree nor disagree",
        "Somewhat disagree", "Strongly disagree",
    )


def test_proposal_placeholder_is_not_a_revision(corpus):
    raw = corpus['role_play'][4]['feedback']
    feedback = parse_feedback(raw)
    assert "[Proposal]" in raw
    assert feedback.revised_stem is None
    assert len(feedback.suggestions) == 1


def test_heres_a_revised_version_with_quote():
    raw = 'The wording is fine. Here\'s a revised version that is shorter "How often do you walk?" It keeps the meaning.'
    feedback = parse_feedback(raw)
    assert feedback.revised_stem == "How often do you walk?"
    assert "Here's a revised version" not in feedback.suggestions[0].body


def test_trailing_quoted_question():
    feedback = parse_feedback('Consider asking: "How many days did you walk last week?"')
    assert feedback.revised_stem == "How many days did you walk last week?"


def test_inline_bullets_after_revision():
    feedback = parse_feedback("Too vague.\n\nImproved version: How often do you walk? - Never - Once a week - Daily")
    assert feedback.revised_stem == "How often do you walk?"
    assert feedback.revised_categories == ("Never", "Once a week", "Daily")


def test_numbering_must_be_sequential():
    feedback = parse_feedback("1. First point. 3. Third? 2. Second point.")
    assert [s.marker for s in feedback.suggestions] == ["1.", "2."]
    assert "3. Third?" in feedback.suggestions[0].body


@pytest.mark.parametrize("raw", ["", "   \n"])
def test_empty_answer(raw):
    feedback = parse_feedback(raw)
    assert feedback.suggestions == ()
    assert feedback.raw == raw


def test_classification_falls_back_to_other():
    assert classify_suggestion("Clarify", "the wording") is K.CLARIFY_TERM
    assert classify_suggestion(None, "It reads well.") is K.OTHER


def test_keyword_families_come_from_the_lexicon_directory(tmp_path):
    (tmp_path / "feedback_keywords.txt").write_text(
        "# custom families\nAddScale = \\bwidgets?\\b\nBogus = anything\n", encoding='utf-8'
    )
    assert classify_suggestion(None, "Offer more widgets", tmp_path) is K.ADD_SCALE
    assert classify_suggestion(None, "Clarify the term", tmp_path) is K.OTHER
