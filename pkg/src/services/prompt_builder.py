"""
Prompt Builder Service
Renders the pretest prompts: four sequential context levels and role play
"""

import logging
from typing import List, Optional, Tuple

from models.completion import CompletionRequest, ModelParams
from models.prompt import PromptLevel, PromptSpec
from models.questionnaire import Question, StudyMeta, SurveyMode
from services.llm_client import request_digest

logger = logging.getLogger(__name__)

# Templates are byte-exact; do not reflow
TASK_INTRO = (
    "This is part of a questionnaire pretest. "
    "Provide feedback to improve the following question and its categories."
)
AIM_SENTENCE = "The study aims to {aim}."
POPULATION_SENTENCE = "The population of the study is {population}."
MODE_SENTENCE = "The survey mode is {mode}."
PRINCIPLES_SENTENCE = (
    "In addition to general principles, you should consider taking into account the following: "
    "{principles}."
)
NO_REVISION = "You do not need to give me a revised version, only the feedback: {question}"

GENERAL_PARTICIPANT = "a participant from the general population"
ROLE_PLAY = (
    "We want to do a questionnaire pretest with you. "
    "Imagine you are {participant} and evaluate the unambiguity and comprehensibility "
    "of the question. Less cognitive effort and ambiguity may reduce comprehension "
    "difficulties and response error. Then, provide an improved version at the end of "
    "your comment as an expert, but only if it can be improved. "
    "This is the question: {question}"
)

PRINCIPLES: Tuple[str, ...] = (
    "avoid jargon, and abbreviations",
    "avoid ambiguity, confusion, and vagueness",
    "avoid emotional language and prestige bias",
    "avoid double-barreled questions",
    "avoid leading questions",
    "avoid asking questions that are beyond respondents' capabilities",
    "avoid false premises",
    "avoid asking about future intentions",
    "avoid double negatives",
    "avoid overlapping or unbalanced response categories",
)


class PromptError(ValueError):
    """A prompt level's preconditions are not met"""


class MissingAim(PromptError):
    def __init__(self, level: PromptLevel):
        super().__init__(f"{level.value} needs the study aim")


class MissingPopulation(PromptError):
    def __init__(self, level: PromptLevel):
        super().__init__(f"{level.value} needs the study population")


class EmptyProfile(PromptError):
    def __init__(self):
        super().__init__("RolePlayProfile needs a non-empty profile")


def principle_catalog() -> Tuple[str, ...]:
    """The ten question-writing principles, in prompt order"""
    return PRINCIPLES


def render_template(template: str, **values: str) -> str:
    """Substitute {name} slots without interpreting braces in the values"""
    result = template
    for key, value in values.items():
        result = result.replace(f"{{{key}}}", value)
    return result


def render_question_block(question: Question) -> str:
    """Stem followed by inline numbered categories: 'stem (1) a, (2) b'"""
    if not question.categories:
        return question.stem
    listing = ", ".join(f"({n}) {label}" for n, label in enumerate(question.categories, start=1))
    return f"{question.stem} {listing}"


def check_preconditions(level: PromptLevel, meta: StudyMeta, profile: Optional[str] = None):
    """
    Raise when a level cannot be rendered

    Raises:
        MissingAim, MissingPopulation, EmptyProfile
    """
    if level.needs_aim and not meta.aim:
        raise MissingAim(level)
    if level.needs_population and not meta.population:
        raise MissingPopulation(level)
    if level is PromptLevel.ROLE_PLAY_PROFILE and not (profile or "").strip():
        raise EmptyProfile()


def build_prompt(level: PromptLevel, question: Question, meta: StudyMeta,
                 profile: Optional[str] = None,
                 params: Optional[ModelParams] = None,
                 include_mode: bool = False) -> PromptSpec:
    """
    Render the prompt for one question at one protocol level

    Args:
        level: Protocol level
        question: Question to pretest
        meta: Study context supplying aim, population and mode
        profile: Participant description for RolePlayProfile
        params: Model parameters that enter the digest
        include_mode: Add the survey-mode sentence to the task levels

    Returns:
        PromptSpec with the rendered text and its request digest
    """
    check_preconditions(level, meta, profile)
    params = params or ModelParams()
    block = render_question_block(question)

    if level.is_role_play:
        participant = profile.strip() if level is PromptLevel.ROLE_PLAY_PROFILE else GENERAL_PARTICIPANT
        text = render_template(ROLE_PLAY, participant=participant, question=block)
    else:
        text = " ".join(_task_sentences(level, meta, include_mode) + [render_template(NO_REVISION, question=block)])

    digest = request_digest(CompletionRequest.for_prompt(text, params))
    logger.debug(f"Built {level.value} prompt for {question.id} ({digest[:12]})")
    return PromptSpec(
        level=level,
        text=text,
        question_id=question.id,
        digest=digest,
        params=params,
        profile=profile.strip() if level is PromptLevel.ROLE_PLAY_PROFILE else None,
    )


def _task_sentences(level: PromptLevel, meta: StudyMeta, include_mode: bool) -> List[str]:
    sentences = [TASK_INTRO]
    if level.needs_aim:
        sentences.append(render_template(AIM_SENTENCE, aim=meta.aim))
    if level.needs_population:
        sentences.append(render_template(POPULATION_SENTENCE, population=meta.population))
    if include_mode and level is not PromptLevel.TASK_ONLY and meta.mode is not SurveyMode.UNSPECIFIED:
        sentences.append(render_template(MODE_SENTENCE, mode=meta.mode.prose))
    if level is PromptLevel.TASK_AIM_POPULATION_PRINCIPLES:
        sentences.append(render_template(PRINCIPLES_SENTENCE, principles="; ".join(PRINCIPLES)))
    return sentences
