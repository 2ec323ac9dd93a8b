"""Shared fixtures: fixture questionnaires and a replay transcript built from it"""

import json
from pathlib import Path

import pytest

from models.completion import ClientMode, CompletionRequest, ModelParams
from models.prompt import PromptLevel
from services.linter import Linter
from services.llm_client import LLMClient
from services.pretest_pipeline import PretestPipeline
from services.prompt_builder import build_prompt
from services.questionnaire_io import load_questionnaire
from services.transcript_store import TranscriptStore

FIXTURES = Path(__file__).parent / "fixtures"
RECORDED_AT = "2024-01-01T00:00:00+00:00"
IMPROVED_VERSION = "\n\nImproved version: "


@pytest.fixture(scope="session")
def corpus():
    with open(FIXTURES / "recorded_answers.json", encoding="utf-8") as f:
        return json.load(f)


@pytest.fixture(scope="session")
def campus():
    return load_questionnaire(FIXTURES / "campus.q.json")


@pytest.fixture(scope="session")
def rule_cases():
    return load_questionnaire(FIXTURES / "rule_cases.q.json")


@pytest.fixture(scope="session")
def clean():
    return load_questionnaire(FIXTURES / "clean.q.json")


@pytest.fixture(scope="session")
def role_play_answers(corpus):
    """Question id -> role-play response text as the model returned it"""
    return {
        entry['question_id']: entry['feedback'] + IMPROVED_VERSION + entry['ai_proposal']
        for entry in corpus['role_play']
    }


@pytest.fixture(scope="session")
def answer_transcript(tmp_path_factory, corpus, campus, rule_cases, role_play_answers):
    """Transcript file answering every task prompt for T1 and every role-play prompt for the rule cases"""
    params = ModelParams()
    store = TranscriptStore()

    question = campus.get(corpus['task_levels']['question_id'])
    for level, text in corpus['task_levels']['feedback'].items():
        spec = build_prompt(PromptLevel.from_cli(level), question, campus.meta, params=params)
        store.put(spec.digest, CompletionRequest.for_prompt(spec.text, params), text, RECORDED_AT)

    for question in rule_cases.questions:
        spec = build_prompt(PromptLevel.ROLE_PLAY_GENERAL, question, rule_cases.meta, params=params)
        store.put(spec.digest, CompletionRequest.for_prompt(spec.text, params),
                  role_play_answers[question.id], RECORDED_AT)

    path = tmp_path_factory.mktemp("transcripts") / "answers.transcript.json"
    store.save(path)
    return path


@pytest.fixture
def replay_pipeline(answer_transcript):
    """Pipeline answering from the recorded answers; it never reaches the network"""
    client = LLMClient(base_url="https://llm.test", api_key="unused")
    store = TranscriptStore.load(answer_transcript)
    return PretestPipeline(Linter(), client, store, ClientMode.REPLAY)
