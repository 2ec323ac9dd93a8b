"""Completion client: live calls over requests, retries, record and replay"""

import logging

import pytest
import requests

from models.completion import ClientMode, CompletionRequest
from services.llm_client import (
    API_KEY_ENV, AuthMissing, LLMClient, NetworkFailure, RateLimited, TranscriptMiss, request_digest,
)
from services.transcript_store import TranscriptError, TranscriptStore

URL = "https://llm.test/v1/chat/completions"
REQUEST = CompletionRequest("Evaluate this question: How often?")


def _body(text="Looks fine.", model="gpt-4-0613"):
    return {
        'model': model,
        'choices': [{'message': {'role': 'assistant', 'content': text}}],
        'usage': {'prompt_tokens': 12, 'completion_tokens': 3},
    }


@pytest.fixture
def sleeps():
    return []


@pytest.fixture
def client(sleeps):
    return LLMClient(base_url="https://llm.test", api_key="test-key", sleep=sleeps.append)


def test_live_completion(requests_mock, client):
    requests_mock.post(URL, json=_body())
    result = client.complete(REQUEST, ClientMode.LIVE)

    assert result.text == "Looks fine."
    assert result.model == "gpt-4-0613"
    assert result.token_usage == {'prompt_tokens': 12, 'completion_tokens': 3}
    assert result.digest == request_digest(REQUEST)
    assert not result.from_transcript

    sent = requests_mock.last_request
    assert sent.headers['Authorization'] == "Bearer test-key"
    assert sent.json() == {
        'model': "gpt-4",
        'temperature': 0.7,
        'max_tokens': 1024,
        'messages': [{'role': 'user', 'content': REQUEST.prompt}],
    }


def test_api_key_from_environment(requests_mock, monkeypatch):
    monkeypatch.setenv(API_KEY_ENV, "env-key")
    requests_mock.post(URL, json=_body())
    LLMClient(base_url="https://llm.test").complete(REQUEST, ClientMode.LIVE)
    assert requests_mock.last_request.headers['Authorization'] == "Bearer env-key"


def test_missing_credentials(requests_mock, monkeypatch):
    monkeypatch.delenv(API_KEY_ENV, raising=False)
    with pytest.raises(AuthMissing):
        LLMClient(base_url="https://llm.test").complete(REQUEST, ClientMode.LIVE)
    assert not requests_mock.called


def test_rate_limit_is_retried_with_retry_after(requests_mock, client, sleeps):
    requests_mock.post(URL, [
        {'status_code': 429, 'headers': {'Retry-After': "2"}},
        {'json': _body("Second try.")},
    ])
    assert client.complete(REQUEST, ClientMode.LIVE).text == "Second try."
    assert sleeps == [2.0]
    assert requests_mock.call_count == 2


def test_rate_limit_exhausts_retries(requests_mock, client, sleeps):
    requests_mock.post(URL, status_code=429)
    with pytest.raises(RateLimited):
        client.complete(REQUEST, ClientMode.LIVE)
    assert requests_mock.call_count == 3
    assert sleeps == [1.0, 2.0]


def test_retry_is_logged(requests_mock, client, caplog):
    requests_mock.post(URL, [{'status_code': 429}, {'json': _body()}])
    with caplog.at_level(logging.WARNING, logger="services.llm_client"):
        client.complete(REQUEST, ClientMode.LIVE)
    assert "Retrying in 1s" in caplog.text


def test_transport_error_is_retried(requests_mock, client, sleeps):
    requests_mock.post(URL, [
        {'exc': requests.exceptions.ConnectionError},
        {'exc': requests.exceptions.Timeout},
        {'json': _body()},
    ])
    assert client.complete(REQUEST, ClientMode.LIVE).text == "Looks fine."
    assert sleeps == [1.0, 2.0]


def test_server_error_is_not_retried(requests_mock, client):
    requests_mock.post(URL, status_code=500)
    with pytest.raises(NetworkFailure) as excinfo:
        client.complete(REQUEST, ClientMode.LIVE)
    assert excinfo.value.status == 500
    assert requests_mock.call_count == 1


@pytest.mark.parametrize("body", [{'choices': []}, {'choices': [{'message': {'content': None}}]}, {}])
def test_malformed_payload(requests_mock, client, body):
    requests_mock.post(URL, json=body)
    with pytest.raises(NetworkFailure):
        client.complete(REQUEST, ClientMode.LIVE)


def test_non_json_payload(requests_mock, client):
    requests_mock.post(URL, text="<html>gateway</html>")
    with pytest.raises(NetworkFailure):
        client.complete(REQUEST, ClientMode.LIVE)


def test_record_persists_the_answer(requests_mock, client, tmp_path):
    path = tmp_path / "run.transcript.json"
    requests_mock.post(URL, json=_body("Recorded answer."))

    client.complete(REQUEST, ClientMode.RECORD, TranscriptStore(path))

    entry = TranscriptStore.load(path).get(request_digest(REQUEST))
    assert entry.response == "Recorded answer."
    assert entry.prompt == REQUEST.prompt


def test_replay_never_touches_the_network(requests_mock, client):
    store = TranscriptStore()
    store.put(request_digest(REQUEST), REQUEST, "Stored answer.", "2024-01-01T00:00:00+00:00")

    result = client.complete(REQUEST, ClientMode.REPLAY, store)

    assert result.text == "Stored answer."
    assert result.from_transcript
    assert not requests_mock.called


def test_replay_miss(requests_mock, client):
    other = CompletionRequest(REQUEST.prompt, temperature=0.2)
    store = TranscriptStore()
    store.put(request_digest(REQUEST), REQUEST, "Stored answer.")

    with pytest.raises(TranscriptMiss) as excinfo:
        client.complete(other, ClientMode.REPLAY, store)
    assert excinfo.value.digest == request_digest(other)
    assert not requests_mock.called


@pytest.mark.parametrize("mode", [ClientMode.REPLAY, ClientMode.RECORD])
def test_modes_needing_a_store(client, mode):
    with pytest.raises(TranscriptError):
        client.complete(REQUEST, mode, None)


def test_digest_is_stable_and_parameter_sensitive():
    same = CompletionRequest(REQUEST.prompt)
    assert request_digest(same) == request_digest(REQUEST)
    assert REQUEST.canonical == f"gpt-4\n0.70\n1024\n{REQUEST.prompt}"
    assert request_digest(CompletionRequest(REQUEST.prompt, max_tokens=10)) != request_digest(REQUEST)
    assert request_digest(CompletionRequest(REQUEST.prompt, model="other")) != request_digest(REQUEST)


def test_invalid_settings():
    with pytest.raises(ValueError):
        LLMClient(max_retries=0)
    with pytest.raises(ValueError):
        CompletionRequest("")
    with pytest.raises(ValueError):
        CompletionRequest("x", temperature=3)


def test_from_settings():
    client = LLMClient.from_settings({'base_url': "https://llm.test/", 'max_retries': 5}, api_key="k")
    assert client.url == URL
    assert client.max_retries == 5
