"""
LLM Client Service
Chat-completion client with bounded retries and record/replay transcripts
"""

import hashlib
import logging
import os
import threading
import time
from typing import Callable, Dict, Optional, Tuple

import requests

from models.completion import ClientMode, CompletionRequest, CompletionResult
from services.transcript_store import TranscriptError, TranscriptStore

logger = logging.getLogger(__name__)

API_KEY_ENV = "PRETEST_API_KEY"


class LLMClientError(Exception):
    """Base class for completion failures"""


class AuthMissing(LLMClientError):
    """No credentials for a live call"""

    def __init__(self):
        super().__init__(f"Environment variable {API_KEY_ENV} is not set")


class NetworkFailure(LLMClientError):
    """Transport failure or unusable provider response"""

    def __init__(self, message: str, status: Optional[int] = None):
        super().__init__(message)
        self.status = status


class RateLimited(LLMClientError):
    """Provider kept refusing with 429"""

    def __init__(self, retry_after: Optional[float] = None):
        hint = f" (retry after {retry_after:g}s)" if retry_after is not None else ""
        super().__init__(f"Rate limited by provider{hint}")
        self.retry_after = retry_after


class TranscriptMiss(LLMClientError):
    """Replay found no entry for the request digest"""

    def __init__(self, digest: str):
        super().__init__(f"No transcript entry for digest {digest}")
        self.digest = digest


def request_digest(request: CompletionRequest) -> str:
    """SHA-256 (hex) over model, temperature (2 decimals), max_tokens and prompt"""
    return hashlib.sha256(request.canonical.encode('utf-8')).hexdigest()


class ChatCompletionAdapter:
    """OpenAI-compatible chat-completion wire format"""

    def build_payload(self, request: CompletionRequest) -> Dict:
        return {
            'model': request.model,
            'temperature': request.temperature,
            'max_tokens': request.max_tokens,
            'messages': [{'role': 'user', 'content': request.prompt}],
        }

    def parse_response(self, body: Dict) -> Tuple[str, str, Dict[str, int]]:
        """
        Extract (text, model, usage) from a response body

        Raises:
            NetworkFailure: the body does not have the expected shape
        """
        try:
            text = body['choices'][0]['message']['content']
            if not isinstance(text, str):
                raise TypeError("content is not a string")
        except (KeyError, IndexError, TypeError) as e:
            raise NetworkFailure(f"Malformed provider response: {e}") from e

        usage = {
            key: int(value) for key, value in (body.get('usage') or {}).items()
            if isinstance(value, int)
        }
        return text, body.get('model', ''), usage


class LLMClient:
    """
    Completion client

    Live calls are bounded by a concurrency limit and retried on transport
    errors and 429 responses with exponential backoff. Replay mode reads
    the transcript only.
    """

    def __init__(self,
                 base_url: str = "https://api.openai.com",
                 path: str = "/v1/chat/completions",
                 api_key: Optional[str] = None,
                 timeout: float = 60,
                 max_retries: int = 3,
                 backoff_seconds: float = 1.0,
                 concurrency: int = 2,
                 session: Optional[requests.Session] = None,
                 adapter: Optional[ChatCompletionAdapter] = None,
                 sleep: Callable[[float], None] = time.sleep):
        """
        Initialize LLM client

        Args:
            base_url: Provider base URL
            path: Chat-completion path appended to base_url
            api_key: Credentials; read from PRETEST_API_KEY when None
            timeout: Per-request timeout in seconds
            max_retries: Attempts per request, first one included
            backoff_seconds: Delay before the first retry; doubles each time
            concurrency: Maximum live requests in flight
            session: HTTP session (created lazily when None)
            adapter: Provider wire-format adapter
            sleep: Delay function between retries
        """
        if max_retries < 1 or concurrency < 1:
            raise ValueError("max_retries and concurrency must be at least 1")
        self.url = base_url.rstrip('/') + '/' + path.lstrip('/')
        self._api_key = api_key
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff_seconds = backoff_seconds
        self.concurrency = concurrency
        self._session = session
        self.adapter = adapter or ChatCompletionAdapter()
        self._sleep = sleep
        self._slots = threading.BoundedSemaphore(concurrency)

    @classmethod
    def from_settings(cls, llm: Dict, **overrides) -> 'LLMClient':
        """Build from the 'llm' config section"""
        return cls(
            base_url=llm.get('base_url', "https://api.openai.com"),
            path=llm.get('path', "/v1/chat/completions"),
            timeout=llm.get('timeout', 60),
            max_retries=llm.get('max_retries', 3),
            backoff_seconds=llm.get('backoff_seconds', 1.0),
            concurrency=llm.get('concurrency', 2),
            **overrides,
        )

    @property
    def session(self) -> requests.Session:
        if self._session is None:
            self._session = requests.Session()
        return self._session

    def complete(self, request: CompletionRequest, mode: ClientMode,
                 store: Optional[TranscriptStore] = None) -> CompletionResult:
        """
        Obtain the completion for a request

        Args:
            request: Prompt and model parameters
            mode: live, record (live + persist) or replay (transcript only)
            store: Transcript for record and replay

        Returns:
            CompletionResult with the text exactly as produced

        Raises:
            AuthMissing, NetworkFailure, RateLimited, TranscriptMiss, TranscriptError
        """
        digest = request_digest(request)

        if mode is ClientMode.REPLAY:
            return self._replay(request, digest, store)

        if mode is ClientMode.RECORD and store is None:
            raise TranscriptError("Record mode needs a transcript store")

        result = self._live(request, digest)
        if mode is ClientMode.RECORD:
            store.record(digest, request, result.text)
            logger.info(f"Recorded completion {digest[:12]}")
        return result

    def _replay(self, request: CompletionRequest, digest: str,
                store: Optional[TranscriptStore]) -> CompletionResult:
        if store is None:
            raise TranscriptError("Replay mode needs a transcript store")
        entry = store.get(digest)
        if entry is None:
            logger.error(f"Transcript miss for digest {digest}")
            raise TranscriptMiss(digest)
        logger.debug(f"Replayed completion {digest[:12]}")
        return CompletionResult(
            text=entry.response,
            model=entry.model,
            digest=digest,
            from_transcript=True,
        )

    def _live(self, request: CompletionRequest, digest: str) -> CompletionResult:
        api_key = self._api_key or os.environ.get(API_KEY_ENV)
        if not api_key:
            raise AuthMissing()

        payload = self.adapter.build_payload(request)
        headers = {'Authorization': f"Bearer {api_key}", 'Content-Type': 'application/json'}

        with self._slots:
            started = time.perf_counter()
            body = self._post_with_retries(payload, headers)
            latency = time.perf_counter() - started

        text, model, usage = self.adapter.parse_response(body)
        logger.info(f"Completion {digest[:12]} received in {latency:.2f}s")
        return CompletionResult(
            text=text,
            model=model or request.model,
            digest=digest,
            token_usage=usage,
            latency=latency,
        )

    def _post_with_retries(self, payload: Dict, headers: Dict) -> Dict:
        last_error: LLMClientError = NetworkFailure("No attempt made")

        for attempt in range(self.max_retries):
            if attempt:
                delay = self.backoff_seconds * (2 ** (attempt - 1))
                if isinstance(last_error, RateLimited) and last_error.retry_after:
                    delay = max(delay, last_error.retry_after)
                logger.warning(f"Retrying in {delay:g}s after: {last_error}")
                self._sleep(delay)

            try:
                response = self.session.post(self.url, json=payload, headers=headers, timeout=self.timeout)
            except (requests.ConnectionError, requests.Timeout) as e:
                last_error = NetworkFailure(f"Transport error: {e}")
                continue

            if response.status_code == 429:
                last_error = RateLimited(_retry_after(response))
                continue
            if response.status_code >= 400:
                logger.error(f"Provider returned HTTP {response.status_code}")
                raise NetworkFailure(f"Provider returned HTTP {response.status_code}", response.status_code)

            try:
                return response.json()
            except ValueError as e:
                raise NetworkFailure(f"Provider response is not JSON: {e}", response.status_code) from e

        logger.error(f"Giving up after {self.max_retries} attempts: {last_error}")
        raise last_error


def _retry_after(response: requests.Response) -> Optional[float]:
    value = response.headers.get('Retry-After')
    try:
        return float(value) if value is not None else None
    except ValueError:
        return None
