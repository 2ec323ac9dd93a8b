"""
Completion Data Models
Chat-completion requests, results, client modes and transcript entries
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict


class ClientMode(Enum):
    """How completions are obtained"""
    LIVE = "live"
    RECORD = "record"  # live, and persist every answer
    REPLAY = "replay"  # transcript only, never the network


@dataclass(frozen=True)
class ModelParams:
    """Model identifier and sampling parameters"""
    model: str = "gpt-4"
    temperature: float = 0.7
    max_tokens: int = 1024

    def __post_init__(self):
        if not self.model.strip():
            raise ValueError("model must be non-empty")
        if not 0 <= self.temperature <= 2:
            raise ValueError(f"temperature {self.temperature} outside [0, 2]")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")

    def to_dict(self) -> Dict:
        return {'model': self.model, 'temperature': self.temperature, 'max_tokens': self.max_tokens}

    @classmethod
    def from_dict(cls, data: Dict) -> 'ModelParams':
        return cls(
            model=data.get('model', 'gpt-4'),
            temperature=data.get('temperature', 0.7),
            max_tokens=data.get('max_tokens', 1024),
        )


@dataclass(frozen=True)
class CompletionRequest:
    """One single-turn prompt with its model parameters"""
    prompt: str
    model: str = "gpt-4"
    temperature: float = 0.7
    max_tokens: int = 1024

    def __post_init__(self):
        if not self.prompt:
            raise ValueError("prompt must be non-empty")
        ModelParams(self.model, self.temperature, self.max_tokens)

    @classmethod
    def for_prompt(cls, prompt: str, params: ModelParams) -> 'CompletionRequest':
        return cls(prompt, params.model, params.temperature, params.max_tokens)

    @property
    def canonical(self) -> str:
        """Byte string the digest is computed over"""
        return f"{self.model}\n{self.temperature:.2f}\n{self.max_tokens}\n{self.prompt}"


@dataclass(frozen=True)
class CompletionResult:
    """Model answer exactly as returned"""
    text: str
    model: str
    digest: str
    token_usage: Dict[str, int] = field(default_factory=dict)
    latency: float = 0.0  # seconds
    from_transcript: bool = False

    def to_dict(self) -> Dict:
        return {
            'text': self.text,
            'model': self.model,
            'digest': self.digest,
            'token_usage': dict(self.token_usage),
            'latency': self.latency,
            'from_transcript': self.from_transcript,
        }


@dataclass(frozen=True)
class TranscriptEntry:
    """Stored request snapshot and response"""
    model: str
    temperature: float
    max_tokens: int
    prompt: str
    response: str
    recorded_at: str  # ISO-8601

    @classmethod
    def from_exchange(cls, request: CompletionRequest, response: str, recorded_at: str) -> 'TranscriptEntry':
        return cls(request.model, request.temperature, request.max_tokens,
                   request.prompt, response, recorded_at)

    def to_dict(self) -> Dict:
        return {
            'model': self.model,
            'temperature': self.temperature,
            'max_tokens': self.max_tokens,
            'prompt': self.prompt,
            'response': self.response,
            'recorded_at': self.recorded_at,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'TranscriptEntry':
        return cls(
            model=data['model'],
            temperature=data['temperature'],
            max_tokens=data['max_tokens'],
            prompt=data['prompt'],
            response=data['response'],
            recorded_at=data['recorded_at'],
        )
