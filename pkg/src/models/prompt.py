"""
Prompt Data Models
Pretest protocol levels and rendered prompts
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional

from models.completion import ModelParams


class PromptLevel(Enum):
    """Pretest protocols, from bare task to role play with a profile"""
    TASK_ONLY = "TaskOnly"
    TASK_AIM = "TaskAim"
    TASK_AIM_POPULATION = "TaskAimPopulation"
    TASK_AIM_POPULATION_PRINCIPLES = "TaskAimPopulationPrinciples"
    ROLE_PLAY_GENERAL = "RolePlayGeneral"
    ROLE_PLAY_PROFILE = "RolePlayProfile"

    @property
    def needs_aim(self) -> bool:
        return self in (PromptLevel.TASK_AIM, PromptLevel.TASK_AIM_POPULATION,
                        PromptLevel.TASK_AIM_POPULATION_PRINCIPLES)

    @property
    def needs_population(self) -> bool:
        return self in (PromptLevel.TASK_AIM_POPULATION, PromptLevel.TASK_AIM_POPULATION_PRINCIPLES)

    @property
    def is_role_play(self) -> bool:
        return self in (PromptLevel.ROLE_PLAY_GENERAL, PromptLevel.ROLE_PLAY_PROFILE)

    @classmethod
    def from_cli(cls, value: str, profile: Optional[str] = None) -> 'PromptLevel':
        """Map a --level value (1-4 or roleplay) to a level"""
        numbered = {
            '1': cls.TASK_ONLY,
            '2': cls.TASK_AIM,
            '3': cls.TASK_AIM_POPULATION,
            '4': cls.TASK_AIM_POPULATION_PRINCIPLES,
        }
        if value in numbered:
            return numbered[value]
        if value == 'roleplay':
            return cls.ROLE_PLAY_GENERAL if profile is None else cls.ROLE_PLAY_PROFILE
        raise ValueError(f"Unknown prompt level {value!r}")


@dataclass(frozen=True)
class PromptSpec:
    """A rendered prompt for one question"""
    level: PromptLevel
    text: str
    question_id: str
    digest: str
    params: ModelParams = field(default_factory=ModelParams)
    profile: Optional[str] = None

    def to_dict(self) -> Dict:
        return {
            'level': self.level.value,
            'text': self.text,
            'question_id': self.question_id,
            'digest': self.digest,
            'params': self.params.to_dict(),
            'profile': self.profile,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'PromptSpec':
        return cls(
            level=PromptLevel(data['level']),
            text=data['text'],
            question_id=data['question_id'],
            digest=data['digest'],
            params=ModelParams.from_dict(data.get('params', {})),
            profile=data.get('profile'),
        )
