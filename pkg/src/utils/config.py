"""
Configuration Management
Handles toolkit settings: LLM endpoint, lint thresholds, prompt options, paths
"""

import json
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Optional
import logging

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parents[2]
DEFAULT_CONFIG_FILE = PROJECT_ROOT / "config" / "settings.json"


class Config:
    """Toolkit configuration manager"""

    DEFAULT_CONFIG = {
        # Chat-completion endpoint and model parameters
        'llm': {
            'base_url': 'https://api.openai.com',
            'path': '/v1/chat/completions',
            'model': 'gpt-4',
            'temperature': 0.7,
            'max_tokens': 1024,
            'concurrency': 2,
            'timeout': 60,  # seconds
            'max_retries': 3,
            'backoff_seconds': 1.0
        },

        # Deterministic lint rules
        'lint': {
            'frequency_rank_threshold': 5000,
            'max_sentence_tokens': 30,
            'min_subordinators': 3,
            'min_coordinators': 3,
            'lexicon_dir': None,  # None = bundled config/lexicons
            'disabled_rules': [],
            'strict': False
        },

        # Response-scale analysis
        'scale': {
            'month_weeks': 4
        },

        # Prompt rendering
        'prompt': {
            'include_mode': False,
            'profile': None
        },

        # Record/replay transcripts
        'transcripts': {
            'path': 'transcripts/pretest.transcript.json',
            'mode': 'replay'
        },

        'reports': {
            'out_dir': 'reports'
        },

        'logging': {
            'level': 'INFO',
            'log_to_file': False,
            'log_dir': 'logs'
        }
    }

    def __init__(self, config_file: Optional[str] = None):
        """Initialize configuration manager"""
        self.config_file = Path(config_file) if config_file else DEFAULT_CONFIG_FILE
        self.settings: Dict[str, Any] = {}
        self.load()

    def load(self):
        """
        Load configuration from file

        JSON and TOML documents are accepted; the suffix decides the parser.
        A missing file means defaults; an unparsable file raises.
        """
        if not self.config_file.exists():
            logger.info(f"No config file at {self.config_file}, using defaults")
            self.settings = self._merge_configs(self.DEFAULT_CONFIG, {})
            return

        try:
            if self.config_file.suffix == '.toml':
                with open(self.config_file, 'rb') as f:
                    loaded_config = tomllib.load(f)
            else:
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    loaded_config = json.load(f)
        except (OSError, ValueError) as e:
            logger.error(f"Error loading config {self.config_file}: {e}")
            raise

        # Merge with defaults to ensure all keys exist
        self.settings = self._merge_configs(self.DEFAULT_CONFIG, loaded_config)
        logger.info(f"Configuration loaded from {self.config_file}")

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value using dot notation

        Example: config.get('llm.model')
        """
        keys = key.split('.')
        value = self.settings

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def get_section(self, section: str) -> Dict:
        """Get entire configuration section"""
        return dict(self.settings.get(section, {}))

    def _merge_configs(self, base: Dict, override: Dict) -> Dict:
        """Recursively merge two configuration dictionaries"""
        result = {
            key: (self._merge_configs(value, {}) if isinstance(value, dict) else value)
            for key, value in base.items()
        }

        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._merge_configs(result[key], value)
            else:
                result[key] = value

        return result


# Global configuration instance
_config_instance = None


def get_config(config_file: Optional[str] = None) -> Config:
    """Get global configuration instance (reloaded when a different file is asked for)"""
    global _config_instance
    wanted = Path(config_file) if config_file else DEFAULT_CONFIG_FILE
    if _config_instance is None or _config_instance.config_file != wanted:
        _config_instance = Config(str(wanted))
    return _config_instance
