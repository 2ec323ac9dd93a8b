"""
Transcript Store Service
Persists request-digest → response entries for record/replay runs
"""

import json
import logging
import threading
from datetime import datetime, timezone
from pathlib import Path
from types import MappingProxyType
from typing import Dict, Mapping, Optional, Union

from models.completion import CompletionRequest, TranscriptEntry
from utils.files import atomic_write_text

logger = logging.getLogger(__name__)


class TranscriptError(Exception):
    """Transcript file missing, unreadable or malformed"""

    def __init__(self, message: str, path: Optional[Union[str, Path]] = None):
        super().__init__(message)
        self.path = str(path) if path is not None else None


class TranscriptStore:
    """
    Transcript of recorded completions

    Lookups are exact digest matches. Writes are serialized; readers of a
    loaded store never block each other.
    """

    def __init__(self, path: Optional[Union[str, Path]] = None,
                 entries: Optional[Dict[str, TranscriptEntry]] = None):
        """
        Initialize transcript store

        Args:
            path: File the store saves to (None keeps it in memory)
            entries: Initial entries keyed by digest
        """
        self.path = Path(path) if path else None
        self._entries: Dict[str, TranscriptEntry] = dict(entries or {})
        self._lock = threading.Lock()

    @classmethod
    def load(cls, path: Union[str, Path], must_exist: bool = True) -> 'TranscriptStore':
        """
        Load a transcript file

        Args:
            path: Transcript JSON file
            must_exist: Raise when the file is absent (replay); otherwise start empty

        Raises:
            TranscriptError: file missing (when required) or malformed
        """
        path = Path(path)
        if not path.exists():
            if must_exist:
                logger.error(f"Transcript not found: {path}")
                raise TranscriptError(f"Transcript not found: {path}", path)
            logger.info(f"No transcript at {path}, starting a new one")
            return cls(path)

        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
            entries = {
                digest: TranscriptEntry.from_dict(entry)
                for digest, entry in data.get('entries', {}).items()
            }
        except (OSError, ValueError, KeyError, AttributeError) as e:
            logger.error(f"Error loading transcript {path}: {e}")
            raise TranscriptError(f"Malformed transcript {path}: {e}", path) from e

        logger.info(f"Loaded {len(entries)} transcript entries from {path}")
        return cls(path, entries)

    @property
    def entries(self) -> Mapping[str, TranscriptEntry]:
        return MappingProxyType(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, digest: str) -> bool:
        return digest in self._entries

    def get(self, digest: str) -> Optional[TranscriptEntry]:
        """Entry for an exact digest, if recorded"""
        return self._entries.get(digest)

    def put(self, digest: str, request: CompletionRequest, response: str,
            recorded_at: Optional[str] = None) -> TranscriptEntry:
        """Add or refresh the entry for a digest"""
        stamp = recorded_at or datetime.now(timezone.utc).isoformat(timespec='seconds')
        entry = TranscriptEntry.from_exchange(request, response, stamp)
        with self._lock:
            self._entries[digest] = entry
        logger.debug(f"Transcript entry stored: {digest[:12]}")
        return entry

    def record(self, digest: str, request: CompletionRequest, response: str) -> TranscriptEntry:
        """Store an entry and persist the whole transcript"""
        with self._lock:
            entry = TranscriptEntry.from_exchange(
                request, response, datetime.now(timezone.utc).isoformat(timespec='seconds')
            )
            self._entries[digest] = entry
            self._save_locked()
        return entry

    def to_json(self) -> str:
        """Canonical document text"""
        data = {
            'entries': {digest: entry.to_dict() for digest, entry in self._entries.items()}
        }
        return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def save(self, path: Optional[Union[str, Path]] = None):
        """Write the transcript (atomically) to path or the store's own path"""
        if path:
            self.path = Path(path)
        with self._lock:
            self._save_locked()

    def _save_locked(self):
        if self.path is None:
            return
        atomic_write_text(self.path, self.to_json())
        logger.info(f"Saved {len(self._entries)} transcript entries to {self.path}")
