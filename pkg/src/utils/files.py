"""
File Helpers
Write-then-rename output so interrupted runs never leave partial files
"""

import logging
import os
import tempfile
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

logger = logging.getLogger(__name__)


def atomic_write_text(path: Union[str, Path], text: str):
    """Write UTF-8 text to path atomically"""
    atomic_write_many({Path(path): text})


def atomic_write_many(outputs: Dict[Path, str]):
    """
    Write several files so that either all appear or none do

    Every file is first written to a temporary sibling; renames happen only
    after all temporaries are complete. A file that already exists is moved
    aside first, and if a later rename fails every target renamed so far is
    put back the way it was.
    """
    staged: List[Tuple[str, Path]] = []
    replaced: List[Tuple[Path, Optional[str]]] = []
    try:
        for path, text in outputs.items():
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
            staged.append((tmp_name, path))
            with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
                f.write(text)

        for tmp_name, path in staged:
            backup = None
            if path.exists():
                backup = f"{tmp_name}.bak"
                os.replace(path, backup)
            replaced.append((path, backup))
            os.replace(tmp_name, path)
            logger.debug(f"Wrote {path}")
    except OSError:
        _roll_back(replaced)
        raise
    else:
        for _, backup in replaced:
            if backup and os.path.exists(backup):
                os.remove(backup)
    finally:
        for tmp_name, _ in staged:
            if os.path.exists(tmp_name):
                os.remove(tmp_name)


def _roll_back(replaced: List[Tuple[Path, Optional[str]]]):
    for path, backup in reversed(replaced):
        try:
            if backup is not None:
                os.replace(backup, path)
            elif path.exists():
                path.unlink()
        except OSError as e:
            logger.error(f"Could not restore {path}: {e}")
