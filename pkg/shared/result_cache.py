import json
import logging
import os
from pathlib import Path
from typing import Dict, Optional

from errors import InvalidInputError


logger = logging.getLogger(__name__)


class ResultCache:
    """JSON key-value file of rendered reports, keyed by canonical request string.

    Access is exclusive: a sibling `.lock` file is created with O_EXCL on
    entry and removed on exit.
    """

    def __init__(self, path: str):
        self.path = Path(path)
        self.lock_path = Path(f"{path}.lock")
        self._entries: Dict[str, str] = {}
        self._dirty = False
        self._locked = False

    def __enter__(self) -> 'ResultCache':
        """Take the lock and load entries; the lock is dropped again if loading fails."""
        self.acquire()
        try:
            self.load()
        except Exception:
            self.release()
            raise
        return self

    def __exit__(self, exc_type, exc, tb):
        """Write pending entries, then release the lock."""
        try:
            if self._dirty:
                self.flush()
        finally:
            self.release()

    def acquire(self):
        """Create the lock file or fail with cache-locked."""
        try:
            fd = os.open(self.lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise InvalidInputError(f"cache {self.path} is locked by another process", code="cache-locked")
        os.close(fd)
        self._locked = True

    def release(self):
        """Remove the lock file if this instance holds it."""
        if self._locked:
            try:
                self.lock_path.unlink()
            except FileNotFoundError:
                pass
            self._locked = False

    def load(self):
        """Read the JSON object from disk; a missing file is an empty cache."""
        if not self.path.exists():
            self._entries = {}
            return
        try:
            data = json.loads(self.path.read_text(encoding='utf-8') or "{}")
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"cache {self.path} is not valid JSON: {exc}", code="cache-corrupt")
        if not isinstance(data, dict):
            raise InvalidInputError(f"cache {self.path} is not a JSON object", code="cache-corrupt")
        self._entries = {str(k): str(v) for k, v in data.items()}

    def flush(self):
        """Atomic rewrite through a temporary sibling."""
        tmp = self.path.with_name(self.path.name + ".tmp")
        tmp.write_text(json.dumps(self._entries, sort_keys=True, indent=1), encoding='utf-8')
        os.replace(tmp, self.path)
        self._dirty = False

    def get(self, key: str) -> Optional[str]:
        """Cached report text, or None."""
        value = self._entries.get(key)
        logger.debug("cache %s for %s", "hit" if value is not None else "miss", key)
        return value

    def put(self, key: str, text: str):
        """Store report text; written on exit."""
        self._entries[key] = text
        self._dirty = True

    def __len__(self) -> int:
        return len(self._entries)


def get_result_cache(path: Optional[str]) -> Optional[ResultCache]:
    """Cache for `path`, or None when caching is off."""
    return ResultCache(path) if path else None
