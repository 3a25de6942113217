"""Small helpers shared by the CLI and the verification suites."""

import hashlib
import os
import time
import uuid
from dataclasses import dataclass
from typing import Optional


def generate_correlation_id() -> str:
    """Eight hex characters identifying one CLI run in the logs."""
    return uuid.uuid4().hex[:8]


def ensure_directory_exists(directory_path: str) -> None:
    os.makedirs(directory_path, exist_ok=True)


def digest_text(text: str) -> str:
    """First 16 hex characters of the SHA-256 of ``text``; certificates record these for input files."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


@dataclass
class Timer:
    """Wall-clock timer for certificate ``elapsed_ms``.

    Example:
        >>> with Timer() as timer:
        ...     checks = lemma_checks(5)
        >>> timer.elapsed_ms
    """

    started: Optional[float] = None
    seconds: float = 0.0

    def __enter__(self) -> "Timer":
        self.started = time.perf_counter()
        return self

    def __exit__(self, *exc_info) -> None:
        self.seconds = time.perf_counter() - self.started

    @property
    def elapsed_ms(self) -> int:
        return round(self.seconds * 1000)
