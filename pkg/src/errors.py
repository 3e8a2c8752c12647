from __future__ import annotations

from typing import Optional


class WecgError(Exception):
    exit_code = 1


class UsageError(WecgError, ValueError):
    exit_code = 2


class SignalFormatError(WecgError, ValueError):
    exit_code = 3

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ShortReadError(SignalFormatError):
    def __init__(self, message: str = "short read") -> None:
        super().__init__(message)


class WaveletLayoutError(WecgError, ValueError):
    exit_code = 2


class MetricError(WecgError, ValueError):
    exit_code = 2


class UnrepresentableError(WecgError, ValueError):
    exit_code = 2


class ArchiveError(WecgError):
    """Base class for unreadable archives; `code` names the failure kind."""

    exit_code = 4
    code = "corrupt archive"

    def __init__(self, detail: str = "") -> None:
        super().__init__(f"{self.code}: {detail}" if detail else self.code)
        self.detail = detail


class ArchiveShortReadError(ArchiveError):
    code = "short read"


class BadMagicError(ArchiveError):
    code = "bad magic"


class VersionMismatchError(ArchiveError):
    code = "version mismatch"


class ChunkInflateError(ArchiveError):
    code = "inflate failure"


class CorruptArchiveError(ArchiveError):
    code = "invariant violation"


class CorruptStreamError(ArchiveError):
    code = "corrupt stream"
