"""File-access auditing for the threat-model boundary.

The compile step must never read owner secrets (obfuscation records, split
manifests). Its API already makes that impossible to express; this module
adds a runtime check: a watch window that records every file-open audit
event and flags any whose basename matches a forbidden name. Audit hooks
cannot be uninstalled, so one process-wide hook dispatches to whichever
windows are currently active.
"""

from __future__ import annotations

import os
import sys
import threading

_lock = threading.Lock()
_active: list["FileAccessWatch"] = []
_installed = False


def _hook(event: str, args: tuple) -> None:
    if event not in ("open", "os.open") or not _active:
        return
    try:
        path = os.fspath(args[0])
    except TypeError:
        return
    if isinstance(path, bytes):
        path = path.decode(errors="replace")
    with _lock:
        for watch in _active:
            watch.opens.append(str(path))


def _ensure_hook() -> None:
    global _installed
    with _lock:
        if not _installed:
            sys.addaudithook(_hook)
            _installed = True


class FileAccessWatch:
    """Context manager recording file opens; `violations` lists forbidden ones."""

    def __init__(self, forbidden_names: tuple[str, ...] = ("record.json", "manifest.json")):
        self.forbidden_names = tuple(forbidden_names)
        self.opens: list[str] = []

    def __enter__(self) -> "FileAccessWatch":
        _ensure_hook()
        with _lock:
            _active.append(self)
        return self

    def __exit__(self, *exc) -> None:
        with _lock:
            _active.remove(self)

    @property
    def violations(self) -> list[str]:
        return [p for p in self.opens
                if os.path.basename(p) in self.forbidden_names]
