"""Atomic file emission: everything is written to a temp file and renamed into place."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

from .errors import IoFailure


class OutputBatch:
    """Stage several files and publish them together.

    Inside the ``with`` block files are written to temporaries next to their
    targets; they are renamed into place only if the block exits cleanly,
    otherwise every temporary is removed.
    """

    def __init__(self):
        self._staged: list[tuple[str, Path]] = []

    def write_text(self, path, text: str) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            self._discard()
            raise IoFailure(f"{path}: cannot write ({exc.strerror or exc})") from exc
        self._staged.append((tmp, path))
        return path

    def commit(self) -> None:
        try:
            for tmp, path in self._staged:
                os.replace(tmp, path)
        except OSError as exc:
            self._discard()
            raise IoFailure(f"cannot publish output files: {exc}") from exc
        self._staged.clear()

    def _discard(self) -> None:
        for tmp, _ in self._staged:
            try:
                os.unlink(tmp)
            except FileNotFoundError:
                pass
        self._staged.clear()

    def __enter__(self) -> "OutputBatch":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc_type is None:
            self.commit()
        else:
            self._discard()


def atomic_write_text(path, text: str) -> Path:
    with OutputBatch() as batch:
        return batch.write_text(path, text)


def read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"{path}: cannot read ({exc.strerror or exc})") from exc
