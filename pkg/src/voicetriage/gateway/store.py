"""Per-session durable storage.

Layout under the data directory, one directory per session:

    {session_id}/state.json        latest abort-ready snapshot (atomic)
    {session_id}/transcript.jsonl  append-only, one turn per line
    {session_id}/report.json       final report bytes (atomic)
    {session_id}/videos/{component}.bin
    {session_id}/videos/meta.json

``state.json`` always holds a complete report payload flagged aborted, so
a crash between events recovers by promoting the snapshot to the report.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Optional


class SessionNotFoundError(KeyError):
    pass


class SessionStore:
    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def session_dir(self, session_id: str, create: bool = False) -> Path:
        path = self.root / session_id
        if create:
            path.mkdir(parents=True, exist_ok=True)
            (path / "videos").mkdir(exist_ok=True)
        return path

    def exists(self, session_id: str) -> bool:
        return self.session_dir(session_id).is_dir()

    # -- transcript --------------------------------------------------------

    def append_turn(self, session_id: str, turn: dict[str, Any]) -> None:
        path = self.session_dir(session_id, create=True) / "transcript.jsonl"
        with path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(turn, ensure_ascii=False) + "\n")

    def read_transcript(self, session_id: str) -> list[dict[str, Any]]:
        path = self.session_dir(session_id) / "transcript.jsonl"
        if not path.exists():
            return []
        return [
            json.loads(line)
            for line in path.read_text("utf-8").splitlines()
            if line.strip()
        ]

    # -- state snapshot ------------------------------------------------------

    def write_state(self, session_id: str, snapshot: dict[str, Any]) -> None:
        path = self.session_dir(session_id, create=True) / "state.json"
        data = json.dumps(snapshot, ensure_ascii=False, indent=2) + "\n"
        _atomic_write(path, data.encode("utf-8"))

    def read_state(self, session_id: str) -> Optional[dict[str, Any]]:
        path = self.session_dir(session_id) / "state.json"
        if not path.exists():
            return None
        return json.loads(path.read_text("utf-8"))

    # -- report --------------------------------------------------------------

    def write_report(self, session_id: str, report_bytes: bytes) -> None:
        path = self.session_dir(session_id, create=True) / "report.json"
        _atomic_write(path, report_bytes)

    def read_report_bytes(self, session_id: str) -> Optional[bytes]:
        path = self.session_dir(session_id) / "report.json"
        if not path.exists():
            return None
        return path.read_bytes()

    def load_report(self, session_id: str) -> bytes:
        """Report bytes, recovering an aborted session from its snapshot
        when the report itself was never written."""
        if not self.exists(session_id):
            raise SessionNotFoundError(session_id)
        existing = self.read_report_bytes(session_id)
        if existing is not None:
            return existing
        snapshot = self.read_state(session_id)
        if snapshot is None:
            raise SessionNotFoundError(session_id)
        snapshot.setdefault("session", {})["aborted"] = True
        recovered = (
            json.dumps(snapshot, ensure_ascii=False, indent=2) + "\n"
        ).encode("utf-8")
        self.write_report(session_id, recovered)
        return recovered

    def recover_all(self) -> list[str]:
        """Promote snapshots of crashed sessions to abort reports."""
        recovered = []
        for entry in sorted(self.root.iterdir()):
            if not entry.is_dir():
                continue
            if (entry / "report.json").exists() or not (entry / "state.json").exists():
                continue
            self.load_report(entry.name)
            recovered.append(entry.name)
        return recovered

    # -- videos ----------------------------------------------------------------

    def save_video(
        self,
        session_id: str,
        component: str,
        data: bytes,
        video_id: str,
        content_type: str,
        duration_s: float,
    ) -> str:
        videos = self.session_dir(session_id, create=True) / "videos"
        blob = videos / f"{component}.bin"
        _atomic_write(blob, data)
        meta_path = videos / "meta.json"
        meta = {}
        if meta_path.exists():
            meta = json.loads(meta_path.read_text("utf-8"))
        uri = f"videos/{component}.bin"
        meta[component] = {
            "video_id": video_id,
            "content_type": content_type,
            "duration_s": duration_s,
            "size": len(data),
            "uri": uri,
        }
        _atomic_write(
            meta_path, (json.dumps(meta, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
        )
        return uri

    def read_video(self, session_id: str, component: str) -> Optional[tuple[bytes, str]]:
        """Stored bytes and content type for a component's video."""
        videos = self.session_dir(session_id) / "videos"
        path = videos / f"{component}.bin"
        meta_path = videos / "meta.json"
        if not path.exists():
            return None
        content_type = "application/octet-stream"
        if meta_path.exists():
            meta = json.loads(meta_path.read_text("utf-8"))
            content_type = meta.get(component, {}).get("content_type", content_type)
        return path.read_bytes(), content_type


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with tmp.open("wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)
