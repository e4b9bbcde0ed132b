import json

import pytest

from voicetriage.agents import load_agent_table
from voicetriage.clock import DEFAULT_SYNTHETIC_START, SyntheticClock
from voicetriage.gateway import InProcessClient, ServiceConfig, SessionService
from voicetriage.scripted import ScriptedBackend, load_bundled_script


@pytest.fixture(scope="session")
def agent_table():
    return load_agent_table()


@pytest.fixture
def make_service(tmp_path, agent_table):
    """Factory for an in-process service bound to a bundled (or given)
    script, with deterministic session ids."""

    def _make(script_name="table1", script=None, session_prefix="t", **overrides):
        import itertools

        loaded = script or load_bundled_script(script_name, agent_table)
        ids = itertools.count(1)  # thread-safe enough: count() is atomic

        def next_id():
            return f"{session_prefix}{next(ids)}"

        config = ServiceConfig(
            data_dir=tmp_path / "data",
            backend_factory=lambda sid: ScriptedBackend(loaded),
            agent_table=agent_table,
            clock_factory=lambda: SyntheticClock(DEFAULT_SYNTHETIC_START),
            session_id_factory=next_id,
            **overrides,
        )
        return SessionService(config)

    return _make


def drive_table1(service, *, skip_videos=False):
    """Drive the canonical script to its final report over the protocol;
    returns (report dict, all server envelopes)."""
    script = load_bundled_script("table1")
    client = InProcessClient(service)
    wire = client.send("session.start", {"proto": "voice/1", "mode": "text"})
    session_id = wire[0]["payload"]["session_id"]
    queue = [step.user_text for step in script.steps]
    collected = list(wire)
    pending = wire
    report = None
    for _ in range(200):
        video = next((m for m in pending if m["type"] == "video.request"), None)
        clarify = next(
            (
                m
                for m in pending
                if m["type"] == "state.phase"
                and m["payload"]["status"] == "awaiting_clarification"
            ),
            None,
        )
        final = next((m for m in pending if m["type"] == "report.final"), None)
        if final:
            report = json.loads(final["payload"]["report_json"])
            break
        if video:
            component = video["payload"]["component"]
            if skip_videos:
                pending = client.send("video.skip", {}, session_id)
            else:
                video_id = service.upload_video(
                    session_id, component, b"\x00" * 256, "video/webm", 5.0
                )
                pending = client.send("video.complete", {"video_id": video_id}, session_id)
        elif clarify:
            pending = client.send("text.turn", {"text": "The patient is male."}, session_id)
        else:
            pending = client.send("text.turn", {"text": queue.pop(0)}, session_id)
        collected.extend(pending)
    assert report is not None, "table1 drive never produced a report"
    return report, collected
