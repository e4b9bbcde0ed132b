"""Engine state machine: tool dispatch, gating, clarification loop,
final analysis, replay determinism."""

import copy
from datetime import datetime, timezone

import pytest

from voicetriage.agents import (
    AgentId,
    BackendTurn,
    CLOSING_PROMPT,
    EngineConfig,
    EngineSession,
    ReportEmitted,
    SessionStatus,
    StateViolationError,
    ToolCall,
    ToolKind,
    UserTurnCommitted,
    VideoRegistered,
    VideoRequest,
    VideoSkipped,
    create_session,
    load_agent_table,
)
from voicetriage.assessment import Sex, VideoRef
from voicetriage.clock import SyntheticClock

T0 = datetime(2025, 3, 1, 9, 30, tzinfo=timezone.utc)


def new_session(session_id="e1", cap=3) -> EngineSession:
    return create_session(
        EngineConfig(
            agents=load_agent_table(),
            clock=SyntheticClock(T0),
            session_id=session_id,
            clarification_cap=cap,
        )
    )


def update(field, value):
    return ToolCall(ToolKind.UPDATE_ASSESSMENT_STATE, {"field": field, "value": value})


def transfer(target):
    return ToolCall(ToolKind.TRANSFER_AGENT, {"target": target})


def walk_to(session, target_chain):
    for target in target_chain:
        result, _ = session.dispatch_tool(transfer(target))
        assert result.ok, result.error


def test_create_session_defaults():
    session = new_session()
    assert session.active_agent == AgentId.MAIN
    assert session.status == SessionStatus.RUNNING
    assert session.transcript == []
    assert session.assessment.demographics.sex == Sex.UNKNOWN


def test_session_ids_unique_by_default():
    config = EngineConfig(agents=load_agent_table(), clock=SyntheticClock(T0))
    a = create_session(config)
    b = create_session(config)
    assert a.session_id != b.session_id


def test_clock_required():
    from voicetriage.agents import ConfigurationError

    with pytest.raises(ConfigurationError):
        create_session(EngineConfig(agents=load_agent_table(), clock=None))


def test_update_tool_writes_state_and_echoes_system_turn():
    session = new_session()
    result, effects = session.dispatch_tool(update("demographics.age", 72))
    assert result.ok and effects == []
    assert session.assessment.demographics.age == 72
    assert session.transcript[-1].speaker == "system"
    assert "demographics.age" in session.transcript[-1].text


def test_last_dose_requires_a_recorded_anticoagulant():
    session = new_session()
    result, _ = session.dispatch_tool(
        update("ancillary.last_dose_time", {"day_offset": 0, "time": "08:00"})
    )
    assert not result.ok
    session.dispatch_tool(update("ancillary.anticoagulants", ["warfarin"]))
    result, _ = session.dispatch_tool(
        update("ancillary.last_dose_time", {"day_offset": 0, "time": "08:00"})
    )
    assert result.ok
    # clearing the drug list clears the dangling dose time with it
    session.dispatch_tool(update("ancillary.anticoagulants", []))
    assert session.assessment.ancillary.last_dose_time is None


def test_update_validation_rejects_bad_values():
    session = new_session()
    for field, value in [
        ("demographics.age", 200),
        ("demographics.age", "old"),
        ("findings.facial", "droopy"),
        ("ancillary.glucose", 5),
        ("nonexistent.field", 1),
    ]:
        result, _ = session.dispatch_tool(update(field, value))
        assert not result.ok, (field, value)
    assert session.assessment.demographics.age is None


def test_malformed_update_objects_fail_non_fatally():
    """Missing keys and wrong shapes come back as tool errors, never as
    exceptions out of the event loop, and leave no partial writes."""
    session = new_session()
    malformed = [
        ("findings.arm", {"severity": "drifts_down"}),  # no side
        ("findings.arm", "left"),
        ("findings.aphasia", {"items_named": 2}),  # no command_performed
        ("findings.aphasia.command_performed", "yes"),
        ("findings.eye", {"direction": "left"}),
        ("findings.neglect", {"recognizes_weakness": True}),
        ("ancillary.prior_stroke", {"detail": "no status"}),
        ("ancillary.anticoagulants", "warfarin"),
        ("times.last_known_well", {"day_offset": 0}),
        ("times.last_known_well", {"time": "25:99"}),
    ]
    for field, value in malformed:
        effects = session.advance(
            BackendTurn(text=None, tool_calls=[update(field, value)])
        )
        assert effects == []
        assert not session.last_tool_results[0].ok, (field, value)
    assert session.assessment.findings.arm is None
    assert session.assessment.findings.aphasia is None
    assert session.assessment.findings.eye is None
    assert session.assessment.findings.neglect is None
    assert session.assessment.ancillary.prior_stroke is None
    assert session.assessment.times.last_known_well is None


def test_permission_matrix_enforced_without_mutation():
    session = new_session()
    walk_to(session, [AgentId.ONSET_LKW, AgentId.FACIAL, AgentId.ARM])
    before = copy.deepcopy(session.assessment)
    result, effects = session.dispatch_tool(ToolCall(ToolKind.DISCONNECT))
    assert not result.ok and "not allowed" in result.error
    assert effects == []
    assert session.status == SessionStatus.RUNNING
    assert session.assessment == before


def test_transfer_outside_predefined_order_rejected():
    session = new_session()
    result, _ = session.dispatch_tool(transfer(AgentId.NEGLECT))
    assert not result.ok
    assert session.active_agent == AgentId.MAIN


def test_permission_matrix_exhaustive():
    """Every (agent, tool) pair outside the descriptor table is refused
    and leaves the session untouched."""
    table = load_agent_table()
    probe_args = {
        ToolKind.UPDATE_ASSESSMENT_STATE: {"field": "demographics.age", "value": 50},
        ToolKind.START_VIDEO_RECORDING: {"component": "facial"},
        ToolKind.TRANSFER_AGENT: {"target": AgentId.ARM.value},
        ToolKind.RUN_FINAL_ANALYSIS: {},
        ToolKind.DISCONNECT: {},
    }
    chain = [
        AgentId.ONSET_LKW, AgentId.FACIAL, AgentId.ARM, AgentId.SPEECH,
        AgentId.EYE_DEVIATION, AgentId.NEGLECT, AgentId.ANTICOAGULANT,
        AgentId.MAIN, AgentId.FINAL_SUMMARY,
    ]
    for agent in AgentId:
        for tool in ToolKind:
            if table.allows_tool(agent, tool):
                continue
            session = new_session()
            if agent != AgentId.MAIN:
                walk_to(session, chain[: chain.index(agent) + 1])
            before = copy.deepcopy(session.assessment)
            status_before = session.status
            result, effects = session.dispatch_tool(ToolCall(tool, probe_args[tool]))
            assert not result.ok, (agent, tool)
            assert effects == []
            assert session.assessment == before
            assert session.status == status_before


def test_video_gating_blocks_turns_until_registered():
    session = new_session()
    walk_to(session, [AgentId.ONSET_LKW, AgentId.FACIAL])
    result, effects = session.dispatch_tool(
        ToolCall(ToolKind.START_VIDEO_RECORDING, {"component": "facial"})
    )
    assert result.ok
    assert effects == [VideoRequest("facial")]
    assert session.status == SessionStatus.AWAITING_VIDEO

    with pytest.raises(StateViolationError, match="VIDEO_GATE"):
        session.advance(UserTurnCommitted("hello?"))
    with pytest.raises(StateViolationError, match="VIDEO_GATE"):
        session.advance(BackendTurn(text=None, tool_calls=[transfer(AgentId.ARM)]))

    ref = VideoRef("facial", "v-e1-facial", 8.0, "videos/facial.bin")
    session.advance(VideoRegistered(ref))
    assert session.status == SessionStatus.RUNNING
    assert session.assessment.videos == [ref]


def test_video_skip_recorded():
    session = new_session()
    walk_to(session, [AgentId.ONSET_LKW, AgentId.FACIAL])
    session.dispatch_tool(ToolCall(ToolKind.START_VIDEO_RECORDING, {"component": "facial"}))
    session.advance(VideoSkipped())
    assert session.skipped_videos == ["facial"]
    assert session.status == SessionStatus.RUNNING
    assert any("video skipped" in t.text for t in session.transcript)


def test_wrong_agent_cannot_open_video():
    session = new_session()
    result, _ = session.dispatch_tool(
        ToolCall(ToolKind.START_VIDEO_RECORDING, {"component": "facial"})
    )
    assert not result.ok  # main agent holds no video tool


def test_duplicate_component_video_rejected():
    session = new_session()
    walk_to(session, [AgentId.ONSET_LKW, AgentId.FACIAL])
    session.dispatch_tool(ToolCall(ToolKind.START_VIDEO_RECORDING, {"component": "facial"}))
    session.advance(VideoRegistered(VideoRef("facial", "v1", 5.0, "videos/facial.bin")))
    result, _ = session.dispatch_tool(
        ToolCall(ToolKind.START_VIDEO_RECORDING, {"component": "facial"})
    )
    assert not result.ok


def fill_clean_assessment(session):
    """Drive a complete, consistent assessment through tool updates."""
    calls = [
        update("demographics.age", 72),
        update("demographics.sex", "male"),
        update("times.last_known_well", {"day_offset": -1, "time": "21:00"}),
        update("times.symptom_onset", {"day_offset": 0, "time": "09:00"}),
        update("times.onset_witnessed", False),
        update("findings.facial", "left_droop"),
        update("findings.arm", {"side": "left", "severity": "falls_rapidly_or_no_effort"}),
        update("findings.speech_slurred", True),
        update(
            "findings.aphasia",
            {"items_named": 3, "command_performed": True, "mute_or_global": False},
        ),
        update("findings.eye", {"direction": "none", "severity": "none"}),
        update("findings.neglect", {"recognizes_weakness": False, "recognizes_own_arm": False}),
        update("ancillary.anticoagulants", []),
        update("ancillary.prior_stroke", "unknown"),
        update("ancillary.glucose", "unmeasurable"),
    ]
    for call in calls:
        result, _ = session.dispatch_tool(call)
        assert result.ok, result.error


def test_final_analysis_clean_path_drafts_summary():
    session = new_session()
    fill_clean_assessment(session)
    session.dispatch_tool(transfer(AgentId.FINAL_SUMMARY))
    result, effects = session.run_final_analysis()
    assert result.clarifications_needed == []
    assert result.corrected_scores.total == 6
    assert session.assessment.stroke_likely is True
    assert session.assessment.lvo_likely is True
    assert session.active_agent == AgentId.MAIN
    texts = [e.text for e in effects if hasattr(e, "text")]
    assert any("stroke is likely" in t for t in texts)
    assert CLOSING_PROMPT in texts


def test_final_analysis_corrects_recorded_total():
    session = new_session()
    fill_clean_assessment(session)
    session.dispatch_tool(update("scores.total", 5))
    session.dispatch_tool(transfer(AgentId.FINAL_SUMMARY))
    result, _ = session.run_final_analysis()
    assert result.corrected_scores.total == 6
    assert session.assessment.recorded_total == 6
    kinds = [d.kind.value for d in result.discrepancies]
    assert kinds == ["score_sum_mismatch"]


def test_clarification_loop_resolves_sex():
    session = new_session()
    fill_clean_assessment(session)
    session.dispatch_tool(update("demographics.sex", "female"))
    session.dispatch_tool(transfer(AgentId.FINAL_SUMMARY))
    result, effects = session.run_final_analysis()
    assert result.clarifications_needed == ["demographics.sex"]
    assert session.status == SessionStatus.AWAITING_CLARIFICATION
    assert session.clarification_rounds == 1
    prompt = [e.text for e in effects if hasattr(e, "text")][-1]
    assert "male or female" in prompt

    effects = session.advance(UserTurnCommitted("The patient is male."))
    assert session.assessment.demographics.sex == Sex.MALE
    assert session.status == SessionStatus.RUNNING
    assert session.clarification_rounds == 1
    texts = [e.text for e in effects if hasattr(e, "text")]
    assert any("stroke is likely" in t for t in texts)


def test_clarification_cap_then_flag_only():
    session = new_session(cap=3)
    fill_clean_assessment(session)
    session.dispatch_tool(update("demographics.sex", "female"))
    session.dispatch_tool(transfer(AgentId.FINAL_SUMMARY))
    session.run_final_analysis()
    assert session.clarification_rounds == 1
    session.advance(UserTurnCommitted("what?"))  # unparseable
    assert session.clarification_rounds == 2
    session.advance(UserTurnCommitted("sorry, say again?"))
    assert session.clarification_rounds == 3
    effects = session.advance(UserTurnCommitted("still no idea"))
    # Gave up: analysis finishes with the conflict downgraded to a flag.
    assert session.status == SessionStatus.RUNNING
    assert session.clarification_rounds == 3
    texts = [e.text for e in effects if hasattr(e, "text")]
    assert any("stroke is likely" in t for t in texts)
    assert session.last_analysis is not None
    kinds = [d.kind.value for d in session.last_analysis.discrepancies]
    assert "sex_mismatch" in kinds
    assert all(
        d.resolution.value == "flag_only"
        for d in session.last_analysis.discrepancies
        if d.kind.value == "sex_mismatch"
    )


def test_disconnect_emits_report_once_and_ends():
    session = new_session()
    fill_clean_assessment(session)
    session.dispatch_tool(transfer(AgentId.FINAL_SUMMARY))
    session.run_final_analysis()
    result, effects = session.dispatch_tool(ToolCall(ToolKind.DISCONNECT))
    assert result.ok
    assert len(effects) == 1 and isinstance(effects[0], ReportEmitted)
    assert session.status == SessionStatus.ENDED
    with pytest.raises(StateViolationError, match="SESSION_ENDED"):
        session.advance(UserTurnCommitted("hello?"))


def test_abort_builds_incomplete_report():
    session = new_session()
    session.dispatch_tool(update("demographics.age", 60))
    effects = session.abort("test abort")
    assert len(effects) == 1 and isinstance(effects[0], ReportEmitted)
    payload = effects[0].report.payload
    assert payload["session"]["aborted"] is True
    assert "findings.facial" in payload["completeness"]["missing"]
    assert session.abort("again") == []  # already ended


def test_replay_determinism_same_events_same_video_ids():
    def run():
        session = new_session("replay")
        fill_clean_assessment(session)
        session.dispatch_tool(transfer(AgentId.FINAL_SUMMARY))
        session.run_final_analysis()
        session.dispatch_tool(ToolCall(ToolKind.DISCONNECT))
        return session.report.to_bytes()

    assert run() == run()


def test_phase_history_follows_predefined_order():
    session = new_session()
    walk_to(
        session,
        [
            AgentId.ONSET_LKW,
            AgentId.FACIAL,
            AgentId.ARM,
            AgentId.SPEECH,
            AgentId.EYE_DEVIATION,
            AgentId.NEGLECT,
            AgentId.ANTICOAGULANT,
            AgentId.MAIN,
            AgentId.FINAL_SUMMARY,
        ],
    )
    visited = [span.agent for span in session.phase_history]
    order = session.agents.order()
    # the visited sequence is exactly a prefix of the canonical traversal
    assert visited == order[: len(visited)]
