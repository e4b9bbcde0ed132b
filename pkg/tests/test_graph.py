"""Agent table validation and the predefined order."""

import json

import pytest

from voicetriage.agents import (
    AgentId,
    AgentTable,
    COMPONENT_AGENTS,
    ConfigurationError,
    ToolKind,
    agent_order,
    load_agent_table,
)


def test_bundled_table_order():
    order = agent_order()
    assert order[0] == AgentId.MAIN
    assert order[-2:] == [AgentId.FINAL_SUMMARY, AgentId.MAIN]
    # every component agent appears exactly once
    for agent in COMPONENT_AGENTS:
        assert order.count(agent) == 1
    assert order.count(AgentId.MAIN) == 3


def test_successors_follow_the_exam_sequence():
    table = load_agent_table()
    assert table.successor(AgentId.FACIAL) == AgentId.ARM
    assert table.successor(AgentId.ANTICOAGULANT) == AgentId.MAIN
    assert table.successor(AgentId.FINAL_SUMMARY) == AgentId.MAIN


def test_transfer_rules():
    table = load_agent_table()
    assert table.allows_transfer(AgentId.FACIAL, AgentId.ARM)
    assert table.allows_transfer(AgentId.MAIN, AgentId.FINAL_SUMMARY)
    assert not table.allows_transfer(AgentId.FACIAL, AgentId.NEGLECT)
    assert not table.allows_transfer(AgentId.ARM, AgentId.FACIAL)


def test_missing_agent_is_a_configuration_error():
    table = load_agent_table()
    descriptors = dict(table.descriptors)
    del descriptors[AgentId.FINAL_SUMMARY]
    with pytest.raises(ConfigurationError, match="final_summary"):
        AgentTable(descriptors)


def test_tool_permission_constraints_enforced_at_load():
    table = load_agent_table()
    descriptors = dict(table.descriptors)
    bad = descriptors[AgentId.ARM]
    descriptors[AgentId.ARM] = type(bad)(
        id=bad.id,
        instructions=bad.instructions,
        allowed_tools=bad.allowed_tools | {ToolKind.DISCONNECT},
        next=bad.next,
    )
    with pytest.raises(ConfigurationError, match="disconnect"):
        AgentTable(descriptors)


def test_cycle_detected(tmp_path):
    config = {
        "schema": "voice-agents/1",
        "agents": [
            {
                "id": agent.value,
                "instructions": "",
                "allowed_tools": ["update_assessment_state", "transfer_agent"],
                "next": "facial",  # everyone points at facial: a cycle
            }
            for agent in AgentId
        ],
    }
    path = tmp_path / "agents.json"
    path.write_text(json.dumps(config))
    with pytest.raises(ConfigurationError):
        load_agent_table(path)


def test_bad_schema_rejected(tmp_path):
    path = tmp_path / "agents.json"
    path.write_text(json.dumps({"schema": "voice-agents/999", "agents": []}))
    with pytest.raises(ConfigurationError, match="schema"):
        load_agent_table(path)
