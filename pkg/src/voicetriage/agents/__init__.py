"""Multi-agent orchestration: agent graph, tool dispatch, session engine."""

from .analysis import AnalysisResult, abnormal_findings, analyze, draft_narrative
from .engine import (
    AssistantTurn,
    BackendTurn,
    CLARIFICATION_CAP,
    CLOSING_PROMPT,
    Effect,
    EngineConfig,
    EngineSession,
    Event,
    PhaseNote,
    ReportEmitted,
    SessionStatus,
    StateViolationError,
    ToolCall,
    ToolResult,
    UPDATABLE_FIELDS,
    UserTurnCommitted,
    VideoRegistered,
    VideoRequest,
    VideoSkipped,
    create_session,
)
from .graph import (
    AGENTS_SCHEMA,
    AgentDescriptor,
    AgentId,
    AgentTable,
    COMPONENT_AGENTS,
    ConfigurationError,
    ToolKind,
    VIDEO_AGENTS,
    agent_order,
    load_agent_table,
)

__all__ = [
    "AGENTS_SCHEMA",
    "AgentDescriptor",
    "AgentId",
    "AgentTable",
    "AnalysisResult",
    "AssistantTurn",
    "BackendTurn",
    "CLARIFICATION_CAP",
    "CLOSING_PROMPT",
    "COMPONENT_AGENTS",
    "ConfigurationError",
    "Effect",
    "EngineConfig",
    "EngineSession",
    "Event",
    "PhaseNote",
    "ReportEmitted",
    "SessionStatus",
    "StateViolationError",
    "ToolCall",
    "ToolKind",
    "ToolResult",
    "UPDATABLE_FIELDS",
    "UserTurnCommitted",
    "VIDEO_AGENTS",
    "VideoRegistered",
    "VideoRequest",
    "VideoSkipped",
    "abnormal_findings",
    "agent_order",
    "analyze",
    "create_session",
    "draft_narrative",
    "load_agent_table",
]
