"""Exception hierarchy with machine-readable error codes."""

from __future__ import annotations


class QuiverFanError(Exception):
    """Base class; every error carries a stable machine-readable code."""

    code = "error"

    def __init__(self, detail: str = ""):
        self.detail = detail
        super().__init__(detail or self.code)


class MalformedInput(QuiverFanError):
    code = "malformed-input"


class DuplicateId(QuiverFanError):
    code = "duplicate-id"


class DisconnectedQuiver(QuiverFanError):
    code = "disconnected-quiver"


class OrientedCycle(QuiverFanError):
    code = "oriented-cycle"


class UnknownVertex(QuiverFanError):
    code = "unknown-vertex"


class NotAWalk(QuiverFanError):
    code = "not-a-walk"


class NotASpanningTree(QuiverFanError):
    code = "not-a-spanning-tree"


class NotGeneralPosition(QuiverFanError):
    code = "not-general-position"


class UnboundedPolytope(QuiverFanError):
    code = "unbounded-polytope"


class StableArrowSetNotFull(QuiverFanError):
    code = "stable-arrow-set-not-full"


class QuotientHasOrientedCycle(QuiverFanError):
    code = "quotient-has-oriented-cycle"


class FanNotSmooth(QuiverFanError):
    code = "fan-not-smooth"


class FanNotComplete(QuiverFanError):
    code = "fan-not-complete"


class InstanceTooLarge(QuiverFanError):
    code = "instance-too-large"


class InternalInconsistency(QuiverFanError):
    """Two routes that must agree disagreed; indicates a bug, not bad input."""

    code = "internal-inconsistency"
