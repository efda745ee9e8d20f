"""Pydantic request/response models for the service.

Payloads embed the package's text formats (split-system and network files)
as strings, so the HTTP surface and the files on disk stay byte-compatible
and every emitter keeps a single canonical implementation.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class SystemRequest(BaseModel):
    system: str = Field(description="split system in TAXA/SPLIT text format")


class NetworkRequest(BaseModel):
    network: str = Field(description="network in TAXA/VERTEX/EDGE text format")
    format: Literal["txt", "dot"] = "txt"


class SynthesizeRequest(SystemRequest):
    format: Literal["txt", "dot"] = "txt"


class BunemanRequest(SystemRequest):
    max_vertices: Optional[int] = Field(default=None, ge=1)
    format: Literal["txt", "dot"] = "txt"


class CircularRequest(SystemRequest):
    brute_force: bool = False


class MultiplicityRequest(NetworkRequest):
    split: str = Field(description="one split as 'a b | c d'")


class ResolveRequest(NetworkRequest):
    move: Optional[Literal["R1", "R2", "R1'", "R2'"]] = Field(
        default=None, description="single move; omitted means maximal resolution"
    )
    vertex: Optional[int] = None
    detail: Optional[int] = None


class CheckEqualRequest(BaseModel):
    network: str
    other: str


class SplitsOfRequest(NetworkRequest):
    oracle: bool = False


class ResultResponse(BaseModel):
    """Uniform operation outcome.

    `decision` is None for pure transformations, True/False for decision
    operations (False marks a negative decision, CLI exit code 2).
    """

    decision: Optional[bool] = None
    output: Optional[str] = None
    witness: Optional[str] = None
    warnings: list[str] = []


class ErrorResponse(BaseModel):
    kind: Literal["validation", "resource"]
    error: str


class HealthResponse(BaseModel):
    status: str
    version: str
