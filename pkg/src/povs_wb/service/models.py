"""Request and response models for the workbench service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class AnalyzeRequest(BaseModel):
    """A workbench document plus per-run knobs."""

    source: str = Field(description="workbench document text")
    cap: int = Field(default=16, ge=1, le=64, description="iteration cap for closures and towers")
    map: Optional[str] = Field(default=None, description="map name (factor command only)")


class SearchRequest(BaseModel):
    dim: int = Field(default=2, ge=1, le=4)
    cases: int = Field(default=50, ge=0, le=10000)
    seed: int = Field(default=0)
    cap: int = Field(default=16, ge=1, le=64)


class ReportResponse(BaseModel):
    """Deterministic report document plus its text rendering and exit code."""

    exit_code: int
    report: dict[str, Any]
    text: str


class HealthResponse(BaseModel):
    status: str
    name: str
    version: str
