"""Run outcomes shared by every backend."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict


@dataclass(frozen=True)
class Submitted:
    values: Dict[str, Any]


@dataclass(frozen=True)
class Cancelled:
    reason: str = ""


@dataclass(frozen=True)
class Served:
    session: Any
