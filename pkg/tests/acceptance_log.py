"""Outcome of each acceptance criterion, shared by the tests and conftest."""
from __future__ import annotations

ACCEPTANCE: dict[int, tuple[bool, str]] = {}
