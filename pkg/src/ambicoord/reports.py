"""Uniform result type for the validator family."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Report:
    """Outcome of a check: ok, structured failures, free-form notes.

    Truthiness follows `ok`, so reports compose with plain boolean logic.
    """

    ok: bool
    failures: tuple = ()
    notes: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok
