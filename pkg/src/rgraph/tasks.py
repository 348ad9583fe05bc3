"""Task registry: the benchmark tasks this toolkit understands.

A task tag determines the answer type (multiple choice / number / world
state), the option count for multiple choice, and the default node-text
similarity used when scoring (see similarity.default_policy).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class AnswerType(enum.Enum):
    MULTIPLE_CHOICE = "multiple_choice"
    NUMBER = "number"
    STATE_PREDICTION = "state_prediction"


@dataclass(frozen=True, slots=True)
class TaskSpec:
    name: str  # canonical tag, e.g. "gsm8k" or "scone-alchemy"
    family: str  # "arc" | "scone" | "gsm8k" | "aqua-rat" | "ar-lsat"
    answer_type: AnswerType
    n_options: int = 0

    @property
    def is_scone(self) -> bool:
        return self.family == "scone"

    @property
    def scone_subtask(self) -> str | None:
        if not self.is_scone:
            return None
        return self.name.split("-", 1)[1]


_MC = AnswerType.MULTIPLE_CHOICE

TASKS: dict[str, TaskSpec] = {
    t.name: t
    for t in (
        TaskSpec("arc", "arc", _MC, n_options=4),
        TaskSpec("scone-alchemy", "scone", AnswerType.STATE_PREDICTION),
        TaskSpec("scone-scene", "scone", AnswerType.STATE_PREDICTION),
        TaskSpec("scone-tangrams", "scone", AnswerType.STATE_PREDICTION),
        TaskSpec("gsm8k", "gsm8k", AnswerType.NUMBER),
        TaskSpec("aqua-rat", "aqua-rat", _MC, n_options=5),
        TaskSpec("ar-lsat", "ar-lsat", _MC, n_options=5),
    )
}

# Presentation order for report tables.
TASK_ORDER: tuple[str, ...] = (
    "arc",
    "scone-alchemy",
    "scone-scene",
    "scone-tangrams",
    "gsm8k",
    "aqua-rat",
    "ar-lsat",
)


def get_task(tag: str) -> TaskSpec:
    """Look up a task by tag, tolerating case and '/' vs '-' separators."""
    key = tag.strip().lower().replace("/", "-").replace("_", "-")
    if key == "scone":
        raise KeyError("SCONE requires a sub-task tag, e.g. scone-alchemy")
    try:
        return TASKS[key]
    except KeyError:
        raise KeyError(f"unknown task tag: {tag!r}") from None
