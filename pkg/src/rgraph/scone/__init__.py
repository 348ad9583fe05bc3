"""Simulators for the state-manipulation tasks and trace generation."""

from .emit import (
    SUB_TASKS,
    Trace,
    apply_action,
    final_world,
    trace_components,
    trace_steps,
    trace_to_graph,
    trace_to_record,
)
from .generate import DEFAULT_N_ACTIONS, generate, generate_records
from .worlds import (
    ALCHEMY_COLORS,
    BEAKER_CAPACITY,
    N_BEAKERS,
    N_POSITIONS,
    N_SLOTS,
    SCENE_COLORS,
    TANGRAM_FIGURES,
    AddBack,
    AlchemyWorld,
    Appear,
    Delete,
    Drain,
    Leave,
    Mix,
    Move,
    Person,
    Pour,
    SceneWorld,
    Swap,
    TangramsWorld,
    apply_alchemy,
    apply_scene,
    apply_tangrams,
    beaker_contents_text,
    numeric_ordinal,
)

__all__ = [
    "ALCHEMY_COLORS",
    "BEAKER_CAPACITY",
    "DEFAULT_N_ACTIONS",
    "N_BEAKERS",
    "N_POSITIONS",
    "N_SLOTS",
    "SCENE_COLORS",
    "SUB_TASKS",
    "TANGRAM_FIGURES",
    "AddBack",
    "AlchemyWorld",
    "Appear",
    "Delete",
    "Drain",
    "Leave",
    "Mix",
    "Move",
    "Person",
    "Pour",
    "SceneWorld",
    "Swap",
    "TangramsWorld",
    "Trace",
    "apply_action",
    "apply_alchemy",
    "apply_scene",
    "apply_tangrams",
    "beaker_contents_text",
    "final_world",
    "generate",
    "generate_records",
    "numeric_ordinal",
    "trace_components",
    "trace_steps",
    "trace_to_graph",
    "trace_to_record",
]
