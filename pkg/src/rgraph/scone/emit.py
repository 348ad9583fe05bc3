"""Turn an action trace into a reasoning graph.

The question block lists every object's initial state, then the actions in
order. The proof derives each state change: a step's premises are the
latest state node of every object whose content the result depends on,
plus the action node itself. Referring expressions inside an action's
surface text ("the man in a red shirt", "it") add no premises.

Actions that change two objects emit two steps. For pours and moves the
destination step comes first and depends on both prior states (the moved
content came from the source); the source step depends only on its own
prior state. Swaps emit the lower slot first; each side depends only on
its own prior state and the action.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..codec import serialize
from ..corpus import CorpusRecord
from ..errors import InvalidActionError
from ..graph import QaComponents, ReasoningGraph, build
from ..tasks import get_task
from .worlds import (
    AddBack,
    AlchemyAction,
    AlchemyWorld,
    Appear,
    Delete,
    Drain,
    Leave,
    Mix,
    Move,
    Pour,
    SceneAction,
    SceneWorld,
    Swap,
    TangramsAction,
    TangramsWorld,
    apply_alchemy,
    apply_scene,
    apply_tangrams,
)

World = Union[AlchemyWorld, SceneWorld, TangramsWorld]
Action = Union[AlchemyAction, SceneAction, TangramsAction]

SUB_TASKS = ("alchemy", "scene", "tangrams")


@dataclass(frozen=True)
class Trace:
    sub_task: str
    initial: World
    actions: tuple[Action, ...]

    def __post_init__(self) -> None:
        if self.sub_task not in SUB_TASKS:
            raise InvalidActionError(f"unknown sub-task {self.sub_task!r}")


def apply_action(world: World, action: Action) -> World:
    if isinstance(world, AlchemyWorld):
        return apply_alchemy(world, action)
    if isinstance(world, SceneWorld):
        return apply_scene(world, action)
    return apply_tangrams(world, action)


def final_world(trace: Trace) -> World:
    world = trace.initial
    for action in trace.actions:
        world = apply_action(world, action)
    return world


def trace_components(trace: Trace) -> QaComponents:
    return QaComponents(
        context=tuple(trace.initial.state_texts()),
        question=tuple(action.surface() for action in trace.actions),
    )


def _touched_objects(action: Action) -> tuple[tuple[int, bool], ...]:
    """(object index, depends_on_both) per emitted step, in emission order."""
    if isinstance(action, (Drain, Mix)):
        return ((action.beaker, False),)
    if isinstance(action, Pour):
        return ((action.dst, True), (action.src, False))
    if isinstance(action, (Appear, Leave)):
        return ((action.position, False),)
    if isinstance(action, Move):
        return ((action.dst, True), (action.src, False))
    if isinstance(action, Swap):
        lo, hi = sorted((action.a, action.b))
        return ((lo, False), (hi, False))
    if isinstance(action, (Delete, AddBack)):
        return ((action.slot, False),)
    raise InvalidActionError(f"unknown action {action!r}")


def _other_object(action: Action, obj: int) -> int:
    if isinstance(action, Pour):
        return action.src if obj == action.dst else action.dst
    if isinstance(action, Move):
        return action.src if obj == action.dst else action.dst
    raise InvalidActionError(f"action {action!r} touches one object")


def trace_steps(trace: Trace) -> list[tuple[set[int], str]]:
    """Proof steps as (premise ids, text), ready for graph building."""
    world = trace.initial
    n_objects = len(world.state_texts())
    latest = {obj: obj for obj in range(1, n_objects + 1)}
    next_id = n_objects + len(trace.actions) + 1

    steps: list[tuple[set[int], str]] = []
    for k, action in enumerate(trace.actions):
        action_id = n_objects + 1 + k
        new_world = apply_action(world, action)
        prior = dict(latest)
        for obj, depends_on_both in _touched_objects(action):
            premises = {prior[obj], action_id}
            if depends_on_both:
                premises.add(prior[_other_object(action, obj)])
            steps.append((premises, new_world.state_texts()[obj - 1]))
            latest[obj] = next_id
            next_id += 1
        world = new_world
    return steps


def trace_to_graph(trace: Trace) -> ReasoningGraph:
    task = get_task(f"scone-{trace.sub_task}")
    return build(task, trace_components(trace), trace_steps(trace))


def trace_to_record(
    trace: Trace, record_id: str, with_prediction: bool = False
) -> CorpusRecord:
    """Package a trace as a corpus record, optionally self-predicting."""
    graph = trace_to_graph(trace)
    return CorpusRecord(
        id=record_id,
        task=graph.task,
        components=trace_components(trace),
        gold=graph,
        predicted_proof=serialize(graph).proof_block if with_prediction else None,
    )
