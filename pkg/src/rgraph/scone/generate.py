"""Seeded random generation of valid state-manipulation traces.

Generation is deterministic in (seed, sub_task, n_actions). Each step
picks uniformly among the action kinds that currently have a legal
instance, then samples that kind's parameters. Alchemy never drains its
last unit, so a legal action always exists in every world this module can
reach; scenes always admit an appear or a leave, and tangram figures can
always be deleted or added back.
"""

from __future__ import annotations

import random

from ..corpus import CorpusRecord
from .emit import Action, Trace, World, apply_action, trace_to_record
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
)

DEFAULT_N_ACTIONS = 5

_INITIAL_BEAKER_COUNTS = (0, 0, 1, 1, 1, 2, 2, 3)


def _random_alchemy_world(rng: random.Random) -> AlchemyWorld:
    while True:
        beakers = tuple(
            (rng.choice(ALCHEMY_COLORS),) * rng.choice(_INITIAL_BEAKER_COUNTS)
            for _ in range(N_BEAKERS)
        )
        if sum(1 for b in beakers if b) >= 2:
            return AlchemyWorld(beakers)


def _random_scene_world(rng: random.Random) -> SceneWorld:
    while True:
        positions = tuple(
            Person(rng.choice(SCENE_COLORS), rng.choice((None,) + SCENE_COLORS))
            if rng.random() < 0.4
            else None
            for _ in range(N_POSITIONS)
        )
        world = SceneWorld(positions)
        if world.occupied() and world.empty():
            return world


def _random_tangrams_world(rng: random.Random) -> TangramsWorld:
    figures = list(TANGRAM_FIGURES)
    rng.shuffle(figures)
    return TangramsWorld(tuple(figures[:N_SLOTS]))


def _random_alchemy_action(rng: random.Random, world: AlchemyWorld) -> Action:
    total = world.total_units()
    drains = [
        Drain(b, c)
        for b in range(1, N_BEAKERS + 1)
        for c in range(1, len(world.beakers[b - 1]) + 1)
        if total - c > 0
    ]
    pours = [
        Pour(s, d)
        for s in range(1, N_BEAKERS + 1)
        if world.beakers[s - 1]
        for d in range(1, N_BEAKERS + 1)
        if d != s
        and len(world.beakers[d - 1]) + len(world.beakers[s - 1]) <= BEAKER_CAPACITY
    ]
    mixes = [
        Mix(b)
        for b in range(1, N_BEAKERS + 1)
        if len(set(world.beakers[b - 1])) >= 2
    ]
    kinds = [k for k in (drains, pours, mixes) if k]
    return rng.choice(rng.choice(kinds))


def _random_scene_action(rng: random.Random, world: SceneWorld) -> Action:
    kinds = []
    if world.empty():
        kinds.append("appear")
    if world.occupied():
        kinds.append("leave")
    if world.occupied() and world.empty():
        kinds.append("move")
    kind = rng.choice(kinds)
    if kind == "appear":
        person = Person(
            rng.choice(SCENE_COLORS), rng.choice((None,) + SCENE_COLORS)
        )
        return Appear(rng.choice(world.empty()), person)
    if kind == "leave":
        return Leave(rng.choice(world.occupied()))
    return Move(rng.choice(world.occupied()), rng.choice(world.empty()))


def _random_tangrams_action(rng: random.Random, world: TangramsWorld) -> Action:
    kinds = []
    occupied = world.occupied()
    if len(occupied) >= 2:
        kinds.append("swap")
    if occupied:
        kinds.append("delete")
    if world.removed and world.empty():
        kinds.append("addback")
    kind = rng.choice(kinds)
    if kind == "swap":
        a, b = rng.sample(occupied, 2)
        return Swap(*sorted((a, b)))
    if kind == "delete":
        return Delete(rng.choice(occupied))
    return AddBack(rng.choice(world.empty()))


_INITIAL = {
    "alchemy": _random_alchemy_world,
    "scene": _random_scene_world,
    "tangrams": _random_tangrams_world,
}
_ACTION = {
    "alchemy": _random_alchemy_action,
    "scene": _random_scene_action,
    "tangrams": _random_tangrams_action,
}


def generate(
    seed: int, sub_task: str, n_actions: int = DEFAULT_N_ACTIONS
) -> Trace:
    """A deterministic random trace with exactly n_actions valid actions."""
    if sub_task not in _INITIAL:
        raise ValueError(f"unknown sub-task {sub_task!r}")
    if n_actions < 1:
        raise ValueError("a trace needs at least one action")
    rng = random.Random(seed)
    world: World = _INITIAL[sub_task](rng)
    initial = world
    actions: list[Action] = []
    for _ in range(n_actions):
        action = _ACTION[sub_task](rng, world)
        world = apply_action(world, action)
        actions.append(action)
    return Trace(sub_task, initial, tuple(actions))


def generate_records(
    seed: int,
    sub_task: str,
    n_records: int,
    n_actions: int = DEFAULT_N_ACTIONS,
    with_predictions: bool = False,
) -> list[CorpusRecord]:
    records = []
    for i in range(n_records):
        trace = generate(seed + i, sub_task, n_actions)
        record_id = f"scone-{sub_task}-{seed + i}"
        records.append(trace_to_record(trace, record_id, with_predictions))
    return records
