"""State-manipulation worlds: beakers of chemicals, a row of people, tangram
figures in a row of slots.

Worlds are immutable; applying an action returns the updated world or
raises InvalidActionError. Every action carries an optional surface text;
when absent, a deterministic canonical phrasing is used. State texts follow
the dataset templates exactly, e.g. "first beaker has 2 brown and 1 green
chemicals", "position 5 has person in red shirt and no hat", "position 1
has figure B".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import InvalidActionError
from ..graph import ORDINALS

ALCHEMY_COLORS = ("green", "purple", "orange", "red", "yellow", "brown")
SCENE_COLORS = ("red", "orange", "yellow", "green", "blue", "purple")
TANGRAM_FIGURES = ("A", "B", "C", "D", "E")

N_BEAKERS = 7
BEAKER_CAPACITY = 4
N_POSITIONS = 10
N_SLOTS = 5

_NUMERIC_ORDINAL_SUFFIX = {1: "st", 2: "nd", 3: "rd"}


def numeric_ordinal(n: int) -> str:
    if 10 <= n % 100 <= 20:
        return f"{n}th"
    return f"{n}{_NUMERIC_ORDINAL_SUFFIX.get(n % 10, 'th')}"


def _plural(count: int, noun: str) -> str:
    return noun if count == 1 else noun + "s"


# --- alchemy ---------------------------------------------------------------


def beaker_contents_text(colors: tuple[str, ...]) -> str:
    """Bottom-to-top run-length description of a beaker's contents.

    The noun is singular only when every run has exactly one unit:
    "1 yellow and 1 green chemical" but "2 brown and 1 green chemicals".
    """
    if not colors:
        return "0 chemicals"
    groups: list[tuple[str, int]] = []
    for color in colors:
        if groups and groups[-1][0] == color:
            groups[-1] = (color, groups[-1][1] + 1)
        else:
            groups.append((color, 1))
    body = " and ".join(f"{count} {color}" for color, count in groups)
    noun = "chemical" if all(count == 1 for _, count in groups) else "chemicals"
    return f"{body} {noun}"


@dataclass(frozen=True)
class AlchemyWorld:
    beakers: tuple[tuple[str, ...], ...]  # each bottom-to-top

    def __post_init__(self) -> None:
        if len(self.beakers) != N_BEAKERS:
            raise InvalidActionError(f"an alchemy world has {N_BEAKERS} beakers")
        for i, contents in enumerate(self.beakers, start=1):
            if len(contents) > BEAKER_CAPACITY:
                raise InvalidActionError(
                    f"beaker {i} exceeds its capacity of {BEAKER_CAPACITY}"
                )
            for color in contents:
                if color not in ALCHEMY_COLORS:
                    raise InvalidActionError(f"unknown chemical color {color!r}")

    def state_text(self, beaker: int) -> str:
        return (
            f"{ORDINALS[beaker - 1]} beaker has "
            f"{beaker_contents_text(self.beakers[beaker - 1])}"
        )

    def state_texts(self) -> list[str]:
        return [self.state_text(i) for i in range(1, N_BEAKERS + 1)]

    def total_units(self) -> int:
        return sum(len(b) for b in self.beakers)


@dataclass(frozen=True)
class Drain:
    beaker: int
    count: int
    text: str | None = None

    def surface(self) -> str:
        if self.text is not None:
            return self.text
        return (
            f"drain {self.count} {_plural(self.count, 'chemical')} "
            f"from the {ORDINALS[self.beaker - 1]} beaker"
        )


@dataclass(frozen=True)
class Pour:
    src: int
    dst: int
    text: str | None = None

    def surface(self) -> str:
        if self.text is not None:
            return self.text
        return (
            f"pour the {ORDINALS[self.src - 1]} beaker "
            f"into the {ORDINALS[self.dst - 1]} beaker"
        )


@dataclass(frozen=True)
class Mix:
    beaker: int
    text: str | None = None

    def surface(self) -> str:
        if self.text is not None:
            return self.text
        return f"mix the {ORDINALS[self.beaker - 1]} beaker"


AlchemyAction = Union[Drain, Pour, Mix]


def _check_beaker(beaker: int) -> None:
    if not 1 <= beaker <= N_BEAKERS:
        raise InvalidActionError(f"beaker index {beaker} is out of range")


def apply_alchemy(world: AlchemyWorld, action: AlchemyAction) -> AlchemyWorld:
    beakers = list(world.beakers)
    if isinstance(action, Drain):
        _check_beaker(action.beaker)
        contents = beakers[action.beaker - 1]
        if action.count < 1:
            raise InvalidActionError("must drain at least one unit")
        if action.count > len(contents):
            raise InvalidActionError(
                f"beaker {action.beaker} holds only {len(contents)} units"
            )
        beakers[action.beaker - 1] = contents[: len(contents) - action.count]
    elif isinstance(action, Pour):
        _check_beaker(action.src)
        _check_beaker(action.dst)
        if action.src == action.dst:
            raise InvalidActionError("cannot pour a beaker into itself")
        moved = beakers[action.src - 1]
        if not moved:
            raise InvalidActionError(f"beaker {action.src} is empty")
        if len(beakers[action.dst - 1]) + len(moved) > BEAKER_CAPACITY:
            raise InvalidActionError(
                f"beaker {action.dst} cannot hold {len(moved)} more units"
            )
        beakers[action.dst - 1] = beakers[action.dst - 1] + moved
        beakers[action.src - 1] = ()
    elif isinstance(action, Mix):
        _check_beaker(action.beaker)
        contents = beakers[action.beaker - 1]
        if not contents:
            raise InvalidActionError(f"beaker {action.beaker} is empty")
        if len(set(contents)) > 1:
            beakers[action.beaker - 1] = ("brown",) * len(contents)
    else:
        raise InvalidActionError(f"unknown alchemy action {action!r}")
    return AlchemyWorld(tuple(beakers))


# --- scene -----------------------------------------------------------------


@dataclass(frozen=True)
class Person:
    shirt: str
    hat: str | None = None

    def __post_init__(self) -> None:
        if self.shirt not in SCENE_COLORS:
            raise InvalidActionError(f"unknown shirt color {self.shirt!r}")
        if self.hat is not None and self.hat not in SCENE_COLORS:
            raise InvalidActionError(f"unknown hat color {self.hat!r}")

    def description(self) -> str:
        hat = f"{self.hat} hat" if self.hat is not None else "no hat"
        return f"in {self.shirt} shirt and {hat}"


@dataclass(frozen=True)
class SceneWorld:
    positions: tuple[Person | None, ...]

    def __post_init__(self) -> None:
        if len(self.positions) != N_POSITIONS:
            raise InvalidActionError(f"a scene world has {N_POSITIONS} positions")

    def state_text(self, position: int) -> str:
        person = self.positions[position - 1]
        if person is None:
            return f"position {position} has no person"
        return f"position {position} has person {person.description()}"

    def state_texts(self) -> list[str]:
        return [self.state_text(i) for i in range(1, N_POSITIONS + 1)]

    def occupied(self) -> list[int]:
        return [i + 1 for i, p in enumerate(self.positions) if p is not None]

    def empty(self) -> list[int]:
        return [i + 1 for i, p in enumerate(self.positions) if p is None]


@dataclass(frozen=True)
class Appear:
    position: int
    person: Person
    text: str | None = None

    def surface(self) -> str:
        if self.text is not None:
            return self.text
        return (
            f"a person {self.person.description()} appears "
            f"at position {self.position}"
        )


@dataclass(frozen=True)
class Leave:
    position: int
    text: str | None = None

    def surface(self) -> str:
        if self.text is not None:
            return self.text
        return f"the person at position {self.position} leaves"


@dataclass(frozen=True)
class Move:
    src: int
    dst: int
    text: str | None = None

    def surface(self) -> str:
        if self.text is not None:
            return self.text
        return f"the person at position {self.src} moves to position {self.dst}"


SceneAction = Union[Appear, Leave, Move]


def _check_position(position: int) -> None:
    if not 1 <= position <= N_POSITIONS:
        raise InvalidActionError(f"position {position} is out of range")


def apply_scene(world: SceneWorld, action: SceneAction) -> SceneWorld:
    positions = list(world.positions)
    if isinstance(action, Appear):
        _check_position(action.position)
        if positions[action.position - 1] is not None:
            raise InvalidActionError(f"position {action.position} is occupied")
        positions[action.position - 1] = action.person
    elif isinstance(action, Leave):
        _check_position(action.position)
        if positions[action.position - 1] is None:
            raise InvalidActionError(f"position {action.position} is empty")
        positions[action.position - 1] = None
    elif isinstance(action, Move):
        _check_position(action.src)
        _check_position(action.dst)
        if action.src == action.dst:
            raise InvalidActionError("cannot move a person onto themselves")
        if positions[action.src - 1] is None:
            raise InvalidActionError(f"position {action.src} is empty")
        if positions[action.dst - 1] is not None:
            raise InvalidActionError(f"position {action.dst} is occupied")
        positions[action.dst - 1] = positions[action.src - 1]
        positions[action.src - 1] = None
    else:
        raise InvalidActionError(f"unknown scene action {action!r}")
    return SceneWorld(tuple(positions))


# --- tangrams --------------------------------------------------------------


@dataclass(frozen=True)
class TangramsWorld:
    slots: tuple[str | None, ...]
    removed: tuple[str, ...] = ()  # stack; last element was removed last

    def __post_init__(self) -> None:
        if len(self.slots) != N_SLOTS:
            raise InvalidActionError(f"a tangrams world has {N_SLOTS} slots")
        present = [f for f in self.slots if f is not None] + list(self.removed)
        if len(present) != len(set(present)):
            raise InvalidActionError("a figure appears twice")
        for figure in present:
            if figure not in TANGRAM_FIGURES:
                raise InvalidActionError(f"unknown figure {figure!r}")

    def state_text(self, slot: int) -> str:
        figure = self.slots[slot - 1]
        if figure is None:
            return f"position {slot} has no figure"
        return f"position {slot} has figure {figure}"

    def state_texts(self) -> list[str]:
        return [self.state_text(i) for i in range(1, N_SLOTS + 1)]

    def occupied(self) -> list[int]:
        return [i + 1 for i, f in enumerate(self.slots) if f is not None]

    def empty(self) -> list[int]:
        return [i + 1 for i, f in enumerate(self.slots) if f is None]


@dataclass(frozen=True)
class Swap:
    a: int
    b: int
    text: str | None = None

    def surface(self) -> str:
        if self.text is not None:
            return self.text
        lo, hi = sorted((self.a, self.b))
        return f"swap the {numeric_ordinal(lo)} and {numeric_ordinal(hi)} figure"


@dataclass(frozen=True)
class Delete:
    slot: int
    text: str | None = None

    def surface(self) -> str:
        if self.text is not None:
            return self.text
        return f"delete the {numeric_ordinal(self.slot)} figure"


@dataclass(frozen=True)
class AddBack:
    slot: int
    text: str | None = None

    def surface(self) -> str:
        if self.text is not None:
            return self.text
        return (
            "add the last removed figure back "
            f"to the {numeric_ordinal(self.slot)} position"
        )


TangramsAction = Union[Swap, Delete, AddBack]


def _check_slot(slot: int) -> None:
    if not 1 <= slot <= N_SLOTS:
        raise InvalidActionError(f"slot {slot} is out of range")


def apply_tangrams(world: TangramsWorld, action: TangramsAction) -> TangramsWorld:
    slots = list(world.slots)
    removed = list(world.removed)
    if isinstance(action, Swap):
        _check_slot(action.a)
        _check_slot(action.b)
        if action.a == action.b:
            raise InvalidActionError("cannot swap a slot with itself")
        if slots[action.a - 1] is None or slots[action.b - 1] is None:
            raise InvalidActionError("both swapped slots must hold figures")
        slots[action.a - 1], slots[action.b - 1] = (
            slots[action.b - 1],
            slots[action.a - 1],
        )
    elif isinstance(action, Delete):
        _check_slot(action.slot)
        figure = slots[action.slot - 1]
        if figure is None:
            raise InvalidActionError(f"slot {action.slot} is already empty")
        slots[action.slot - 1] = None
        removed.append(figure)
    elif isinstance(action, AddBack):
        _check_slot(action.slot)
        if not removed:
            raise InvalidActionError("no figure has been removed")
        if slots[action.slot - 1] is not None:
            raise InvalidActionError(f"slot {action.slot} is occupied")
        slots[action.slot - 1] = removed.pop()
    else:
        raise InvalidActionError(f"unknown tangrams action {action!r}")
    return TangramsWorld(tuple(slots), tuple(removed))
