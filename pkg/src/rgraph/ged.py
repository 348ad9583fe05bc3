"""Graph edit distance between two reasoning graphs over shared premises.

Unit costs throughout. Premise nodes are anchored to themselves (both
graphs linearize the same question block), and the two answer nodes are
anchored to each other: that pair costs 0 when the extracted answers are
equal and the whole distance is infinite when they are not. Steps with no
antecedents (other than the answer node) are hallucinated leaves; they are
removed, along with their incident edges, before any matching happens, and
the normalization terms count the reduced graphs.

The exact solver enumerates full injections of the smaller editable side
into the larger. That loses nothing: extending a partial mapping by one
pair replaces a deletion and an insertion (cost 2) with a substitution
(cost at most 1) and can only convert unmatched edges to matched ones, so
some cheapest mapping is always total on the smaller side.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

from .errors import ExactnessBoundExceededError, ReasoningGraphError
from .graph import ReasoningGraph, extract_answer, topological_order

SigmaFn = Callable[[str, str], bool]

DEFAULT_EXACT_BOUND = 6
DEFAULT_APPROX_BUDGET = 200_000

Edge = tuple[int, int]


@dataclass(frozen=True)
class GedOutcome:
    """An edit distance plus the mapping that witnesses it.

    delta is math.inf when the answers disagree. mapping covers premises
    (identity), the answer pair when anchored, and the matched steps,
    keyed by predicted node id. norm_terms are the reduced |N| + |E| of
    the predicted and gold graphs, in that order.
    """

    delta: float
    mapping: dict[int, int]
    exact: bool
    norm_terms: tuple[int, int]


@dataclass(frozen=True)
class _Side:
    graph: ReasoningGraph
    steps: tuple[int, ...]  # editable, topologically ordered
    edges: frozenset[Edge]  # reduced
    parents: dict[int, frozenset[int]]  # reduced, editable steps + answer
    norm: int


@dataclass(frozen=True)
class _Prepared:
    pred: _Side
    gold: _Side
    anchors: dict[int, int]
    answers_equal: bool


def _make_side(graph: ReasoningGraph) -> _Side:
    dropped = graph.zero_antecedent_step_ids
    edges = frozenset(
        (u, v) for (u, v) in graph.edges if u not in dropped and v not in dropped
    )
    answer_id = graph.answer_node_id
    step_ids = set(graph.step_ids)
    steps = tuple(
        i
        for i in topological_order(graph)
        if i in step_ids and i not in dropped and i != answer_id
    )
    parents: dict[int, frozenset[int]] = {}
    for i in steps:
        parents[i] = frozenset(u for u in graph.parents(i) if u not in dropped)
    if answer_id is not None:
        parents[answer_id] = frozenset(
            u for u in graph.parents(answer_id) if u not in dropped
        )
    norm = (len(graph.nodes) - len(dropped)) + len(edges)
    return _Side(graph, steps, edges, parents, norm)


def _prepare(pred: ReasoningGraph, gold: ReasoningGraph) -> _Prepared:
    pred_side = _make_side(pred)
    gold_side = _make_side(gold)
    if pred.premise_ids != gold.premise_ids:
        raise ValueError(
            "graphs must linearize the same question block "
            f"(premises {sorted(pred.premise_ids)} vs {sorted(gold.premise_ids)})"
        )
    anchors = {i: i for i in pred.premise_ids}
    try:
        pred_answer = extract_answer(pred)
        gold_answer = extract_answer(gold)
        answers_equal = pred_answer == gold_answer
    except ReasoningGraphError:
        answers_equal = False
    if answers_equal and not pred.task.is_scone:
        anchors[pred.answer_node_id] = gold.answer_node_id
    return _Prepared(pred_side, gold_side, anchors, answers_equal)


def _sigma_matrix(
    prep: _Prepared, sigma: SigmaFn
) -> dict[tuple[int, int], bool]:
    matrix: dict[tuple[int, int], bool] = {}
    for p in prep.pred.steps:
        text_p = prep.pred.graph.text(p)
        for g in prep.gold.steps:
            matrix[(p, g)] = sigma(text_p, prep.gold.graph.text(g))
    return matrix


def _mapping_cost(
    prep: _Prepared,
    pairs: tuple[tuple[int, int], ...],
    matrix: dict[tuple[int, int], bool],
) -> float:
    mu = dict(prep.anchors)
    mu.update(pairs)
    cost = float(len(prep.pred.steps) - len(pairs))
    cost += len(prep.gold.steps) - len(pairs)
    for p, g in pairs:
        if not matrix[(p, g)]:
            cost += 1
    matched = 0
    gold_edges = prep.gold.edges
    for u, v in prep.pred.edges:
        if u in mu and v in mu and (mu[u], mu[v]) in gold_edges:
            matched += 1
    cost += (len(prep.pred.edges) - matched) + (len(gold_edges) - matched)
    return cost


def _infinite_outcome(prep: _Prepared, exact: bool) -> GedOutcome:
    return GedOutcome(
        math.inf,
        dict(prep.anchors),
        exact,
        (prep.pred.norm, prep.gold.norm),
    )


def exact_ged(
    pred: ReasoningGraph,
    gold: ReasoningGraph,
    sigma: SigmaFn,
    bound: int = DEFAULT_EXACT_BOUND,
) -> GedOutcome:
    """Provably minimal edit distance; refuses oversized instances."""
    prep = _prepare(pred, gold)
    if not prep.answers_equal:
        return _infinite_outcome(prep, exact=True)
    n_pred, n_gold = len(prep.pred.steps), len(prep.gold.steps)
    if n_pred > bound or n_gold > bound:
        raise ExactnessBoundExceededError(
            f"instance has {n_pred} x {n_gold} editable steps; "
            f"the exact solver is bounded at {bound} per side"
        )
    return _exact_from_prep(prep, sigma)


def _exact_from_prep(prep: _Prepared, sigma: SigmaFn) -> GedOutcome:
    matrix = _sigma_matrix(prep, sigma)
    invert = len(prep.pred.steps) > len(prep.gold.steps)
    small = prep.gold.steps if invert else prep.pred.steps
    big = prep.pred.steps if invert else prep.gold.steps

    best_cost = math.inf
    best_pairs: tuple[tuple[int, int], ...] = ()
    for image in itertools.permutations(big, len(small)):
        if invert:
            pairs = tuple((p, g) for g, p in zip(small, image))
        else:
            pairs = tuple(zip(small, image))
        cost = _mapping_cost(prep, pairs, matrix)
        if cost < best_cost:
            best_cost = cost
            best_pairs = pairs
    mapping = dict(prep.anchors)
    mapping.update(best_pairs)
    return GedOutcome(best_cost, mapping, True, (prep.pred.norm, prep.gold.norm))


def _depths(side: _Side) -> dict[int, int]:
    depth: dict[int, int] = {i: 0 for i in side.graph.premise_ids}
    for i in side.steps:
        depth[i] = 1 + max((depth.get(u, 0) for u in side.parents[i]), default=-1)
    return depth


def approx_ged(
    pred: ReasoningGraph,
    gold: ReasoningGraph,
    sigma: SigmaFn,
    budget: int = DEFAULT_APPROX_BUDGET,
) -> GedOutcome:
    """Greedy upper bound on the edit distance.

    Predicted steps are visited in topological order; each grabs the best
    still-unmatched gold step ranked by (text similarity verdict, overlap
    of translated premise sets, closeness of topological depth), ties
    broken toward the smallest gold id. The budget caps candidate
    evaluations; when it runs out the remaining steps stay unmatched.
    Never below the exact distance, and zero for identical graphs.
    """
    prep = _prepare(pred, gold)
    if not prep.answers_equal:
        return _infinite_outcome(prep, exact=False)
    return _approx_from_prep(prep, sigma, budget)


def _approx_from_prep(prep: _Prepared, sigma: SigmaFn, budget: int) -> GedOutcome:
    pred_depth = _depths(prep.pred)
    gold_depth = _depths(prep.gold)
    matrix: dict[tuple[int, int], bool] = {}

    mu = dict(prep.anchors)
    pairs: list[tuple[int, int]] = []
    used: set[int] = set()
    remaining = budget
    for p in prep.pred.steps:
        if remaining <= 0:
            break
        translated = {mu[u] for u in prep.pred.parents[p] if u in mu}
        text_p = prep.pred.graph.text(p)
        best_key: tuple[bool, int, int, int] | None = None
        best_g: int | None = None
        for g in prep.gold.steps:
            if g in used:
                continue
            if remaining <= 0:
                break
            remaining -= 1
            verdict = matrix.setdefault(
                (p, g), sigma(text_p, prep.gold.graph.text(g))
            )
            overlap = len(translated & prep.gold.parents[g])
            key = (
                verdict,
                overlap,
                -abs(pred_depth[p] - gold_depth[g]),
                -g,
            )
            if best_key is None or key > best_key:
                best_key = key
                best_g = g
        if best_g is not None:
            mu[p] = best_g
            pairs.append((p, best_g))
            used.add(best_g)
    cost = _mapping_cost(prep, tuple(pairs), matrix)
    return GedOutcome(cost, mu, False, (prep.pred.norm, prep.gold.norm))


def ged(
    pred: ReasoningGraph,
    gold: ReasoningGraph,
    sigma: SigmaFn,
    exact_bound: int = DEFAULT_EXACT_BOUND,
    approx_budget: int = DEFAULT_APPROX_BUDGET,
) -> GedOutcome:
    """Exact distance when the instance fits the bound, else the greedy one."""
    prep = _prepare(pred, gold)
    if not prep.answers_equal:
        return _infinite_outcome(prep, exact=True)
    if len(prep.pred.steps) <= exact_bound and len(prep.gold.steps) <= exact_bound:
        return _exact_from_prep(prep, sigma)
    return _approx_from_prep(prep, sigma, approx_budget)
