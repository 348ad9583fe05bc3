"""Independent reference implementations used to check the fast code paths.

The graph edit distance oracle below enumerates every partial injective
mapping between editable steps and takes the cheapest, straight from the
cost definition. It shares nothing with the production solver except the
answer parser, so agreement between the two is meaningful evidence.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable

from rgraph.graph import (
    STEP_KINDS,
    QaComponents,
    ReasoningGraph,
    build,
    extract_answer,
)
from rgraph.errors import ReasoningGraphError
from rgraph.tasks import TaskSpec, get_task

# extract_answer raises on malformed answer nodes; the oracle folds that
# into "answers differ", matching the infinite-distance contract.

SigmaFn = Callable[[str, str], bool]


def _reduced(
    graph: ReasoningGraph,
) -> tuple[list[int], set[tuple[int, int]], set[int]]:
    """Editable steps, reduced edges and dropped steps, from raw parts."""
    step_ids = [i for i in sorted(graph.nodes) if graph.nodes[i].kind in STEP_KINDS]
    answer_id = graph.answer_node_id
    dropped = {
        i
        for i in step_ids
        if i != answer_id and not any(v == i for _, v in graph.edges)
    }
    kept_edges = {
        (u, v) for (u, v) in graph.edges if u not in dropped and v not in dropped
    }
    editable = [i for i in step_ids if i not in dropped and i != answer_id]
    return editable, kept_edges, dropped


def _answers_equal(pred: ReasoningGraph, gold: ReasoningGraph) -> bool:
    try:
        return extract_answer(pred) == extract_answer(gold)
    except ReasoningGraphError:
        return False


def oracle_norm_terms(pred: ReasoningGraph, gold: ReasoningGraph) -> tuple[int, int]:
    out = []
    for g in (pred, gold):
        _, edges, dropped = _reduced(g)
        out.append(len(g.nodes) - len(dropped) + len(edges))
    return out[0], out[1]


def oracle_ged(pred: ReasoningGraph, gold: ReasoningGraph, sigma: SigmaFn) -> float:
    """Minimum edit cost over all partial injective step mappings."""
    if not _answers_equal(pred, gold):
        return float("inf")
    pred_steps, pred_edges, _ = _reduced(pred)
    gold_steps, gold_edges, _ = _reduced(gold)

    anchors: dict[int, int] = {
        i: i for i in pred.nodes if pred.nodes[i].kind not in STEP_KINDS
    }
    if pred.answer_node_id is not None and gold.answer_node_id is not None:
        anchors[pred.answer_node_id] = gold.answer_node_id
        pred_steps = [i for i in pred_steps if i != pred.answer_node_id]
        gold_steps = [i for i in gold_steps if i != gold.answer_node_id]

    def mapping_cost(pairs: tuple[tuple[int, int], ...]) -> float:
        mu = dict(anchors)
        mu.update(pairs)
        cost = 0.0
        cost += len(pred_steps) - len(pairs)
        cost += len(gold_steps) - len(pairs)
        for p, g in pairs:
            if not sigma(pred.nodes[p].text, gold.nodes[g].text):
                cost += 1
        matched = sum(
            1
            for (u, v) in pred_edges
            if u in mu and v in mu and (mu[u], mu[v]) in gold_edges
        )
        cost += (len(pred_edges) - matched) + (len(gold_edges) - matched)
        return cost

    best = mapping_cost(())
    for k in range(1, min(len(pred_steps), len(gold_steps)) + 1):
        for chosen in itertools.combinations(pred_steps, k):
            for image in itertools.permutations(gold_steps, k):
                best = min(best, mapping_cost(tuple(zip(chosen, image))))
    return best


_WORDS = (
    "the total is",
    "she sold",
    "he bought",
    "twice as many",
    "half of",
    "adds up to",
    "take away",
    "per day",
)


def random_components(rng: random.Random) -> QaComponents:
    context = tuple(
        f"Fact {i} says {rng.choice(_WORDS)} {rng.randint(1, 9)}."
        for i in range(rng.randint(1, 2))
    )
    return QaComponents(context=context, question=("How many in all?",))


def random_steps(
    rng: random.Random, n_premises: int, n_steps: int
) -> list[tuple[set[int], str]]:
    """Random derivation steps over ids 1..n_premises, ending in an answer."""
    steps: list[tuple[set[int], str]] = []
    for k in range(n_steps):
        node_id = n_premises + k + 1
        pool = list(range(1, node_id))
        n_parents = rng.randint(0, min(2, len(pool)))
        parents = set(rng.sample(pool, n_parents))
        text = f"{rng.choice(_WORDS)} {rng.randint(1, 9)}"
        steps.append((parents, text))
    answer_pool = list(range(1, n_premises + n_steps + 1))
    parents = set(rng.sample(answer_pool, rng.randint(1, min(2, len(answer_pool)))))
    steps.append((parents, "The answer is 7"))
    return steps


def random_graph(rng: random.Random, task: TaskSpec | None = None) -> ReasoningGraph:
    task = task or get_task("gsm8k")
    components = random_components(rng)
    n_premises = len(components.context) + 1
    steps = random_steps(rng, n_premises, rng.randint(0, 4))
    return build(task, components, steps)


def random_graph_pair(
    rng: random.Random,
) -> tuple[ReasoningGraph, ReasoningGraph]:
    """A gold graph and a perturbed prediction over the same components."""
    task = get_task("gsm8k")
    components = random_components(rng)
    n_premises = len(components.context) + 1
    gold_steps = random_steps(rng, n_premises, rng.randint(1, 3))
    gold = build(task, components, gold_steps)

    pred_steps = [(set(p), t) for p, t in gold_steps]
    for _ in range(rng.randint(0, 3)):
        op = rng.choice(("edit", "drop", "insert", "rewire"))
        body = pred_steps[:-1]
        if op == "edit" and body:
            i = rng.randrange(len(body))
            pred_steps[i] = (pred_steps[i][0], f"{rng.choice(_WORDS)} {rng.randint(1, 9)}")
        elif op == "drop" and len(body) > 1:
            victim = rng.randrange(len(body))
            victim_id = n_premises + victim + 1
            del pred_steps[victim]
            fixed: list[tuple[set[int], str]] = []
            for parents, text in pred_steps:
                kept = set()
                for u in parents:
                    if u == victim_id:
                        continue
                    kept.add(u - 1 if u > victim_id else u)
                fixed.append((kept, text))
            if not fixed[-1][0]:
                fixed[-1] = ({1}, fixed[-1][1])
            pred_steps = fixed
        elif op == "insert":
            at = rng.randrange(len(pred_steps))
            new_id = n_premises + at + 1
            pool = list(range(1, new_id))
            parents = set(rng.sample(pool, min(len(pool), rng.randint(0, 2))))
            shifted: list[tuple[set[int], str]] = []
            for parents_k, text in pred_steps:
                shifted.append(
                    ({u + 1 if u >= new_id else u for u in parents_k}, text)
                )
            shifted.insert(at, (parents, f"{rng.choice(_WORDS)} {rng.randint(1, 9)}"))
            pred_steps = shifted
        elif op == "rewire" and body:
            i = rng.randrange(len(body))
            node_id = n_premises + i + 1
            pool = list(range(1, node_id))
            parents = set(rng.sample(pool, min(len(pool), rng.randint(0, 2))))
            pred_steps[i] = (parents, pred_steps[i][1])
    pred = build(task, components, pred_steps)
    return pred, gold
