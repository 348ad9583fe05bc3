"""Node-text similarity policies.

Whether two step texts "say the same thing" is task-dependent:

- exact: byte equality after trimming outer whitespace (state-manipulation
  tasks, whose step texts are templated);
- math-value-set: equality of the sets of numeric literals mentioned
  ("Natalia sold 48/2 = 24 clips in May" -> {48, 2, 24});
- soft-threshold: a learned or heuristic score must exceed a threshold
  (default 0.25). The score comes from an external scorer process when one
  is configured, else from the builtin token-overlap F1.

The external scorer protocol is line-oriented: the toolkit writes one JSON
record {"candidate": ..., "reference": ...} per pair to the scorer's stdin
and reads one decimal score per line from its stdout, in order. The scorer
must flush after every line. At most one scorer process runs at a time and
(candidate, reference) results are cached.
"""

from __future__ import annotations

import enum
import json
import re
import shlex
import string
import subprocess
import threading
from collections import Counter
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

from .errors import ExternalScorerUnavailableError
from .tasks import TaskSpec

DEFAULT_SOFT_THRESHOLD = 0.25

_NUMBER_TOKEN_RE = re.compile(r"[-+]?(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?")
_SIGN_PRECEDERS = frozenset("=(")
_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


class PolicyKind(enum.Enum):
    EXACT = "exact"
    MATH_VALUE_SET = "math-value-set"
    SOFT_THRESHOLD = "soft-threshold"


class ExternalScorer:
    """Handle on a line-oriented external scoring process."""

    def __init__(self, command: str):
        self.command = command
        self._proc: subprocess.Popen[str] | None = None
        self._lock = threading.Lock()
        self._cache: dict[tuple[str, str], float] = {}

    def _ensure_process(self) -> subprocess.Popen[str]:
        if self._proc is not None and self._proc.poll() is None:
            return self._proc
        try:
            self._proc = subprocess.Popen(
                shlex.split(self.command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as e:
            raise ExternalScorerUnavailableError(
                f"could not start scorer {self.command!r}: {e}"
            ) from e
        return self._proc

    def score(self, candidate: str, reference: str) -> float:
        key = (candidate, reference)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
            proc = self._ensure_process()
            record = json.dumps({"candidate": candidate, "reference": reference})
            try:
                assert proc.stdin is not None and proc.stdout is not None
                proc.stdin.write(record + "\n")
                proc.stdin.flush()
                line = proc.stdout.readline()
            except (OSError, ValueError) as e:
                raise ExternalScorerUnavailableError(
                    f"scorer {self.command!r} pipe failed: {e}"
                ) from e
            if not line:
                raise ExternalScorerUnavailableError(
                    f"scorer {self.command!r} closed its output"
                )
            try:
                value = float(line.strip())
            except ValueError:
                raise ExternalScorerUnavailableError(
                    f"scorer {self.command!r} wrote a non-numeric line: {line!r}"
                ) from None
            self._cache[key] = value
            return value

    def score_batch(self, pairs: list[tuple[str, str]]) -> list[float]:
        return [self.score(c, r) for c, r in pairs]

    def close(self) -> None:
        with self._lock:
            if self._proc is not None and self._proc.poll() is None:
                try:
                    if self._proc.stdin:
                        self._proc.stdin.close()
                    self._proc.terminate()
                    self._proc.wait(timeout=5)
                except OSError:
                    pass
            self._proc = None

    def __enter__(self) -> "ExternalScorer":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


@dataclass(frozen=True)
class SimilarityPolicy:
    kind: PolicyKind
    threshold: float = DEFAULT_SOFT_THRESHOLD
    scorer: ExternalScorer | None = None  # None -> builtin overlap score


def default_policy(
    task: TaskSpec,
    scorer: ExternalScorer | None = None,
    threshold: float = DEFAULT_SOFT_THRESHOLD,
) -> SimilarityPolicy:
    """The similarity each task family uses by default."""
    if task.is_scone:
        return SimilarityPolicy(PolicyKind.EXACT)
    if task.family in ("gsm8k", "aqua-rat"):
        return SimilarityPolicy(PolicyKind.MATH_VALUE_SET)
    return SimilarityPolicy(PolicyKind.SOFT_THRESHOLD, threshold=threshold, scorer=scorer)


def sigma_exact(candidate: str, reference: str) -> bool:
    return candidate.strip() == reference.strip()


def extract_math_values(text: str) -> frozenset[Decimal]:
    """The set of numeric literals mentioned in a text.

    A literal is a maximal digit run with optional thousands commas and one
    optional decimal point. A leading sign is honored only where it cannot
    be an infix operator: at the start of the text or after '=' or '('
    (ignoring whitespace). Values are exact decimals, so 24 == 24.0 and the
    result is a set: duplicated mentions collapse.
    """
    values: set[Decimal] = set()
    for m in _NUMBER_TOKEN_RE.finditer(text):
        literal = m.group()
        if literal[0] in "+-":
            j = m.start() - 1
            while j >= 0 and text[j].isspace():
                j -= 1
            if j >= 0 and text[j] not in _SIGN_PRECEDERS:
                literal = literal[1:]
        try:
            values.add(Decimal(literal.replace(",", "")))
        except InvalidOperation:  # pragma: no cover - the regex precludes this
            continue
    return frozenset(values)


def sigma_math(candidate: str, reference: str) -> bool:
    return extract_math_values(candidate) == extract_math_values(reference)


def _overlap_tokens(text: str) -> Counter[str]:
    return Counter(text.lower().translate(_PUNCT_TABLE).split())


def builtin_overlap_score(candidate: str, reference: str) -> float:
    """Token-multiset F1 over lowercased, punctuation-stripped tokens."""
    cand = _overlap_tokens(candidate)
    ref = _overlap_tokens(reference)
    if not cand or not ref:
        return 1.0 if cand == ref else 0.0
    common = sum((cand & ref).values())
    if common == 0:
        return 0.0
    precision = common / sum(cand.values())
    recall = common / sum(ref.values())
    return 2 * precision * recall / (precision + recall)


def sigma_soft(candidate: str, reference: str, policy: SimilarityPolicy) -> bool:
    """True when the configured score strictly exceeds the threshold."""
    if policy.scorer is not None:
        score = policy.scorer.score(candidate, reference)
    else:
        score = builtin_overlap_score(candidate, reference)
    return score > policy.threshold


def sigma(policy: SimilarityPolicy, candidate: str, reference: str) -> bool:
    """Dispatch on the policy kind; candidate is the predicted text."""
    if policy.kind is PolicyKind.EXACT:
        return sigma_exact(candidate, reference)
    if policy.kind is PolicyKind.MATH_VALUE_SET:
        return sigma_math(candidate, reference)
    return sigma_soft(candidate, reference, policy)
