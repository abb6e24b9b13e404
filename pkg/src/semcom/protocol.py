"""Goal-directed exploration protocol over a task knowledge graph.

A task ("make coffee") is grounded as paths through a knowledge graph whose
vertices are objects and whose arcs are actions. The agent explores its
environment, recognizes objects through the feature link, and stops as soon
as every object required by some path has been recognized with confidence at
least ξ. Path requirements and environment labels are compared through a
deterministic character-trigram embedding, so near-synonyms can satisfy a
requirement without exact string equality.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError, GraphLookupError
from .exploration import observe_object
from .feature_channel import LinkConfig
from .gm_model import GmModel

__all__ = [
    "KnowledgeGraph",
    "KnowledgePath",
    "SemanticMatchConfig",
    "RecognitionEntry",
    "ProtocolState",
    "ProtocolLimits",
    "find_paths",
    "embed",
    "semantic_match",
    "match_map",
    "check_feasibility",
    "update_recognition",
    "check_path_hit",
    "run_protocol",
]

_EMBED_DIM = 64


@dataclass(frozen=True)
class KnowledgeGraph:
    """Directed multigraph of objects (vertices) linked by actions (arcs)."""

    vertices: tuple[str, ...]
    arcs: tuple[tuple[str, str, str], ...]  # (from, action, to)

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise ConfigError("knowledge graph has duplicate vertices")
        if len(set(self.arcs)) != len(self.arcs):
            raise ConfigError("knowledge graph has duplicate arcs")
        known = set(self.vertices)
        for src, action, dst in self.arcs:
            if src not in known or dst not in known:
                raise ConfigError(f"arc ({src!r}, {action!r}, {dst!r}) references unknown vertex")

    @classmethod
    def from_dict(cls, raw: dict) -> "KnowledgeGraph":
        arcs = tuple(
            (str(a["from"]), str(a["action"]), str(a["to"])) for a in raw.get("arcs", ())
        )
        return cls(tuple(str(v) for v in raw["vertices"]), arcs)


@dataclass(frozen=True)
class KnowledgePath:
    """One way to accomplish the task: a vertex walk plus the actions between.

    The first vertex is where the agent already is, so the requirement set —
    what must be recognized in the environment — is every *later* vertex.
    ``actions`` may be None for hand-written fixtures.
    """

    vertices: tuple[str, ...]
    actions: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if len(self.vertices) < 2:
            raise DomainError("a path needs at least a start and a goal vertex")
        if self.actions is not None and len(self.actions) != len(self.vertices) - 1:
            raise DomainError(
                f"{len(self.vertices)} vertices need {len(self.vertices) - 1} actions, "
                f"got {len(self.actions)}"
            )

    @property
    def required(self) -> tuple[str, ...]:
        """Objects this path needs the agent to find, in first-seen order."""
        return tuple(dict.fromkeys(self.vertices[1:]))


@dataclass(frozen=True)
class SemanticMatchConfig:
    provider: str = "trigram"
    metric: str = "cosine"
    epsilon: float = 0.1
    synonyms: tuple[tuple[str, str], ...] = ()  # (alias, canonical) pairs

    def __post_init__(self) -> None:
        if self.provider != "trigram":
            raise ConfigError(f"unknown embedding provider {self.provider!r}")
        if self.metric not in ("cosine", "exact"):
            raise ConfigError(f"unknown match metric {self.metric!r}")
        if not 0.0 <= self.epsilon < 1.0:
            raise ConfigError(f"epsilon must be in [0, 1), got {self.epsilon!r}")


@dataclass
class RecognitionEntry:
    confidence: float = 0.0
    views: int = 0
    recognized: bool = False


@dataclass
class ProtocolState:
    paths: tuple[KnowledgePath, ...]
    relevant: frozenset[str]
    recognized: dict[str, RecognitionEntry] = field(default_factory=dict)
    elapsed_s: float = 0.0
    status: str = "exploring"
    hit_index: int | None = None
    feasible_indices: tuple[int, ...] = ()


@dataclass(frozen=True)
class ProtocolLimits:
    xi: float = 0.9
    max_views: int = 64
    time_limit_s: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.xi < 1.0:
            raise ConfigError(f"xi must be in (0, 1), got {self.xi!r}")
        if self.max_views < 1:
            raise ConfigError(f"max_views must be >= 1, got {self.max_views!r}")


def find_paths(
    kg: KnowledgeGraph, start: str, goal: str, max_depth: int = 6, max_paths: int = 16
) -> tuple[KnowledgePath, ...]:
    """Simple paths from start to goal, emitted in lexicographic action/vertex order."""
    if start not in kg.vertices:
        raise GraphLookupError(f"start vertex {start!r} is not in the graph")
    if goal not in kg.vertices:
        raise GraphLookupError(f"goal vertex {goal!r} is not in the graph")
    if max_depth < 1 or max_paths < 1:
        raise DomainError("max_depth and max_paths must be >= 1")
    adjacency: dict[str, list[tuple[str, str]]] = {v: [] for v in kg.vertices}
    for src, action, dst in kg.arcs:
        adjacency[src].append((action, dst))
    for options in adjacency.values():
        options.sort()
    found: list[KnowledgePath] = []

    def walk(vertex: str, vertices: list[str], actions: list[str]) -> None:
        if len(found) >= max_paths:
            return
        if vertex == goal and len(vertices) > 1:
            found.append(KnowledgePath(tuple(vertices), tuple(actions)))
            return
        if len(actions) >= max_depth:
            return
        for action, nxt in adjacency[vertex]:
            if nxt in vertices:
                continue
            vertices.append(nxt)
            actions.append(action)
            walk(nxt, vertices, actions)
            vertices.pop()
            actions.pop()

    walk(start, [start], [])
    return tuple(found)


def _canonical(cfg: SemanticMatchConfig, word: str) -> str:
    text = word.strip().lower()
    for alias, canonical in cfg.synonyms:
        if text == alias.strip().lower():
            return canonical.strip().lower()
    return text


def embed(cfg: SemanticMatchConfig, word: str) -> np.ndarray:
    """Deterministic 64-dim character-trigram embedding of a (canonicalized) word."""
    text = _canonical(cfg, word)
    if not text:
        raise DomainError("cannot embed an empty word")
    padded = f"#{text}#"
    vec = np.zeros(_EMBED_DIM, dtype=np.float64)
    for i in range(len(padded) - 2):
        digest = hashlib.sha256(padded[i : i + 3].encode("utf-8")).digest()
        idx = digest[0] % _EMBED_DIM
        sign = 1.0 if digest[1] & 1 else -1.0
        vec[idx] += sign
    nrm = float(np.linalg.norm(vec))
    if nrm == 0.0:
        # trigram signs cancelled exactly; fall back to a one-hot of the word hash
        digest = hashlib.sha256(padded.encode("utf-8")).digest()
        vec[digest[0] % _EMBED_DIM] = 1.0
        nrm = 1.0
    return vec / nrm


def semantic_match(cfg: SemanticMatchConfig, a: str, b: str) -> bool:
    """True when two words name the same thing, up to the ε similarity slack."""
    ca, cb = _canonical(cfg, a), _canonical(cfg, b)
    if cfg.metric == "exact":
        return ca == cb
    if ca == cb:
        return True
    similarity = float(embed(cfg, ca) @ embed(cfg, cb))
    return similarity >= 1.0 - cfg.epsilon


def match_map(
    objects: tuple[str, ...] | list[str],
    labels: tuple[str, ...] | list[str],
    cfg: SemanticMatchConfig,
) -> dict[str, frozenset[str]]:
    """For each object word, the set of label words that semantically match it."""
    return {
        obj: frozenset(lab for lab in labels if semantic_match(cfg, obj, lab))
        for obj in objects
    }


def check_feasibility(
    paths: tuple[KnowledgePath, ...] | list[KnowledgePath],
    relevant: frozenset[str] | set[str],
    mode: str = "subset",
    match: dict[str, frozenset[str]] | None = None,
) -> tuple[int, ...]:
    """Indices of paths the environment can satisfy.

    "subset" keeps paths whose every requirement appears among the relevant
    labels; "intersect" keeps paths with at least one requirement present.
    Without a match map, comparison is literal string equality.
    """
    if mode not in ("subset", "intersect"):
        raise DomainError(f"mode must be 'subset' or 'intersect', got {mode!r}")

    def satisfied(req: str) -> bool:
        if match is None:
            return req in relevant
        return bool(match.get(req, frozenset()) & relevant)

    feasible = []
    for idx, path in enumerate(paths):
        flags = [satisfied(req) for req in path.required]
        if (mode == "subset" and all(flags)) or (mode == "intersect" and any(flags)):
            feasible.append(idx)
    return tuple(feasible)


def update_recognition(
    state: ProtocolState, label: str, confidence: float, xi: float
) -> RecognitionEntry:
    """Fold one more view of `label` into the state; latch recognition at ξ."""
    if not 0.0 <= confidence <= 1.0:
        raise DomainError(f"confidence must be in [0, 1], got {confidence!r}")
    entry = state.recognized.setdefault(label, RecognitionEntry())
    entry.views += 1
    entry.confidence = max(entry.confidence, confidence)
    if entry.confidence >= xi:
        entry.recognized = True
    return entry


def check_path_hit(
    state: ProtocolState,
    paths: tuple[KnowledgePath, ...] | list[KnowledgePath],
    match: dict[str, frozenset[str]] | None = None,
) -> int | None:
    """Lowest-index path whose every requirement is recognized, or None."""
    latched = frozenset(
        label for label, entry in state.recognized.items() if entry.recognized
    )

    def satisfied(req: str) -> bool:
        if match is None:
            return req in latched
        return bool(match.get(req, frozenset()) & latched)

    for idx, path in enumerate(paths):
        if all(satisfied(req) for req in path.required):
            return idx
    return None


def _resolve_paths(kg: KnowledgeGraph, task: dict) -> tuple[KnowledgePath, ...]:
    if "paths" in task:
        return tuple(
            p if isinstance(p, KnowledgePath) else KnowledgePath(tuple(p))
            for p in task["paths"]
        )
    if "start" in task and "goal" in task:
        return find_paths(
            kg,
            str(task["start"]),
            str(task["goal"]),
            max_depth=int(task.get("max_depth", 6)),
            max_paths=int(task.get("max_paths", 16)),
        )
    raise ConfigError("task needs either 'paths' or both 'start' and 'goal'")


def run_protocol(
    kg: KnowledgeGraph,
    task: dict,
    cfg: SemanticMatchConfig,
    environment: list[str] | tuple[str, ...],
    link: LinkConfig | None,
    limits: ProtocolLimits,
    *,
    model: GmModel,
    class_labels: tuple[str, ...] | list[str],
    rng: np.random.Generator,
    n_bits: int = 12,
    scale: float = 1.0,
    transmissions: int = 1,
    trace: list[dict] | None = None,
) -> ProtocolState:
    """Drive the recognize-until-path-hit loop over an encounter stream.

    `environment` lists the true class word of each object in encounter
    order; `class_labels[i]` names model class i. Recognition records the
    *predicted* word, so misclassifications can stall or mislead the run.
    Outcomes: "hit" (some path fully recognized), "infeasible" (no path can
    ever be satisfied by the environment's classes), "failed_timeout" (time
    budget exceeded, or the stream ran out — the agent has nothing left to
    look at inside its budget). Pass a list as `trace` to collect one dict
    per observation step.
    """
    labels = tuple(class_labels)
    if len(labels) != model.num_classes:
        raise ConfigError(
            f"class_labels has {len(labels)} entries for {model.num_classes} classes"
        )
    paths = _resolve_paths(kg, task)
    relevant = frozenset(environment)
    state = ProtocolState(paths=paths, relevant=relevant)
    if not paths:
        state.status = "infeasible"
        return state
    requirements = tuple(dict.fromkeys(req for p in paths for req in p.required))
    match = match_map(requirements, labels, cfg)
    env_match = match_map(requirements, tuple(relevant), cfg)
    state.feasible_indices = check_feasibility(paths, relevant, "subset", env_match)
    if not state.feasible_indices:
        state.status = "infeasible"
        return state
    if limits.time_limit_s is not None and limits.time_limit_s <= 0.0:
        state.status = "failed_timeout"
        return state
    for step, word in enumerate(environment, start=1):
        if word not in labels:
            raise GraphLookupError(
                f"environment object {word!r} is not one of the model's class labels"
            )
        obs = observe_object(
            model,
            labels.index(word),
            link,
            n_bits=n_bits,
            scale=scale,
            xi=limits.xi,
            max_views=limits.max_views,
            rng=rng,
            transmissions=transmissions,
        )
        state.elapsed_s += obs.latency_s
        update_recognition(state, labels[obs.label], obs.confidence, limits.xi)
        if trace is not None:
            trace.append(
                {
                    "step": step,
                    "object": word,
                    "predicted": labels[obs.label],
                    "confidence": obs.confidence,
                    "views": obs.views,
                    "elapsed_s": state.elapsed_s,
                }
            )
        if limits.time_limit_s is not None and state.elapsed_s > limits.time_limit_s:
            state.status = "failed_timeout"
            return state
        hit = check_path_hit(state, paths, match)
        if hit is not None:
            state.status = "hit"
            state.hit_index = hit
            return state
    state.status = "failed_timeout"
    return state
