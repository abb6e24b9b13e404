"""Episode-level exploration simulator and the named experiment sweeps.

An episode drops an agent into a field of objects arriving as a Poisson
stream. Each encountered object is observed through the feature link until
its class posterior clears the confidence target ξ (or the view budget runs
out); an episode succeeds when every object required by one of the task
paths has been correctly recognized. Two latency components are tracked
separately: waiting for objects to show up (exploration) and moving feature
bits over the link (transmission).

``run_experiment`` turns a config dict into a rectangular result table. Every
cell of the table draws from its own seed substream keyed by (row, series),
so the output is byte-identical no matter how many worker processes compute
it.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .feature_channel import (
    LinkConfig,
    error_variance,
    resolved_bep,
    select_modulation,
    transmit_batch,
    urllc_blocklength,
    urllc_latency,
)
from .gm_model import (
    GmModel,
    default_scale,
    make_binary_model,
    make_ten_class_model,
    posterior,
    sample,
    to_quantized_units,
)
from .margin_classifier import (
    accuracy_lower_bound,
    hyperplane_between,
    multiview_accuracy_lower_bound,
    required_transmissions,
    required_views,
)
from .seeding import substream

__all__ = [
    "ExplorationScenario",
    "EnvironmentAssignment",
    "Observation",
    "LatencyRecord",
    "ExperimentResult",
    "EXPERIMENTS",
    "assign_environment",
    "observe_object",
    "simulate_episode",
    "monte_carlo_accuracy",
    "run_experiment",
]

_ENHANCEMENTS = ("none", "retransmission", "multiview")


@dataclass(frozen=True)
class ExplorationScenario:
    """Everything one episode needs: the field, the task shape, and the link."""

    arrival_rate: float
    num_objects: int
    path_lengths: tuple[int, ...]
    model: GmModel
    link: LinkConfig | None
    relevant_fraction: float = 0.8
    xi: float = 0.9
    max_views_per_object: int = 64
    time_limit_s: float | None = None
    enhancement: str = "none"
    scale: float | None = None

    def __post_init__(self) -> None:
        if self.arrival_rate <= 0.0:
            raise ConfigError(f"arrival_rate must be positive, got {self.arrival_rate!r}")
        if self.num_objects < 1:
            raise ConfigError(f"num_objects must be >= 1, got {self.num_objects!r}")
        if not 0.0 < self.relevant_fraction <= 1.0:
            raise ConfigError(
                f"relevant_fraction must be in (0, 1], got {self.relevant_fraction!r}"
            )
        lengths = tuple(int(n) for n in self.path_lengths)
        if not lengths or any(n < 1 for n in lengths):
            raise ConfigError("path_lengths must be a non-empty list of positive ints")
        pool = math.floor(self.relevant_fraction * self.num_objects)
        if sum(lengths) > pool:
            raise ConfigError(
                f"paths need {sum(lengths)} relevant objects but only {pool} exist "
                f"({self.relevant_fraction} of {self.num_objects})"
            )
        if not 0.0 < self.xi < 1.0:
            raise ConfigError(f"xi must be in (0, 1), got {self.xi!r}")
        if self.max_views_per_object < 1:
            raise ConfigError(f"max_views_per_object must be >= 1")
        if self.time_limit_s is not None and self.time_limit_s <= 0.0:
            raise ConfigError(f"time_limit_s must be positive when set")
        if self.enhancement not in _ENHANCEMENTS:
            raise ConfigError(
                f"enhancement must be one of {_ENHANCEMENTS}, got {self.enhancement!r}"
            )
        object.__setattr__(self, "path_lengths", lengths)


@dataclass(frozen=True)
class EnvironmentAssignment:
    """Which object is which class, which are task-relevant, who belongs to which path."""

    class_of: np.ndarray
    relevant: tuple[int, ...]
    path_members: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Observation:
    label: int
    confidence: float
    views: int
    latency_s: float


@dataclass(frozen=True)
class LatencyRecord:
    exploration_time_s: float
    transmission_time_s: float
    total_views: int
    objects_encountered: int
    hit_path: int | None
    success: bool

    @property
    def total_time_s(self) -> float:
        return self.exploration_time_s + self.transmission_time_s


def assign_environment(
    num_objects: int,
    num_classes: int,
    relevant_fraction: float,
    path_lengths: tuple[int, ...],
    rng: np.random.Generator,
) -> EnvironmentAssignment:
    """Deal classes round-robin, pick the relevant pool, slice paths out of it."""
    class_of = np.arange(num_objects, dtype=np.int64) % num_classes
    order = rng.permutation(num_objects)
    pool = math.floor(relevant_fraction * num_objects)
    if sum(path_lengths) > pool:
        raise ConfigError(
            f"paths need {sum(path_lengths)} relevant objects but only {pool} exist"
        )
    relevant = tuple(int(i) for i in order[:pool])
    members = []
    offset = 0
    for length in path_lengths:
        members.append(tuple(relevant[offset : offset + length]))
        offset += length
    return EnvironmentAssignment(class_of, relevant, tuple(members))


def observe_object(
    model: GmModel,
    class_index: int,
    link: LinkConfig | None,
    n_bits: int = 12,
    scale: float = 1.0,
    xi: float = 0.9,
    max_views: int = 64,
    rng: np.random.Generator | None = None,
    transmissions: int = 1,
    min_views: int = 1,
) -> Observation:
    """Look at one object until its posterior clears ξ or the view budget ends.

    Each view is a fresh feature draw pushed through the link; views are
    average-pooled at the receiver. ``min_views`` defers the first decision
    (the multiview enhancement); ``transmissions`` repeats each view's words
    over the channel and averages (the retransmission enhancement).
    """
    if rng is None:
        raise DomainError("observe_object needs an rng")
    if not 0 <= class_index < model.num_classes:
        raise DomainError(f"class index {class_index!r} out of range")
    min_views = min(max(1, min_views), max_views)
    if link is None:
        noise_feat = 0.0
        p_b, sym_bits = 0.0, 1
    else:
        p_b, sym_bits = resolved_bep(link)
        noise_feat = error_variance(n_bits, p_b) / scale**2 if p_b > 0.0 else 0.0
    extra = noise_feat / transmissions
    pooled = np.zeros(model.dims, dtype=np.float64)
    latency = 0.0
    views = 0
    label, confidence = 0, 0.0
    while views < max_views:
        x = sample(model, class_index, rng)
        if link is None:
            received = x
        elif link.scheme == "reliable_coded":
            received = x
            payload = n_bits * model.dims
            n_block = urllc_blocklength(
                link.snr_linear, link.packet_error_target, payload
            )
            latency += n_block / link.bandwidth_hz
        else:
            received = transmit_batch(
                x[None, :], link, n_bits, scale, rng, transmissions
            )[0]
            latency += n_bits * model.dims * transmissions / (
                link.bandwidth_hz * sym_bits
            )
        pooled += received
        views += 1
        if views >= min_views:
            post = posterior(model, pooled / views, extra_variance=extra, views=views)
            label = int(np.argmax(post))
            confidence = float(post[label])
            if confidence >= xi:
                break
    return Observation(label, confidence, views, latency)


def _enhancement_plan(scenario: ExplorationScenario, scale: float) -> tuple[int, int]:
    """(transmissions per view, minimum views) implied by the enhancement mode."""
    if scenario.enhancement == "none" or scenario.link is None:
        return 1, 1
    p_b, _ = resolved_bep(scenario.link)
    if p_b == 0.0:
        return 1, 1
    n_bits = scenario.link.bits_per_feature
    qmodel = to_quantized_units(scenario.model, scale)
    h = hyperplane_between(qmodel, 0, 1)
    if scenario.enhancement == "retransmission":
        return required_transmissions(qmodel, h, n_bits, p_b, scenario.xi), 1
    return 1, required_views(qmodel, h, n_bits, p_b, scenario.xi)


def simulate_episode(scenario: ExplorationScenario, rng: np.random.Generator) -> LatencyRecord:
    """Run one exploration episode and time it.

    Objects arrive one at a time with exponential gaps (exploration time);
    each is observed through the link (transmission time). An object counts
    toward a path only when the classifier's top label is its true class at
    confidence >= ξ. The episode ends at the first fully recognized path,
    when the time limit is exceeded, or when the field is exhausted.
    """
    model = scenario.model
    n_bits = scenario.link.bits_per_feature if scenario.link is not None else 12
    scale = scenario.scale if scenario.scale is not None else default_scale(model, n_bits)
    transmissions, min_views = _enhancement_plan(scenario, scale)
    assignment = assign_environment(
        scenario.num_objects,
        model.num_classes,
        scenario.relevant_fraction,
        scenario.path_lengths,
        rng,
    )
    membership: dict[int, list[int]] = {}
    for path_idx, members in enumerate(assignment.path_members):
        for obj in members:
            membership.setdefault(obj, []).append(path_idx)
    remaining = [set(members) for members in assignment.path_members]
    encounter = rng.permutation(scenario.num_objects)
    exploration = 0.0
    transmission = 0.0
    total_views = 0
    seen = 0
    for obj in encounter:
        obj = int(obj)
        exploration += rng.exponential(1.0 / scenario.arrival_rate)
        obs = observe_object(
            model,
            int(assignment.class_of[obj]),
            scenario.link,
            n_bits=n_bits,
            scale=scale,
            xi=scenario.xi,
            max_views=scenario.max_views_per_object,
            rng=rng,
            transmissions=transmissions,
            min_views=min_views,
        )
        transmission += obs.latency_s
        total_views += obs.views
        seen += 1
        correct = obs.label == int(assignment.class_of[obj]) and obs.confidence >= scenario.xi
        if correct:
            for path_idx in membership.get(obj, ()):
                remaining[path_idx].discard(obj)
        if scenario.time_limit_s is not None and exploration + transmission > scenario.time_limit_s:
            return LatencyRecord(exploration, transmission, total_views, seen, None, False)
        for path_idx, left in enumerate(remaining):
            if not left:
                return LatencyRecord(
                    exploration, transmission, total_views, seen, path_idx, True
                )
    return LatencyRecord(exploration, transmission, total_views, seen, None, False)


def monte_carlo_accuracy(
    model: GmModel,
    link: LinkConfig | None,
    n_bits: int,
    scale: float,
    trials: int,
    views: int = 1,
    transmissions: int = 1,
    rng: np.random.Generator | None = None,
) -> tuple[float, float]:
    """Nearest-centroid accuracy with the real channel in the loop.

    Labels are drawn uniformly; each trial pools `views` transmitted looks.
    Returns (accuracy, 95% CI half-width).
    """
    if rng is None:
        raise DomainError("monte_carlo_accuracy needs an rng")
    if min(trials, views, transmissions) < 1:
        raise DomainError("trials, views, and transmissions must all be >= 1")
    inv_cov = 1.0 / model.covariance_diag
    std = np.sqrt(model.covariance_diag)
    correct = 0
    chunk = max(1, min(trials, (1 << 21) // max(1, model.dims * views)))
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        labels = rng.integers(0, model.num_classes, size=m)
        pooled = np.zeros((m, model.dims), dtype=np.float64)
        for _ in range(views):
            x = model.centroids[labels] + rng.standard_normal((m, model.dims)) * std
            if link is None or link.scheme == "reliable_coded":
                pooled += x
            else:
                pooled += transmit_batch(x, link, n_bits, scale, rng, transmissions)
        pooled /= views
        diff = pooled[:, None, :] - model.centroids[None, :, :]
        dist = np.einsum("mld,d->ml", diff * diff, inv_cov)
        correct += int(np.sum(np.argmin(dist, axis=1) == labels))
        done += m
    acc = correct / trials
    half = 1.96 * math.sqrt(max(acc * (1.0 - acc), 1e-12) / trials)
    return acc, half


# --------------------------------------------------------------------------
# Named experiments
# --------------------------------------------------------------------------

EXPERIMENTS = (
    "acc_vs_bep",
    "acc_vs_views",
    "acc_vs_retx",
    "latency_vs_bep",
    "latency_vs_snr",
    "explore_latency_vs_bep",
    "explore_latency_vs_snr",
    "latency_vs_arrival",
)

_DEFAULTS: dict[str, dict] = {
    "acc_vs_bep": {
        "gain_units": [1.0, 2.0, 3.0],
        "bep": [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45],
        "dims": 100,
        "n_bits": 12,
        "trials": 10_000,
    },
    "acc_vs_views": {
        "bep": [0.2, 0.3],
        "views": [1, 2, 3, 4, 6, 8, 12, 16],
        "dims": 100,
        "n_bits": 12,
        "trials": 4_000,
    },
    "acc_vs_retx": {
        "bep": [0.2, 0.3],
        "transmissions": [1, 2, 4, 8, 16, 32],
        "dims": 100,
        "n_bits": 12,
        "trials": 4_000,
    },
    "latency_vs_bep": {
        "bep": [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45],
        "xi": [0.9, 0.99],
        "dims": 4,
        "amplitude": 8.0,
        "variance": 64.0,
        "n_bits": 8,
        "bandwidth_hz": 1e6,
        "variant": "stated",
    },
    "latency_vs_snr": {
        "snr_db": [-12.0, -9.0, -6.0, -3.0, 0.0, 3.0, 6.0, 9.0, 12.0],
        "dims": 100,
        "n_bits": 8,
        "bandwidth_hz": 1e6,
        "packet_error_target": 1e-9,
    },
    "explore_latency_vs_bep": {
        "bep": [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4],
        "xi": [0.9, 0.99],
        "episodes": 300,
        "arrival_rate": 2.0,
        "num_objects": 40,
        "relevant_fraction": 0.8,
        "path_lengths": [3, 5],
        "dims": 100,
        "n_bits": 12,
        "bandwidth_hz": 1e6,
        "enhancement": "none",
        "max_views": 64,
    },
    "explore_latency_vs_snr": {
        "snr_db": [-6.0, -3.0, 0.0, 3.0, 6.0, 9.0, 12.0],
        "schemes": ["adaptive", "reliable_coded"],
        "episodes": 300,
        "arrival_rate": 2.0,
        "num_objects": 40,
        "relevant_fraction": 0.8,
        "path_lengths": [3, 5],
        "dims": 100,
        "n_bits": 12,
        "bandwidth_hz": 1e6,
        "packet_error_target": 1e-9,
        "xi": 0.9,
        "enhancement": "none",
        "max_views": 64,
    },
    "latency_vs_arrival": {
        "arrival_rate": [0.5, 1.0, 2.0, 5.0, 10.0],
        "path_lengths_options": [[3], [10, 10, 10]],
        "episodes": 400,
        "num_objects": 40,
        "relevant_fraction": 0.8,
        "bep": 0.2,
        "dims": 100,
        "n_bits": 12,
        "bandwidth_hz": 5_000.0,
        "xi": 0.9,
        "enhancement": "none",
        "max_views": 64,
    },
}


@dataclass
class ExperimentResult:
    name: str
    header: list[str]
    rows: list[list[float]]
    config: dict = field(default_factory=dict)


def _slug(value: float) -> str:
    if float(value) == int(value):
        return str(int(value))
    return f"{value:g}".replace(".", "p").replace("-", "m")


def _paths_label(lengths: list[int]) -> str:
    return "paths" + "x".join(str(int(n)) for n in lengths)


def _resolve_config(config: dict) -> dict:
    if "experiment" not in config:
        raise ConfigError("config is missing the 'experiment' key")
    name = config["experiment"]
    if name not in _DEFAULTS:
        raise ConfigError(
            f"unknown experiment {name!r}; expected one of {sorted(_DEFAULTS)}"
        )
    if "seed" not in config:
        raise ConfigError("config is missing the 'seed' key")
    seed = config["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")
    unknown = sorted(set(config) - {"experiment", "seed"} - set(_DEFAULTS[name]))
    if unknown:
        raise ConfigError(
            f"unknown config key(s) {unknown} for experiment {name!r}"
        )
    resolved = dict(_DEFAULTS[name])
    resolved.update(config)
    return resolved


def _layout(cfg: dict) -> tuple[list[str], list[float], int]:
    """(CSV header, x values, number of series) for a resolved config."""
    name = cfg["experiment"]
    if name == "acc_vs_bep":
        header = ["bep"]
        for g in cfg["gain_units"]:
            s = _slug(g)
            header += [f"acc_gain{s}", f"acc_gain{s}_ci", f"bound_gain{s}"]
        return header, list(cfg["bep"]), len(cfg["gain_units"])
    if name == "acc_vs_views":
        header = ["views"]
        for b in cfg["bep"]:
            s = _slug(b)
            header += [f"acc_bep{s}", f"acc_bep{s}_ci", f"bound_bep{s}"]
        return header, list(cfg["views"]), len(cfg["bep"])
    if name == "acc_vs_retx":
        header = ["transmissions"]
        for b in cfg["bep"]:
            s = _slug(b)
            header += [f"acc_bep{s}", f"acc_bep{s}_ci", f"bound_bep{s}"]
        return header, list(cfg["transmissions"]), len(cfg["bep"])
    if name == "latency_vs_bep":
        header = ["bep"]
        for x in cfg["xi"]:
            s = _slug(x)
            header += [f"retx_xi{s}", f"latency_s_xi{s}"]
        return header, list(cfg["bep"]), len(cfg["xi"])
    if name == "latency_vs_snr":
        header = ["snr_db", "latency_s_adaptive", "latency_s_coded", "coded_over_adaptive"]
        return header, list(cfg["snr_db"]), 1
    if name == "explore_latency_vs_bep":
        header = ["bep"]
        for x in cfg["xi"]:
            s = _slug(x)
            header += [f"latency_s_xi{s}", f"latency_s_xi{s}_ci", f"success_xi{s}"]
        return header, list(cfg["bep"]), len(cfg["xi"])
    if name == "explore_latency_vs_snr":
        header = ["snr_db"]
        for scheme in cfg["schemes"]:
            header += [f"latency_s_{scheme}", f"latency_s_{scheme}_ci", f"success_{scheme}"]
        return header, list(cfg["snr_db"]), len(cfg["schemes"])
    if name == "latency_vs_arrival":
        header = ["arrival_rate_hz"]
        for lengths in cfg["path_lengths_options"]:
            lab = _paths_label(lengths)
            header += [f"latency_s_{lab}", f"latency_s_{lab}_ci", f"success_{lab}"]
        return header, list(cfg["arrival_rate"]), len(cfg["path_lengths_options"])
    raise ConfigError(f"unknown experiment {name!r}")


def _episode_stats(
    scenario: ExplorationScenario, episodes: int, rng: np.random.Generator
) -> tuple[float, float, float]:
    """(mean total latency, CI half-width, success rate) over full episodes.

    Failed episodes contribute the time they actually burned, so a scheme
    that times out a lot is not rewarded with a short-looking latency.
    """
    totals = np.empty(episodes, dtype=np.float64)
    successes = 0
    for i in range(episodes):
        record = simulate_episode(scenario, rng)
        totals[i] = record.total_time_s
        successes += int(record.success)
    mean = float(totals.mean())
    half = 1.96 * float(totals.std(ddof=1)) / math.sqrt(episodes) if episodes > 1 else 0.0
    return mean, half, successes / episodes


def _explore_cell(cfg: dict, link: LinkConfig | None, xi: float,
                  path_lengths: list[int], rng: np.random.Generator) -> tuple[float, float, float]:
    model = make_ten_class_model(int(cfg["dims"]))
    scenario = ExplorationScenario(
        arrival_rate=float(cfg["arrival_rate"]) if not isinstance(cfg["arrival_rate"], list) else float(cfg["arrival_rate"][0]),
        num_objects=int(cfg["num_objects"]),
        path_lengths=tuple(int(n) for n in path_lengths),
        model=model,
        link=link,
        relevant_fraction=float(cfg["relevant_fraction"]),
        xi=xi,
        max_views_per_object=int(cfg["max_views"]),
        enhancement=str(cfg["enhancement"]),
    )
    return _episode_stats(scenario, int(cfg["episodes"]), rng)


def _cell(cfg: dict, row: int, series: int) -> tuple[float, ...]:
    """One table cell; the only entry point worker processes execute."""
    name = cfg["experiment"]
    rng = substream(cfg["seed"], row, series)
    n_bits = int(cfg["n_bits"]) if "n_bits" in cfg else 12

    if name == "acc_vs_bep":
        gain = float(cfg["gain_units"][series])
        p_b = float(cfg["bep"][row])
        model = make_binary_model(int(cfg["dims"]), amplitude=gain)
        scale = default_scale(model, n_bits)
        link = LinkConfig(scheme="fixed_binary", bep=p_b, bits_per_feature=n_bits)
        acc, ci = monte_carlo_accuracy(
            model, link, n_bits, scale, int(cfg["trials"]), rng=rng
        )
        qmodel = to_quantized_units(model, scale)
        h = hyperplane_between(qmodel, 0, 1)
        bound = accuracy_lower_bound(qmodel, h, n_bits, p_b)
        return acc, ci, bound

    if name in ("acc_vs_views", "acc_vs_retx"):
        p_b = float(cfg["bep"][series])
        views = int(cfg["views"][row]) if name == "acc_vs_views" else 1
        retx = int(cfg["transmissions"][row]) if name == "acc_vs_retx" else 1
        model = make_ten_class_model(int(cfg["dims"]))
        scale = default_scale(model, n_bits)
        link = LinkConfig(scheme="fixed_binary", bep=p_b, bits_per_feature=n_bits)
        acc, ci = monte_carlo_accuracy(
            model, link, n_bits, scale, int(cfg["trials"]),
            views=views, transmissions=retx, rng=rng,
        )
        qmodel = to_quantized_units(model, scale)
        h = hyperplane_between(qmodel, 0, 1)
        bound = multiview_accuracy_lower_bound(
            qmodel, h, n_bits, p_b, views, transmissions=retx
        )
        return acc, ci, bound

    if name == "latency_vs_bep":
        xi = float(cfg["xi"][series])
        p_b = float(cfg["bep"][row])
        model = make_binary_model(
            int(cfg["dims"]), amplitude=float(cfg["amplitude"]),
            variance=float(cfg["variance"]),
        )
        qmodel = to_quantized_units(model, 1.0)
        h = hyperplane_between(qmodel, 0, 1)
        retx = required_transmissions(
            qmodel, h, n_bits, p_b, xi, variant=str(cfg["variant"])
        )
        latency = retx * n_bits * int(cfg["dims"]) / float(cfg["bandwidth_hz"])
        return float(retx), latency

    if name == "latency_vs_snr":
        snr = 10.0 ** (float(cfg["snr_db"][row]) / 10.0)
        payload = n_bits * int(cfg["dims"])
        _, sym_bits, _ = select_modulation(snr)
        bandwidth = float(cfg["bandwidth_hz"])
        uncoded = payload / (bandwidth * sym_bits)
        coded = urllc_latency(snr, float(cfg["packet_error_target"]), payload, bandwidth)
        return uncoded, coded, coded / uncoded

    if name == "explore_latency_vs_bep":
        xi = float(cfg["xi"][series])
        p_b = float(cfg["bep"][row])
        link = LinkConfig(
            scheme="fixed_binary", bep=p_b, bits_per_feature=n_bits,
            bandwidth_hz=float(cfg["bandwidth_hz"]),
        )
        return _explore_cell(cfg, link, xi, list(cfg["path_lengths"]), rng)

    if name == "explore_latency_vs_snr":
        scheme = str(cfg["schemes"][series])
        snr = 10.0 ** (float(cfg["snr_db"][row]) / 10.0)
        if scheme == "reliable_coded":
            link = LinkConfig(
                scheme="reliable_coded", snr_linear=snr, bits_per_feature=n_bits,
                bandwidth_hz=float(cfg["bandwidth_hz"]),
                packet_error_target=float(cfg["packet_error_target"]),
            )
        else:
            link = LinkConfig(
                scheme=scheme, snr_linear=snr, bits_per_feature=n_bits,
                bandwidth_hz=float(cfg["bandwidth_hz"]),
            )
        return _explore_cell(cfg, link, float(cfg["xi"]), list(cfg["path_lengths"]), rng)

    if name == "latency_vs_arrival":
        lengths = [int(n) for n in cfg["path_lengths_options"][series]]
        rate = float(cfg["arrival_rate"][row])
        link = LinkConfig(
            scheme="fixed_binary", bep=float(cfg["bep"]), bits_per_feature=n_bits,
            bandwidth_hz=float(cfg["bandwidth_hz"]),
        )
        model = make_ten_class_model(int(cfg["dims"]))
        scenario = ExplorationScenario(
            arrival_rate=rate,
            num_objects=int(cfg["num_objects"]),
            path_lengths=tuple(lengths),
            model=model,
            link=link,
            relevant_fraction=float(cfg["relevant_fraction"]),
            xi=float(cfg["xi"]),
            max_views_per_object=int(cfg["max_views"]),
            enhancement=str(cfg["enhancement"]),
        )
        return _episode_stats(scenario, int(cfg["episodes"]), rng)

    raise ConfigError(f"unknown experiment {name!r}")


def run_experiment(config: dict, workers: int = 1) -> ExperimentResult:
    """Compute a named experiment table; output is identical for any worker count."""
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers!r}")
    cfg = _resolve_config(config)
    header, x_values, num_series = _layout(cfg)
    cells: dict[tuple[int, int], tuple[float, ...]] = {}
    coords = [(row, series) for row in range(len(x_values)) for series in range(num_series)]
    if workers == 1 or len(coords) <= 1:
        for row, series in coords:
            cells[(row, series)] = _cell(cfg, row, series)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                (row, series): pool.submit(_cell, cfg, row, series)
                for row, series in coords
            }
            for key, future in futures.items():
                cells[key] = future.result()
    rows = []
    for row, x in enumerate(x_values):
        line = [float(x)]
        for series in range(num_series):
            line.extend(float(v) for v in cells[(row, series)])
        rows.append(line)
    return ExperimentResult(cfg["experiment"], header, rows, cfg)
