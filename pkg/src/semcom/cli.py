"""Command-line entry point.

Four subcommands share one contract: read a JSON config, seed every random
stream from the single --seed value, and emit artifacts that start with a
metadata comment block (tool version, resolved config hash, seed). Output is
byte-identical for identical (config, seed) pairs regardless of --workers.

Exit codes: 0 success, 2 config problem, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from contextlib import nullcontext

from . import __version__
from .errors import ConfigError, SemcomError
from .exploration import run_experiment
from .feature_channel import LinkConfig, channel_noise
from .gm_model import (
    GmModel,
    default_scale,
    make_binary_model,
    make_ten_class_model,
    to_quantized_units,
)
from .margin_classifier import (
    accuracy_lower_bound,
    classification_margin,
    hyperplane_between,
    multiview_accuracy_lower_bound,
    required_transmissions,
)
from .protocol import (
    KnowledgeGraph,
    ProtocolLimits,
    SemanticMatchConfig,
    run_protocol,
)
from .seeding import substream

_MAX_SEED = (1 << 64) - 1


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return raw


def _resolve_seed(args: argparse.Namespace, config: dict) -> int:
    seed = args.seed if args.seed is not None else config.get("seed")
    if seed is None:
        raise ConfigError("a seed is required: pass --seed or put 'seed' in the config")
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed <= _MAX_SEED:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return seed


def _resolve_workers(args: argparse.Namespace) -> int:
    if args.workers is not None:
        workers = args.workers
    else:
        env = os.environ.get("SEMCOM_WORKERS")
        if env is None or env == "":
            return 1
        try:
            workers = int(env)
        except ValueError:
            raise ConfigError(f"SEMCOM_WORKERS must be an integer, got {env!r}") from None
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers!r}")
    return workers


def _merge_strict(config: dict, defaults: dict, context: str) -> dict:
    unknown = sorted(set(config) - set(defaults) - {"seed"})
    if unknown:
        raise ConfigError(f"unknown config key(s) {unknown} for {context}")
    resolved = dict(defaults)
    resolved.update(config)
    return resolved


def _canonical_json(config: dict) -> str:
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def _open_out(path: str | None):
    if path is None or path == "-":
        return nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8", newline="\n")


def _write_metadata(stream, name: str, seed: int, resolved: dict) -> None:
    payload = _canonical_json(resolved)
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
    stream.write(f"# tool: semcom {__version__}\n")
    stream.write(f"# experiment: {name}\n")
    stream.write(f"# seed: {seed}\n")
    stream.write(f"# config_hash: sha256:{digest}\n")
    stream.write(f"# config: {payload}\n")


def _write_table(stream, header: list[str], rows: list[list[float]]) -> None:
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(repr(float(v)) for v in row) + "\n")


def _model_from_config(cfg: dict) -> GmModel:
    """Build the feature-units model a config names ("binary", "ten_class", or custom)."""
    spec = cfg.get("model", "binary")
    if isinstance(spec, dict):
        return GmModel.from_dict(spec)
    if spec == "binary":
        return make_binary_model(
            int(cfg.get("dims", 100)),
            amplitude=float(cfg.get("amplitude", 1.0)),
            variance=float(cfg.get("variance", 1.0)),
        )
    if spec == "ten_class":
        return make_ten_class_model(int(cfg.get("dims", 100)))
    raise ConfigError(f"unknown model preset {spec!r}; expected 'binary' or 'ten_class'")


def _link_from_config(raw: dict | None) -> LinkConfig | None:
    if raw is None:
        return None
    known = {
        "scheme",
        "snr_db",
        "snr_linear",
        "bep",
        "bandwidth_hz",
        "bits_per_feature",
        "packet_error_target",
        "modulation_policy",
    }
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown link config key(s) {unknown}")
    if "snr_db" in raw and "snr_linear" in raw:
        raise ConfigError("give snr_db or snr_linear, not both")
    snr = raw.get("snr_linear")
    if "snr_db" in raw:
        snr = 10.0 ** (float(raw["snr_db"]) / 10.0)
    policy = raw.get("modulation_policy")
    if policy is not None:
        policy = tuple(
            (10.0 ** (float(entry["snr_db"]) / 10.0), int(entry["M"])) for entry in policy
        )
    kwargs = {
        "scheme": raw.get("scheme", "fixed_binary"),
        "snr_linear": snr,
        "bep": raw.get("bep"),
        "modulation_policy": policy,
    }
    for key in ("bandwidth_hz", "packet_error_target"):
        if key in raw:
            kwargs[key] = float(raw[key])
    if "bits_per_feature" in raw:
        kwargs["bits_per_feature"] = int(raw["bits_per_feature"])
    return LinkConfig(**kwargs)


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    if args.experiment is not None:
        config["experiment"] = args.experiment
    seed = _resolve_seed(args, config)
    config["seed"] = seed
    workers = _resolve_workers(args)
    result = run_experiment(config, workers=workers)
    with _open_out(args.out) as stream:
        _write_metadata(stream, result.name, seed, result.config)
        _write_table(stream, result.header, result.rows)
    return 0


_BOUNDS_DEFAULTS = {
    "model": "binary",
    "dims": 100,
    "amplitude": 1.0,
    "variance": 1.0,
    "n_bits": 12,
    "scale": None,
    "classes": [0, 1],
    "zeta": 0.95,
    "views": 3,
    "xi": 0.9,
    "variant": "stated",
    "bep": [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45],
}


def _cmd_bounds(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    seed = _resolve_seed(args, config)
    cfg = _merge_strict(config, _BOUNDS_DEFAULTS, "the bounds table")
    cfg["seed"] = seed
    model = _model_from_config(cfg)
    n_bits = int(cfg["n_bits"])
    scale = float(cfg["scale"]) if cfg["scale"] is not None else default_scale(model, n_bits)
    qmodel = to_quantized_units(model, scale)
    l, l2 = (int(c) for c in cfg["classes"])
    h = hyperplane_between(qmodel, l, l2)
    zeta, views, xi = float(cfg["zeta"]), int(cfg["views"]), float(cfg["xi"])
    variant = str(cfg["variant"])
    header = [
        "bep",
        "phi",
        "delta_phi_lower",
        "delta_phi_upper",
        "acc_bound",
        f"acc_bound_m{views}",
        f"retx_xi{str(xi).replace('.', 'p')}",
    ]
    rows = []
    for p_b in cfg["bep"]:
        p_b = float(p_b)
        noise = channel_noise(n_bits, p_b)
        report = classification_margin(qmodel, h, zeta, noise, label=l)
        rows.append(
            [
                p_b,
                report.phi,
                report.delta_phi_lower,
                report.delta_phi_upper,
                accuracy_lower_bound(qmodel, h, n_bits, p_b, label=l),
                multiview_accuracy_lower_bound(qmodel, h, n_bits, p_b, views, label=l),
                float(
                    required_transmissions(
                        qmodel, h, n_bits, p_b, xi, label=l, variant=variant
                    )
                ),
            ]
        )
    with _open_out(args.out) as stream:
        _write_metadata(stream, "bounds", seed, cfg)
        _write_table(stream, header, rows)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    seed = _resolve_seed(args, config)
    workers = _resolve_workers(args)
    unknown = sorted(set(config) - {"runs", "seed"})
    if unknown:
        raise ConfigError(f"unknown config key(s) {unknown} for a sweep")
    runs = config.get("runs")
    if not isinstance(runs, list) or not runs:
        raise ConfigError("a sweep config needs a non-empty 'runs' list")
    if args.out is None or args.out == "-":
        raise ConfigError("sweep writes one file per run; --out must be a directory")
    os.makedirs(args.out, exist_ok=True)
    for index, run in enumerate(runs):
        if not isinstance(run, dict):
            raise ConfigError(f"runs[{index}] must be a JSON object")
        run = dict(run)
        run_seed = seed + index
        run["seed"] = run_seed
        result = run_experiment(run, workers=workers)
        path = os.path.join(args.out, f"{index:02d}_{result.name}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as stream:
            _write_metadata(stream, result.name, run_seed, result.config)
            _write_table(stream, result.header, result.rows)
    return 0


_DEMO_DEFAULTS = {
    "graph": None,
    "task": None,
    "match": {},
    "environment": None,
    "class_labels": None,
    "link": None,
    "limits": {},
    "model": "ten_class",
    "dims": 100,
    "amplitude": 1.0,
    "variance": 1.0,
    "n_bits": 12,
    "scale": None,
    "transmissions": 1,
}


def _cmd_protocol_demo(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    seed = _resolve_seed(args, config)
    cfg = _merge_strict(config, _DEMO_DEFAULTS, "a protocol demo")
    cfg["seed"] = seed
    for key in ("graph", "task", "environment", "class_labels"):
        if cfg[key] is None:
            raise ConfigError(f"a protocol demo config needs the {key!r} key")
    kg = KnowledgeGraph.from_dict(cfg["graph"])
    match_cfg = _merge_strict(cfg["match"], {
        "provider": "trigram", "metric": "cosine", "epsilon": 0.1, "synonyms": [],
    }, "semantic matching")
    match_cfg.pop("seed", None)
    match_cfg["synonyms"] = tuple(tuple(pair) for pair in match_cfg["synonyms"])
    match = SemanticMatchConfig(**match_cfg)
    limits_cfg = _merge_strict(cfg["limits"], {
        "xi": 0.9, "max_views": 64, "time_limit_s": None,
    }, "protocol limits")
    limits_cfg.pop("seed", None)
    limits = ProtocolLimits(
        xi=float(limits_cfg["xi"]),
        max_views=int(limits_cfg["max_views"]),
        time_limit_s=(
            None if limits_cfg["time_limit_s"] is None else float(limits_cfg["time_limit_s"])
        ),
    )
    model = _model_from_config(cfg)
    n_bits = int(cfg["n_bits"])
    scale = float(cfg["scale"]) if cfg["scale"] is not None else default_scale(model, n_bits)
    link = _link_from_config(cfg["link"])
    trace: list[dict] = []
    state = run_protocol(
        kg,
        cfg["task"],
        match,
        list(cfg["environment"]),
        link,
        limits,
        model=model,
        class_labels=tuple(cfg["class_labels"]),
        rng=substream(seed, 0),
        n_bits=n_bits,
        scale=scale,
        transmissions=int(cfg["transmissions"]),
        trace=trace,
    )
    with _open_out(args.out) as stream:
        _write_metadata(stream, "protocol-demo", seed, cfg)
        for entry in trace:
            stream.write(
                "step={step} object={object} predicted={predicted} "
                "confidence={confidence:.6g} views={views} "
                "elapsed_s={elapsed_s:.6g}\n".format(**entry)
            )
        hit = "-" if state.hit_index is None else str(state.hit_index)
        feasible = ",".join(str(i) for i in state.feasible_indices) or "-"
        stream.write(
            f"status={state.status} hit_index={hit} "
            f"elapsed_s={state.elapsed_s:.6g} feasible={feasible}\n"
        )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="path to a JSON config file")
    common.add_argument("--seed", type=int, default=None, help="unsigned 64-bit master seed")
    common.add_argument("--out", default=None, help="output path ('-' or omitted: stdout)")
    common.add_argument("--workers", type=int, default=None,
                        help="worker processes (default: SEMCOM_WORKERS or 1)")
    parser = argparse.ArgumentParser(
        prog="semcom",
        description="Simulation workbench for knowledge-based low-latency "
        "semantic communication.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_sim = sub.add_parser("simulate", parents=[common], help="run a named experiment sweep")
    p_sim.add_argument("--experiment", default=None, help="experiment name override")
    p_sim.set_defaults(func=_cmd_simulate)
    p_bounds = sub.add_parser("bounds", parents=[common],
                              help="tabulate margins and accuracy bounds over bit error rates")
    p_bounds.set_defaults(func=_cmd_bounds)
    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="run several experiment configs into a directory")
    p_sweep.set_defaults(func=_cmd_sweep)
    p_demo = sub.add_parser("protocol-demo", parents=[common],
                            help="trace one protocol run step by step")
    p_demo.set_defaults(func=_cmd_protocol_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"semcom: config error: {exc}", file=sys.stderr)
        return 2
    except (SemcomError, OSError) as exc:
        print(f"semcom: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
