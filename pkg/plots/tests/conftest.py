"""Shared fixtures: real experiment CSVs produced by the simulation CLI.

The renderer is only allowed to know the producer through its CSV files, so
the fixtures shell out to ``python3 -m semcom.cli`` exactly like a user would
instead of importing it.
"""

import json
import subprocess
import sys

import pytest

# one tiny config per experiment; sized so the whole matrix generates in a
# few seconds while still exercising multi-series headers and CI columns
CONFIGS = {
    "acc_vs_bep": {
        "gain_units": [2.0, 8.0], "bep": [0.0, 0.1, 0.2],
        "dims": 4, "n_bits": 8, "trials": 200,
    },
    "acc_vs_views": {
        "bep": [0.2, 0.3], "views": [1, 2, 4], "dims": 10, "n_bits": 8,
        "trials": 200,
    },
    "acc_vs_retx": {
        "bep": [0.2], "transmissions": [1, 2, 4], "dims": 10, "n_bits": 8,
        "trials": 200,
    },
    "latency_vs_bep": {"bep": [0.1, 0.2], "xi": [0.9, 0.99]},
    "latency_vs_snr": {"snr_db": [0.0, 9.0, 16.0]},
    "explore_latency_vs_bep": {
        "bep": [0.0, 0.1], "xi": [0.9], "episodes": 4, "num_objects": 10,
        "path_lengths": [2], "dims": 10, "arrival_rate": 5.0,
    },
    "explore_latency_vs_snr": {
        "snr_db": [6.0, 12.0], "episodes": 3, "num_objects": 10,
        "path_lengths": [2], "dims": 10,
    },
    "latency_vs_arrival": {
        "arrival_rate": [2.0, 5.0], "path_lengths_options": [[2], [3, 3]],
        "episodes": 4, "num_objects": 12, "dims": 10, "bep": 0.1,
    },
}

# figure kind -> experiment whose CSV feeds it in these tests
KIND_TO_EXPERIMENT = {
    "acc_vs_bep": "acc_vs_bep",
    "acc_vs_views": "acc_vs_views",
    "acc_vs_retx": "acc_vs_retx",
    "latency_vs_bep": "latency_vs_bep",
    "latency_vs_snr": "latency_vs_snr",
    "explore_latency": "explore_latency_vs_bep",
    "latency_vs_arrival": "latency_vs_arrival",
}


@pytest.fixture(scope="session")
def kind_to_experiment():
    return dict(KIND_TO_EXPERIMENT)


@pytest.fixture(scope="session")
def csv_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("experiment_csvs")
    for i, (name, overrides) in enumerate(CONFIGS.items()):
        config = {"experiment": name, "seed": 40 + i, **overrides}
        config_path = root / f"{name}.json"
        config_path.write_text(json.dumps(config), encoding="utf-8")
        proc = subprocess.run(
            [
                sys.executable, "-m", "semcom.cli", "simulate",
                "--config", str(config_path),
                "--out", str(root / f"{name}.csv"),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, f"{name}: {proc.stderr}"
    return root
