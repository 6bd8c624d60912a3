"""Run a small radius experiment from a config dict, with a snake oracle."""
import json

from randmaps.experiment import ExperimentConfig, run_experiment

cfg = ExperimentConfig.from_dict({
    "kind": "radius",
    "sizes": [500, 2000],
    "replicas": 200,
    "seed": 5,
    "oracle": {"grid": 500, "replicas": 200},
})
result = run_experiment(cfg)
print(json.dumps({k: result.summary[k] for k in ("mean", "ks_between_sizes", "ks_vs_oracle")}, indent=2))
