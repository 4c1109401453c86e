pub const MANIFEST_NAME: &str = "veritas.toml";
pub const EXECUTOR_NAME: &str = "echo_executor.py";

pub const MANIFEST: &str = r#"# Experiment manifest (veritas_manifest_v1).
#
# Trials = grid points x seed_count x cv_folds x replications
#        = (2 methods x 2 datasets x 2 learning rates) x 3 x 5 x 2 = 240.
schema = "veritas_manifest_v1"
title = "Scaffold: candidate vs baseline"

# Every trial seed is derived from this one value.
master_seed = 20240611
seed_count = 3
cv_folds = 5
replications = 2

# Independent variables (X) are swept over factor_grid.
[[variables]]
name = "method"
role = "independent"
description = "model under comparison; baseline is the reference"
domain = { kind = "categorical", levels = ["baseline", "candidate"] }

[[variables]]
name = "dataset"
role = "independent"
description = "benchmark dataset"
domain = { kind = "categorical", levels = ["d1", "d2"] }

[[variables]]
name = "lr"
role = "independent"
description = "learning rate, tuned for every method"
domain = { kind = "real", lower = 0.0, upper = 1.0 }

# Control variables (C) hold one value in every trial.
[[variables]]
name = "epochs"
role = "control"
description = "training epochs"
domain = { kind = "integer", lower = 1 }

# Dependent variables (Y) are reported by the experiment program.
[[variables]]
name = "accuracy"
role = "dependent"
description = "accuracy on the held-out fold"
domain = { kind = "real", lower = 0.0, upper = 1.0 }

[factor_grid]
method = ["baseline", "candidate"]
dataset = ["d1", "d2"]
lr = [0.01, 0.1]

[control_bindings]
epochs = 10

# Item counts let the harness hand each trial its fold's train/test indices.
[dataset_items]
d1 = 150
d2 = 120

# Labels the factors the checklist audit looks for.
[designations]
method = "method"
dataset = "dataset"
hyperparameters = ["lr"]

# H0 is rejected when the selected test's p-value is below alpha.
[[hypotheses]]
id = "H1"
metric = "accuracy"
pairing = "paired"
direction = "two-sided"
alpha = 0.05
statement_null = "accuracy does not differ between candidate and baseline"
statement_alt = "accuracy differs between candidate and baseline"
groupA = { method = "candidate" }
groupB = { method = "baseline" }

# Publication cannot be verified automatically; set these once done.
[attestations]
code_published = false
environment_published = false
data_published = false
model_published = false

# How to launch the experiment program. Paths are relative to this file.
[executor]
command = ["python3", "echo_executor.py", "{input}", "{output}"]
timeout = 60
parallelism = 4
"#;

pub const EXECUTOR: &str = r#"#!/usr/bin/env python3
"""Stub experiment program for the veritas_trial_v1 protocol.

Reads the trial input document, derives a pseudo-accuracy from the bound
variables and the trial seed, and writes the output document.
"""
import json
import random
import sys


def main():
    input_path, output_path = sys.argv[1], sys.argv[2]
    with open(input_path) as f:
        trial = json.load(f)
    x = trial["bindings_X"]
    rng = random.Random(trial["derived_seed"])
    accuracy = {"baseline": 0.80, "candidate": 0.83}[x["method"]]
    accuracy += {"d1": 0.0, "d2": -0.05}[x["dataset"]]
    accuracy -= abs(x["lr"] - 0.05)
    data = trial.get("data")
    if data:
        accuracy += 0.0001 * len(data["train"])
    accuracy = min(1.0, max(0.0, accuracy + rng.gauss(0.0, 0.02)))
    with open(output_path, "w") as f:
        json.dump({"schema": "veritas_trial_v1", "outcomes": {"accuracy": accuracy}}, f)


if __name__ == "__main__":
    main()
"#;
