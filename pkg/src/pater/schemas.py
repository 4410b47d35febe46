"""JSON Schemas for the files written by the command-line tool."""

_number = {"type": "number"}
_nullable = {"type": ["number", "null"]}
_weights = {"alpha_neg": {"type": "number", "exclusiveMinimum": 0},
            "alpha_pos": {"type": "number", "exclusiveMinimum": 0}}

REPORT_RECORD = {
    "type": "object",
    "required": ["algorithm", "dataset", "alpha_neg", "alpha_pos", "runs", "mean",
                 "stddev", "mean_balanced_accuracy", "per_run_accuracy"],
    "properties": {
        "algorithm": {"type": "string"},
        "dataset": {"type": "string"},
        **_weights,
        "runs": {"type": "integer", "minimum": 1},
        "mean": {"type": "number", "minimum": 0, "maximum": 100},
        "stddev": {"type": "number", "minimum": 0},
        "mean_balanced_accuracy": _nullable,
        "per_run_accuracy": {"type": "array",
                             "items": {"type": "number", "minimum": 0, "maximum": 100}},
    },
    "additionalProperties": False,
}

CONFIG = {
    "type": "object",
    "required": ["algorithms", "datasets", "seed", "runs", "alpha_neg", "alpha_pos",
                 "normalize", "clip_tau", "bias"],
    "properties": {
        "algorithms": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "datasets": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "seed": {"type": "integer"},
        "runs": {"type": "integer", "minimum": 1},
        **_weights,
        "normalize": {"enum": ["per-fold", "global", "none"]},
        "clip_tau": {"type": "boolean"},
        "bias": {"type": "boolean"},
        "grid": {"type": "array", "items": _number},
        "metric": {"enum": ["accuracy", "balanced"]},
    },
}

REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "pater run report",
    "type": "object",
    "required": ["command", "config", "records"],
    "properties": {
        "command": {"const": "run"},
        "config": CONFIG,
        "records": {"type": "array", "items": REPORT_RECORD},
    },
}

SWEEP_ROW = {
    "type": "object",
    "required": ["dataset", "algorithm", "ratio", "needed_weight", "best_weight", "match",
                 "best_alpha_neg", "best_alpha_pos", "best_score", "scores"],
    "properties": {
        "dataset": {"type": "string"},
        "algorithm": {"type": "string"},
        "ratio": _nullable,
        "needed_weight": {"enum": ["N", "P"]},
        "best_weight": {"enum": ["N", "P"]},
        "match": {"type": "boolean"},
        "best_alpha_neg": _number,
        "best_alpha_pos": _number,
        "best_score": _nullable,
        "scores": {"type": "array", "items": {
            "type": "object",
            "required": ["side", "g", "score"],
            "properties": {"side": {"enum": ["N", "P"]}, "g": _number, "score": _nullable},
        }},
    },
}

SWEEP = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "pater weight sweep",
    "type": "object",
    "required": ["command", "config", "rows", "match_count"],
    "properties": {
        "command": {"const": "sweep"},
        "config": CONFIG,
        "rows": {"type": "array", "items": SWEEP_ROW},
        "match_count": {"type": "integer", "minimum": 0},
    },
}

COMPARE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "pater significance summary",
    "type": "object",
    "required": ["command", "metric", "higher_is_better", "algorithms", "datasets",
                 "ranks", "mean_ranks", "friedman_statistic", "p_value",
                 "critical_difference", "alpha", "groups"],
    "properties": {
        "command": {"const": "compare"},
        "metric": {"type": "string"},
        "higher_is_better": {"type": "boolean"},
        "algorithms": {"type": "array", "items": {"type": "string"}, "minItems": 2},
        "datasets": {"type": "array", "items": {"type": "string"}, "minItems": 2},
        "ranks": {"type": "array", "items": {"type": "array", "items": _number}},
        "mean_ranks": {"type": "object", "additionalProperties": _number},
        "friedman_statistic": _number,
        "p_value": _number,
        "critical_difference": {"type": "number", "exclusiveMinimum": 0},
        "alpha": {"enum": [0.05, 0.1]},
        "groups": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
    },
}

TRACE_MANIFEST = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "pater trace manifest",
    "type": "object",
    "required": ["command", "config", "traces", "summary"],
    "properties": {
        "command": {"const": "trace"},
        "config": CONFIG,
        "traces": {"type": "array", "items": {
            "type": "object",
            "required": ["algorithm", "dataset", "run", "fold", "file", "length",
                         "final_accuracy"],
            "properties": {
                "algorithm": {"type": "string"},
                "dataset": {"type": "string"},
                "run": {"type": "integer", "minimum": 0},
                "fold": {"enum": [0, 1]},
                "file": {"type": "string"},
                "length": {"type": "integer", "minimum": 1},
                "final_accuracy": {"type": "number", "minimum": 0, "maximum": 1},
            },
        }},
        "summary": {"type": "array", "items": {
            "type": "object",
            "required": ["algorithm", "dataset", "mean_final_accuracy"],
            "properties": {"algorithm": {"type": "string"}, "dataset": {"type": "string"},
                           "mean_final_accuracy": _number},
        }},
    },
}

#: Column headers of the delimited outputs.
REPORT_CSV_COLUMNS = ["algorithm", "dataset", "alpha_neg", "alpha_pos", "runs", "mean",
                      "stddev", "mean_balanced_accuracy", "per_run_accuracy"]
TIMING_CSV_COLUMNS = ["algorithm", "dataset", "mean_cpu_seconds"]
SWEEP_CSV_COLUMNS = ["dataset", "algorithm", "ratio", "needed_weight", "best_weight", "match",
                     "best_alpha_neg", "best_alpha_pos", "best_score"]
TRACE_CSV_COLUMNS = ["step", "cumulative_accuracy"]
