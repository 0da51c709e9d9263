"""JSON schemas of the documents written by the command-line front-end."""

_num = {"type": "number"}
_num_or_null = {"type": ["number", "null"]}
_str = {"type": "string"}

_params = {
    "gamma": _num,
    "delta": _num,
    "h0": _num,
    "multiplier": {"type": "object", "required": ["layer1", "layer2"]},
}

SOLVE = {
    "type": "object",
    "required": ["gamma", "delta", "multiplier", "c", "alpha", "q", "amplitude",
                 "residual_norm", "N", "P", "iterations"],
    "properties": {
        **_params,
        "c": {"type": "number", "exclusiveMinimum": 1},
        "alpha": {"type": "number", "exclusiveMaximum": 0},
        "q": {"type": "number", "minimum": 0},
        "amplitude": _num,
        "residual_norm": {"type": "number", "minimum": 0},
        "el_residual_norm": {"type": "number", "minimum": 0},
        "N": {"type": "integer", "minimum": 8},
        "P": {"type": "number", "exclusiveMinimum": 0},
        "P_auto": {"type": "boolean"},
        "iterations": {"type": "integer", "minimum": 0},
        "flags": {"type": "array", "items": _str},
        "timestamp": _str,
    },
}

CONTINUE = {
    "type": "object",
    "required": ["gamma", "delta", "multiplier", "count", "stopped", "stop_report", "waves"],
    "properties": {
        **_params,
        "count": {"type": "integer", "minimum": 1},
        "stopped": {"type": "boolean"},
        "stop_report": {"type": ["object", "null"]},
        "waves": {"type": "array", "items": {"type": "object", "required": ["c", "q", "alpha", "amplitude", "residual_norm", "file"]}},
        "N": {"type": "integer"},
        "P": _num,
        "timestamp": _str,
    },
}

MINIMIZE = {
    "type": "object",
    "required": ["gamma", "delta", "multiplier", "alpha", "value", "q", "penalty_active",
                 "el_residual", "iterations", "R", "nu", "N", "P"],
    "properties": {
        **_params,
        "alpha": _num,
        "value": _num,
        "q": {"type": "number", "exclusiveMinimum": 0},
        "penalty_active": {"type": "boolean"},
        "el_residual": {"type": "number", "minimum": 0},
        "iterations": {"type": "integer", "minimum": 0},
        "R": {"type": "number", "exclusiveMinimum": 0},
        "nu": _num,
        "N": {"type": "integer"},
        "P": _num,
        "timestamp": _str,
    },
}

_fit = {"type": "object", "required": ["exponent", "prefactor", "r2"],
        "properties": {"exponent": _num, "prefactor": _num, "r2": _num}}

RATE_STUDY = {
    "type": "object",
    "required": ["gamma", "delta", "multiplier", "alpha0", "alpha_plus_one", "h1_error",
                 "energy_remainder_over_q2", "count"],
    "properties": {
        **_params,
        "alpha0": {"type": "number", "exclusiveMinimum": 0},
        "alpha_plus_one": _fit,
        "h1_error": _fit,
        "energy_remainder_over_q2": {"type": "array", "items": _num},
        "count": {"type": "integer", "minimum": 4},
        "timestamp": _str,
    },
}

CHECK_MULTIPLIER = {
    "type": "object",
    "required": ["spec", "k_max", "samples", "items", "passed"],
    "properties": {
        "spec": {"type": "object", "required": ["kind", "theta"]},
        "k_max": _num,
        "samples": {"type": "integer"},
        "passed": {"type": "boolean"},
        "items": {
            "type": "object",
            "required": ["1_even_and_bounded", "2_regular_at_zero", "3_derivative_L2", "4_decay_rate"],
            "additionalProperties": {"type": "object", "required": ["passed"]},
        },
        "timestamp": _str,
    },
}

CSV_HEADERS = {
    "profile": ["x", "zeta"],
    "family": ["c", "q", "alpha", "amplitude", "residual_norm"],
    "rates": ["q", "c", "alpha", "E", "h1_error", "shift"],
    "trace": ["iteration", "objective", "grad_norm", "penalty"],
}
