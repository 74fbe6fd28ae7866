"""JSON Schemas for the CLI output envelope, one per subcommand."""

INTEGER = {"type": "string", "pattern": "^-?[0-9]+$"}
RATIONAL = {
    "type": "object",
    "properties": {"numerator": INTEGER, "denominator": INTEGER},
    "required": ["numerator", "denominator"],
    "additionalProperties": False,
}
INTEGERS = {"type": "array", "items": INTEGER}
CONFIGURATION = {
    "type": "object",
    "properties": {"q": INTEGER, "a": INTEGERS},
    "required": ["q", "a"],
    "additionalProperties": False,
}
WITNESS = {
    "anyOf": [
        {"type": "null"},
        {
            "type": "object",
            "properties": {"configuration": CONFIGURATION, "target": INTEGERS},
            "required": ["configuration", "target"],
        },
    ]
}


def _obj(props, required=None):
    return {
        "type": "object",
        "properties": props,
        "required": list(props) if required is None else required,
        "additionalProperties": False,
    }


SWEEP = _obj(
    {
        "kind": {"enum": ["max", "min", "signed-max"]},
        "n": INTEGER,
        "q": INTEGER,
        "k": INTEGER,
        "formula_bound": INTEGER,
        "observed": INTEGER,
        "agree": {"type": "boolean"},
        "witness": WITNESS,
        "evaluated": INTEGER,
        "pruned": {"type": "boolean"},
    }
)

CERTIFICATE = _obj(
    {
        "kind": {"const": "certificate"},
        "n": INTEGER,
        "q": INTEGER,
        "configurations": INTEGER,
        "verified": INTEGER,
        "bound_matches": INTEGER,
        "dominated": INTEGER,
        "multiset_matches": INTEGER,
        "targets_per_configuration": INTEGER,
        "agree": {"type": "boolean"},
        "failures": {"type": "array", "items": {"type": "string"}},
    }
)

RESULTS = {
    "bound": _obj(
        {
            "kind": {"enum": ["theorem1", "cor2", "cor3"]},
            "value": INTEGER,
            "method": {"enum": ["formula", "partition", "brute-force"]},
            "witness": WITNESS,
        }
    ),
    "dist": _obj(
        {
            "q": INTEGER,
            "n": INTEGER,
            "signed": {"type": "boolean"},
            "counts": INTEGERS,
            "total": INTEGER,
        }
    ),
    "partition": _obj(
        {
            "configuration": CONFIGURATION,
            "blocks": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
            "block_sizes": INTEGERS,
            "verification": _obj(
                {
                    "ok": {"type": "boolean"},
                    "block_count": INTEGER,
                    "expected_block_count": INTEGER,
                    "violation": {"type": ["string", "null"]},
                }
            ),
            "certificate_bound": {
                "anyOf": [{"type": "null"}, _obj({"k": INTEGER, "value": INTEGER, "formula": INTEGER})]
            },
        }
    ),
    "extremal": _obj(
        {
            "kind": {"enum": ["allones", "split", "cor2"]},
            "configuration": CONFIGURATION,
            "target": INTEGERS,
            "claimed": INTEGER,
        }
    ),
    "verify": _obj(
        {
            "kind": {"enum": ["max", "min", "signed", "certificate"]},
            "results": {"type": "array", "items": {"anyOf": [SWEEP, CERTIFICATE]}},
            "all_agree": {"type": "boolean"},
        }
    ),
    "uniformity": _obj(
        {
            "n": INTEGER,
            "q": INTEGER,
            "counts": INTEGERS,
            "min_fraction": RATIONAL,
            "max_fraction": RATIONAL,
            "max_deviation": RATIONAL,
            "max_deviation_approx": {"type": "string"},
        }
    ),
}


def envelope_schema(command: str) -> dict:
    return _obj(
        {
            "command": {"const": command},
            "parameters": {"type": "object"},
            "result": RESULTS[command],
        }
    )
