"""JSON schema validation for flow specs and bridge cases."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema

from entrofunc.errors import SpecError


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = (resources.files("entrofunc") / "schemas" / f"{name}.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _validator(name: str):
    schema = load_schema(name)
    cls = jsonschema.validators.validator_for(schema)
    cls.check_schema(schema)
    return cls(schema)


def validate(data, name: str) -> None:
    """Raise SpecError naming the first violation (by path) when ``data`` does not match."""
    errors = sorted(_validator(name).iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SpecError(f"{name} schema violation at {where}: {e.message}")
