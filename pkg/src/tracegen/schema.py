"""JSON Schema subset, instance validation, JSON Pointers and canonical equivalence.

The supported schema vocabulary is deliberately small: type, properties,
required, items, enum, const, minimum, maximum, exclusiveMinimum,
exclusiveMaximum, description, and the domain extension keyword "unit".
Anything else is rejected loudly rather than silently ignored.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any

from tracegen.errors import (
    InvalidKeywordValue,
    PointerSyntaxError,
    PointerUnresolvable,
    RequiredNamesUnknownProperty,
    UnknownKeyword,
)

SchemaDoc = dict

ALLOWED_KEYWORDS = {
    "type",
    "properties",
    "required",
    "items",
    "enum",
    "const",
    "minimum",
    "maximum",
    "exclusiveMinimum",
    "exclusiveMaximum",
    "description",
    "unit",
}

ALLOWED_TYPES = {"object", "array", "string", "number", "integer", "boolean", "null"}

# "unit" carries constraint semantics for the domain (e.g. milliseconds), so it
# survives canonicalization and participates in equivalence. "description" does not.
ANNOTATION_KEYWORDS = {"description"}

_POINTER_RE = re.compile(r"^(/([^/~]|~[01])*)*$")


@dataclass(frozen=True)
class SchemaViolation:
    """One failed keyword check for a concrete instance."""

    pointer: str
    keyword: str
    message: str


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def parse_schema(doc: Any, pointer: str = "") -> SchemaDoc:
    """Validate ``doc`` against the supported keyword subset.

    Returns the document unchanged when valid; raises a SchemaError subclass
    naming the offending keyword and its location otherwise.
    """
    if not isinstance(doc, dict):
        raise InvalidKeywordValue("schema must be a JSON object", pointer)

    for key in doc:
        if key not in ALLOWED_KEYWORDS:
            raise UnknownKeyword(f"unsupported keyword {key!r}", pointer)

    if "type" in doc:
        if doc["type"] not in ALLOWED_TYPES:
            raise InvalidKeywordValue(f"invalid type {doc['type']!r}", pointer)
    if "properties" in doc:
        props = doc["properties"]
        if not isinstance(props, dict):
            raise InvalidKeywordValue("properties must be an object", pointer)
        for name, sub in props.items():
            parse_schema(sub, f"{pointer}/properties/{escape_token(name)}")
    if "required" in doc:
        req = doc["required"]
        if not isinstance(req, list) or not all(isinstance(r, str) for r in req):
            raise InvalidKeywordValue("required must be a list of strings", pointer)
        known = doc.get("properties", {})
        for name in req:
            if name not in known:
                raise RequiredNamesUnknownProperty(
                    f"required names unknown property {name!r}", pointer
                )
    if "items" in doc:
        parse_schema(doc["items"], f"{pointer}/items")
    if "enum" in doc:
        if not isinstance(doc["enum"], list) or not doc["enum"]:
            raise InvalidKeywordValue("enum must be a non-empty list", pointer)
    for kw in ("minimum", "maximum", "exclusiveMinimum", "exclusiveMaximum"):
        if kw in doc and not _is_number(doc[kw]):
            raise InvalidKeywordValue(f"{kw} must be a number", pointer)
    if "minimum" in doc and "maximum" in doc and doc["minimum"] > doc["maximum"]:
        raise InvalidKeywordValue("minimum exceeds maximum", pointer)
    for kw in ("description", "unit"):
        if kw in doc and not isinstance(doc[kw], str):
            raise InvalidKeywordValue(f"{kw} must be a string", pointer)
    return doc


def _json_type(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, (int, float)):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, list):
        return "array"
    return "object"


def _matches_type(value: Any, declared: str) -> bool:
    actual = _json_type(value)
    if declared == "integer":
        return actual == "number" and float(value) == int(value)
    return actual == declared


def json_equal(a: Any, b: Any) -> bool:
    """JSON-value equality that keeps booleans distinct from numbers."""
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    if _is_number(a) and _is_number(b):
        return a == b
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(json_equal(a[k], b[k]) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(json_equal(x, y) for x, y in zip(a, b))
    return type(a) is type(b) and a == b


def validate_instance(schema: SchemaDoc, instance: Any) -> list[SchemaViolation]:
    """Check ``instance`` against a valid schema; empty result means valid.

    Keyword semantics follow standard JSON Schema: applicators only fire on
    instances of the matching JSON type, "unit" never fails validation.
    """
    out: list[SchemaViolation] = []
    _validate(schema, instance, "", out)
    return out


def _validate(schema: SchemaDoc, instance: Any, ptr: str, out: list[SchemaViolation]) -> None:
    if "type" in schema and not _matches_type(instance, schema["type"]):
        out.append(
            SchemaViolation(ptr, "type", f"expected {schema['type']}, got {_json_type(instance)}")
        )
    if "enum" in schema and not any(json_equal(instance, m) for m in schema["enum"]):
        out.append(SchemaViolation(ptr, "enum", "value not among enum members"))
    if "const" in schema and not json_equal(instance, schema["const"]):
        out.append(SchemaViolation(ptr, "const", "value differs from const"))
    if _is_number(instance):
        if "minimum" in schema and instance < schema["minimum"]:
            out.append(SchemaViolation(ptr, "minimum", f"{instance} < {schema['minimum']}"))
        if "maximum" in schema and instance > schema["maximum"]:
            out.append(SchemaViolation(ptr, "maximum", f"{instance} > {schema['maximum']}"))
        if "exclusiveMinimum" in schema and instance <= schema["exclusiveMinimum"]:
            out.append(
                SchemaViolation(ptr, "exclusiveMinimum", f"{instance} <= {schema['exclusiveMinimum']}")
            )
        if "exclusiveMaximum" in schema and instance >= schema["exclusiveMaximum"]:
            out.append(
                SchemaViolation(ptr, "exclusiveMaximum", f"{instance} >= {schema['exclusiveMaximum']}")
            )
    if isinstance(instance, dict):
        for name in schema.get("required", []):
            if name not in instance:
                out.append(SchemaViolation(ptr, "required", f"missing property {name!r}"))
        for name, sub in schema.get("properties", {}).items():
            if name in instance:
                _validate(sub, instance[name], f"{ptr}/{escape_token(name)}", out)
    if isinstance(instance, list) and "items" in schema:
        for i, item in enumerate(instance):
            _validate(schema["items"], item, f"{ptr}/{i}", out)


def escape_token(token: str) -> str:
    return token.replace("~", "~0").replace("/", "~1")


def unescape_token(token: str) -> str:
    return token.replace("~1", "/").replace("~0", "~")


def is_valid_pointer(text: str) -> bool:
    return bool(_POINTER_RE.match(text))


def parse_pointer(text: str) -> list[str]:
    """Split a textual JSON Pointer into decoded reference tokens."""
    if not is_valid_pointer(text):
        raise PointerSyntaxError(f"malformed JSON Pointer {text!r}")
    if text == "":
        return []
    return [unescape_token(tok) for tok in text.split("/")[1:]]


def resolve_pointer(doc: Any, pointer: str) -> Any:
    """Evaluate a JSON Pointer against ``doc`` per the standard semantics."""
    current = doc
    for token in parse_pointer(pointer):
        if isinstance(current, dict):
            if token not in current:
                raise PointerUnresolvable(token, pointer)
            current = current[token]
        elif isinstance(current, list):
            if not re.fullmatch(r"0|[1-9][0-9]*", token):
                raise PointerUnresolvable(token, pointer)
            index = int(token)
            if index >= len(current):
                raise PointerUnresolvable(token, pointer)
            current = current[index]
        else:
            raise PointerUnresolvable(token, pointer)
    return current


def canonicalize(schema: SchemaDoc) -> SchemaDoc:
    """Normalize a schema for comparison.

    Drops annotation keywords at every level, sorts object keys, sorts the
    required list, and sorts enum members by their canonical JSON text.
    Idempotent by construction.
    """
    out: dict[str, Any] = {}
    for key in sorted(schema):
        if key in ANNOTATION_KEYWORDS:
            continue
        value = schema[key]
        if key == "properties":
            out[key] = {name: canonicalize(value[name]) for name in sorted(value)}
        elif key == "items":
            out[key] = canonicalize(value)
        elif key == "required":
            out[key] = sorted(value)
        elif key == "enum":
            out[key] = sorted(value, key=lambda m: json.dumps(m, sort_keys=True))
        else:
            out[key] = value
    return out


def canonical_text(schema: SchemaDoc) -> str:
    return json.dumps(canonicalize(schema), sort_keys=True)


def schemas_equivalent(a: SchemaDoc, b: SchemaDoc) -> bool:
    """Structural equality of the canonical forms of two schemas."""
    return canonical_text(a) == canonical_text(b)


def collect_property_paths(schema: SchemaDoc) -> list[tuple[str, SchemaDoc]]:
    """Enumerate subschemas reachable through ``properties`` chains.

    Pointers have the form /properties/x/properties/y and the result is
    sorted by pointer text. A schema without properties yields itself at the
    empty pointer.
    """
    found: list[tuple[str, SchemaDoc]] = []

    def walk(prefix: str, node: SchemaDoc) -> None:
        for name, sub in node.get("properties", {}).items():
            ptr = f"{prefix}/properties/{escape_token(name)}"
            found.append((ptr, sub))
            if isinstance(sub, dict):
                walk(ptr, sub)

    walk("", schema)
    if not found:
        return [("", schema)]
    found.sort(key=lambda pair: pair[0])
    return found
