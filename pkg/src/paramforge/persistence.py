"""Parameter memory: deterministic YAML save/load of remembered values.

The params file is a flat map of scalars (plus string lists), keys in
ascending order, written atomically. The emitter is hand-rolled so the
output is byte-stable: integers bare, reals in shortest round-trip form,
booleans lowercase, strings quoted only when YAML needs it. Loading goes
through ``yaml.safe_load`` and the shared validator, tolerating unknown
keys and incompatible values.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from dataclasses import dataclass, field
from typing import List, Optional

import yaml

from .form import FormSpec
from .model import Blob, ValidationError, validate


class PersistenceError(Exception):
    pass


@dataclass
class LoadReport:
    applied: List[str] = field(default_factory=list)
    skipped_unknown: List[str] = field(default_factory=list)
    defaulted_incompatible: List[str] = field(default_factory=list)


_WS_RUN = re.compile(r"\s+")
_BAD_TITLE_CHARS = re.compile(r"[/\\\x00-\x1f\x7f]")


def default_params_path(title: str, base_dir: str = ".") -> str:
    """Derive the params filename from the form title.

    Whitespace runs collapse to single underscores; path separators and
    control characters are stripped; case is preserved.
    """
    sanitized = _BAD_TITLE_CHARS.sub("", title)
    sanitized = _WS_RUN.sub("_", sanitized.strip())
    if not sanitized:
        raise PersistenceError(f"title {title!r} sanitizes to an empty filename")
    return os.path.join(base_dir, sanitized + "_parameters.yml")


def _format_float(x: float) -> str:
    # repr() is the shortest round-trip form; guarantee a '.' so YAML 1.1
    # loaders resolve it as a float (bare "1e+20" would load as a string).
    s = repr(float(x))
    if "e" in s:
        mantissa, _, exponent = s.partition("e")
        if "." not in mantissa:
            mantissa += ".0"
        return mantissa + "e" + exponent
    if "." not in s:
        s += ".0"
    return s


def _plain_ok(s: str, flow: bool = False) -> bool:
    if s == "" or s != s.strip():
        return False
    if any(ord(c) < 32 or ord(c) == 127 for c in s):
        return False
    doc = f"k: [{s}]" if flow else f"k: {s}"
    try:
        loaded = yaml.safe_load(doc)
    except yaml.YAMLError:
        return False
    expected = {"k": [s]} if flow else {"k": s}
    return loaded == expected and isinstance(
        loaded["k"][0] if flow else loaded["k"], str
    )


def _format_str(s: str, flow: bool = False) -> str:
    if _plain_ok(s, flow=flow):
        return s
    return json.dumps(s)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, str):
        return _format_str(value)
    if isinstance(value, list):
        return "[" + ", ".join(_format_str(item, flow=True) for item in value) + "]"
    raise PersistenceError(f"unserializable value: {value!r}")


def serialize(entries: dict) -> str:
    lines = []
    for key in sorted(entries):
        lines.append(f"{_format_str(key)}: {_format_value(entries[key])}\n")
    return "".join(lines)


def save_parameters(form: FormSpec, path: Optional[str] = None) -> str:
    """Write the remembered, non-blob values of ``form`` as YAML.

    Returns the path used: explicit argument, else the form's override,
    else the title-derived default. The write is atomic (temp file plus
    rename), so a crash never clobbers the previous session's file.
    """
    target = path or form.params_path_override or default_params_path(form.title)
    entries = {}
    for el in form.elements:
        if not el.has_value or not el.remember:
            continue
        value = form.values.get(el.name)
        if value is None or isinstance(value, Blob):
            continue
        result = validate(el, value)
        if isinstance(result, ValidationError):
            raise PersistenceError(
                f"value for {el.name!r} is invalid ({result.rule}); validate before saving"
            )
        entries[el.name] = result
    text = serialize(entries)
    directory = os.path.dirname(target) or "."
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".params-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise PersistenceError(f"cannot write params file {target!r}: {exc}") from exc
    return target


def load_parameters(form: FormSpec, path: str) -> LoadReport:
    """Apply a saved params file to ``form``, tolerating schema drift.

    Unknown names are skipped; values that fail validation reset their
    element to its default. Either way every element ends
    constraint-satisfying and the report says what happened.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise PersistenceError(f"cannot read params file {path!r}: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise PersistenceError(f"params file {path!r} is not valid YAML: {exc}") from exc
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise PersistenceError(f"params file {path!r} is not a YAML map")

    report = LoadReport()
    value_bearing = {el.name: el for el in form.elements if el.has_value}
    for key, raw in doc.items():
        name = key if isinstance(key, str) else str(key)
        el = value_bearing.get(name)
        if el is None:
            report.skipped_unknown.append(name)
            continue
        result = validate(el, raw)
        if isinstance(result, ValidationError):
            form.values[name] = el.default
            report.defaulted_incompatible.append(name)
        else:
            form.values[name] = result
            report.applied.append(name)
    return report


def autoload_on_init(form: FormSpec, base_dir: str = ".") -> Optional[LoadReport]:
    """Load the override path, else the default path, else do nothing.

    A missing file is never an error here: a first run simply has no
    memory yet.
    """
    if form.params_path_override:
        if os.path.exists(form.params_path_override):
            return load_parameters(form, form.params_path_override)
        return None
    default = default_params_path(form.title, base_dir)
    if os.path.exists(default):
        return load_parameters(form, default)
    return None
