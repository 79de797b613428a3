"""Core element model: kinds, constraints, values, and the shared validator.

Every backend (terminal, headless, HTTP) funnels raw input through
:func:`validate`, so coercion and constraint checking behave identically
everywhere.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Union


class ElementKind(str, Enum):
    LABEL = "label"
    HTML = "html"
    TEXT = "text"
    TEXT_AREA = "text_area"
    INT_RANGE = "int_range"
    FLOAT_RANGE = "float_range"
    INT_TEXT = "int_text"
    BOUNDED_INT_TEXT = "bounded_int_text"
    FLOAT_TEXT = "float_text"
    BOUNDED_FLOAT_TEXT = "bounded_float_text"
    CHECK = "check"
    DROPDOWN = "dropdown"
    SELECT_MULTIPLE = "select_multiple"
    PATH = "path"
    FILE_UPLOAD = "file_upload"
    ACTION = "action"
    OUTPUT = "output"


INT_KINDS = frozenset(
    {ElementKind.INT_RANGE, ElementKind.INT_TEXT, ElementKind.BOUNDED_INT_TEXT}
)
FLOAT_KINDS = frozenset(
    {ElementKind.FLOAT_RANGE, ElementKind.FLOAT_TEXT, ElementKind.BOUNDED_FLOAT_TEXT}
)
RANGE_KINDS = frozenset({ElementKind.INT_RANGE, ElementKind.FLOAT_RANGE})
BOUNDED_KINDS = RANGE_KINDS | frozenset(
    {ElementKind.BOUNDED_INT_TEXT, ElementKind.BOUNDED_FLOAT_TEXT}
)
TEXT_KINDS = frozenset({ElementKind.TEXT, ElementKind.TEXT_AREA})
DISPLAY_KINDS = frozenset({ElementKind.LABEL, ElementKind.HTML})

# kind -> value tag; display-only, action, and output kinds carry no value.
KIND_TAGS = {
    ElementKind.INT_RANGE: "int",
    ElementKind.INT_TEXT: "int",
    ElementKind.BOUNDED_INT_TEXT: "int",
    ElementKind.FLOAT_RANGE: "real",
    ElementKind.FLOAT_TEXT: "real",
    ElementKind.BOUNDED_FLOAT_TEXT: "real",
    ElementKind.CHECK: "bool",
    ElementKind.TEXT: "str",
    ElementKind.TEXT_AREA: "str",
    ElementKind.DROPDOWN: "str",
    ElementKind.SELECT_MULTIPLE: "strlist",
    ElementKind.PATH: "path",
    ElementKind.FILE_UPLOAD: "blob",
    ElementKind.LABEL: None,
    ElementKind.HTML: None,
    ElementKind.ACTION: None,
    ElementKind.OUTPUT: None,
}


@dataclass(frozen=True)
class Blob:
    """An uploaded file: original filename plus raw bytes. Never persisted."""

    filename: str
    data: bytes


ParamValue = Union[int, float, bool, str, List[str], Blob]


@dataclass
class ConstraintSet:
    min: Optional[float] = None
    max: Optional[float] = None
    step: Optional[float] = None
    options: Optional[List[str]] = None
    extensions: Optional[List[str]] = None
    must_exist: Optional[bool] = None
    max_length: Optional[int] = None


@dataclass
class ElementSpec:
    name: str
    kind: ElementKind
    label: str
    constraints: ConstraintSet = field(default_factory=ConstraintSet)
    default: Optional[ParamValue] = None
    remember: bool = False
    help: Optional[str] = None

    @property
    def tag(self) -> Optional[str]:
        return KIND_TAGS[self.kind]

    @property
    def has_value(self) -> bool:
        return self.tag is not None


# Fixed precedence when several rules are violated at once.
RULE_ORDER = (
    "type_mismatch",
    "parse_failure",
    "out_of_range",
    "not_in_options",
    "too_long",
    "bad_extension",
    "path_missing",
)


@dataclass(frozen=True)
class ValidationError:
    element_name: str
    rule: str
    message: str


class FormError(ValueError):
    """Raised by construction-time misuse (duplicate name, bad default, ...)."""


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def _quantize(value: float, lo: float, step: float) -> float:
    return lo + _round_half_up((value - lo) / step) * step


def _err(element: ElementSpec, rule: str, message: str) -> ValidationError:
    return ValidationError(element.name, rule, message)


def validate(
    element: ElementSpec, raw: object
) -> Union[ParamValue, ValidationError]:
    """Coerce ``raw`` against ``element`` and return the canonical value.

    Failures are returned as :class:`ValidationError`, never raised. The
    coercion table is closed: int widens to float for real kinds, numeric
    strings parse for numeric kinds, and "true"/"false" (any case) parse
    for checkboxes. Everything else is a type mismatch.
    """
    kind = element.kind
    cs = element.constraints

    if kind in INT_KINDS:
        if isinstance(raw, bool):
            return _err(element, "type_mismatch", "expected an integer")
        if isinstance(raw, int):
            value = raw
        elif isinstance(raw, str):
            try:
                value = int(raw.strip())
            except ValueError:
                return _err(element, "parse_failure", f"not an integer: {raw!r}")
        else:
            return _err(element, "type_mismatch", "expected an integer")
        if kind is ElementKind.INT_RANGE and cs.step:
            value = int(_quantize(value, int(cs.min), int(cs.step)))
        if cs.min is not None and value < cs.min:
            return _err(element, "out_of_range", f"{value} < minimum {cs.min}")
        if cs.max is not None and value > cs.max:
            return _err(element, "out_of_range", f"{value} > maximum {cs.max}")
        return value

    if kind in FLOAT_KINDS:
        if isinstance(raw, bool):
            return _err(element, "type_mismatch", "expected a number")
        if isinstance(raw, (int, float)):
            value = float(raw)
        elif isinstance(raw, str):
            try:
                value = float(raw.strip())
            except ValueError:
                return _err(element, "parse_failure", f"not a number: {raw!r}")
        else:
            return _err(element, "type_mismatch", "expected a number")
        if not math.isfinite(value):
            return _err(element, "out_of_range", "value must be finite")
        if kind is ElementKind.FLOAT_RANGE and cs.step:
            value = _quantize(value, float(cs.min), float(cs.step))
        if cs.min is not None and value < cs.min:
            return _err(element, "out_of_range", f"{value} < minimum {cs.min}")
        if cs.max is not None and value > cs.max:
            return _err(element, "out_of_range", f"{value} > maximum {cs.max}")
        return value

    if kind is ElementKind.CHECK:
        if isinstance(raw, bool):
            return raw
        if isinstance(raw, str):
            lowered = raw.strip().lower()
            if lowered == "true":
                return True
            if lowered == "false":
                return False
            return _err(element, "parse_failure", f"not a boolean: {raw!r}")
        return _err(element, "type_mismatch", "expected true or false")

    if kind in TEXT_KINDS:
        if not isinstance(raw, str):
            return _err(element, "type_mismatch", "expected text")
        if cs.max_length is not None and len(raw) > cs.max_length:
            return _err(
                element, "too_long", f"longer than {cs.max_length} characters"
            )
        return raw

    if kind is ElementKind.DROPDOWN:
        if not isinstance(raw, str):
            return _err(element, "type_mismatch", "expected an option name")
        if raw not in (cs.options or []):
            return _err(element, "not_in_options", f"{raw!r} is not an option")
        return raw

    if kind is ElementKind.SELECT_MULTIPLE:
        if not isinstance(raw, (list, tuple)) or not all(
            isinstance(item, str) for item in raw
        ):
            return _err(element, "type_mismatch", "expected a list of options")
        for item in raw:
            if item not in (cs.options or []):
                return _err(element, "not_in_options", f"{item!r} is not an option")
        return list(raw)

    if kind is ElementKind.PATH:
        if not isinstance(raw, str):
            return _err(element, "type_mismatch", "expected a path")
        if cs.extensions and not os.path.isdir(raw):
            suffix = os.path.splitext(raw)[1]
            if suffix not in cs.extensions:
                return _err(
                    element,
                    "bad_extension",
                    f"expected one of {', '.join(cs.extensions)}",
                )
        if cs.must_exist and not os.path.exists(raw):
            return _err(element, "path_missing", f"no such path: {raw!r}")
        return raw

    if kind is ElementKind.FILE_UPLOAD:
        if not isinstance(raw, Blob):
            return _err(element, "type_mismatch", "expected an uploaded file")
        if cs.extensions:
            suffix = os.path.splitext(raw.filename)[1]
            if suffix not in cs.extensions:
                return _err(
                    element,
                    "bad_extension",
                    f"expected one of {', '.join(cs.extensions)}",
                )
        return raw

    return _err(element, "type_mismatch", f"{kind.value} elements carry no value")
