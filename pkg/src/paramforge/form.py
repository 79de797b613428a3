"""Declarative form registry and fluent builder API.

A :class:`FormSpec` is the single source of truth for parameter state:
an ordered list of element specifications plus their current values.
Backends only ever read it and write through the shared validator.
"""

from __future__ import annotations

import copy
import io
import re
import traceback
from contextlib import redirect_stdout
from typing import Callable, Dict, List, Optional, Tuple

from .model import (
    BOUNDED_KINDS,
    DISPLAY_KINDS,
    FLOAT_KINDS,
    INT_KINDS,
    TEXT_KINDS,
    Blob,
    ConstraintSet,
    ElementKind,
    ElementSpec,
    FormError,
    ParamValue,
    ValidationError,
    validate,
)

# Names double as YAML keys and wire identifiers, so keep them boring.
_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


class FormSpec:
    """Ordered registry of elements, their constraints, and current values."""

    def __init__(self, title: str, params_path_override: Optional[str] = None):
        if not title.strip():
            raise FormError("form title must not be empty")
        self.title = title
        self.elements: List[ElementSpec] = []
        self.values: Dict[str, Optional[ParamValue]] = {}
        self.params_path_override = params_path_override
        self.output_buffers: Dict[str, List[str]] = {}
        self.actions: Dict[str, Callable] = {}
        self.custom_renderers: Dict[str, Dict[str, Callable]] = {}
        self._static_count = 0

    # -- registry internals ------------------------------------------------

    def element(self, name: str) -> ElementSpec:
        for el in self.elements:
            if el.name == name:
                return el
        raise KeyError(name)

    def has_element(self, name: str) -> bool:
        return any(el.name == name for el in self.elements)

    def _check_name(self, name: str) -> None:
        if not _NAME_RE.match(name):
            raise FormError(f"invalid element name: {name!r}")
        if self.has_element(name):
            raise FormError(f"duplicate element name: {name!r}")

    def _append(self, el: ElementSpec) -> "FormSpec":
        if el.default is not None:
            result = validate(el, el.default)
            if isinstance(result, ValidationError):
                raise FormError(
                    f"default for {el.name!r} violates {result.rule}: {result.message}"
                )
            el.default = result
        self.elements.append(el)
        if el.has_value:
            self.values[el.name] = copy.deepcopy(el.default)
        if el.kind is ElementKind.OUTPUT:
            self.output_buffers[el.name] = []
        return self

    # -- builder operations ------------------------------------------------

    def add_static(self, kind: ElementKind, content: str) -> "FormSpec":
        if kind not in DISPLAY_KINDS:
            raise FormError(f"{kind.value} is not a display kind")
        name = f"_static_{self._static_count}"
        self._static_count += 1
        return self._append(ElementSpec(name=name, kind=kind, label=content))

    def add_text_input(
        self,
        kind: ElementKind,
        name: str,
        label: str,
        default: Optional[str] = "",
        remember: bool = False,
        max_length: Optional[int] = None,
        help: Optional[str] = None,
    ) -> "FormSpec":
        if kind not in TEXT_KINDS:
            raise FormError(f"{kind.value} is not a text kind")
        if max_length is not None and max_length <= 0:
            raise FormError("max_length must be positive")
        self._check_name(name)
        return self._append(
            ElementSpec(
                name=name,
                kind=kind,
                label=label,
                constraints=ConstraintSet(max_length=max_length),
                default=default,
                remember=remember,
                help=help,
            )
        )

    def add_numeric(
        self,
        kind: ElementKind,
        name: str,
        label: str,
        min: Optional[float] = None,
        max: Optional[float] = None,
        step: Optional[float] = None,
        default: Optional[float] = None,
        remember: bool = False,
        help: Optional[str] = None,
    ) -> "FormSpec":
        if kind not in INT_KINDS | FLOAT_KINDS:
            raise FormError(f"{kind.value} is not a numeric kind")
        self._check_name(name)
        if kind in BOUNDED_KINDS:
            if min is None or max is None:
                raise FormError(f"{kind.value} requires both min and max")
            if default is None:
                raise FormError(f"{kind.value} requires a default")
        if min is not None and max is not None and min > max:
            raise FormError(f"min {min} exceeds max {max}")
        if step is not None and step <= 0:
            raise FormError("step must be positive")
        if kind in INT_KINDS:
            for field_name, v in (("min", min), ("max", max), ("step", step), ("default", default)):
                if v is not None and (isinstance(v, bool) or int(v) != v):
                    raise FormError(f"{field_name} must be integral for {kind.value}")
            min = None if min is None else int(min)
            max = None if max is None else int(max)
            step = None if step is None else int(step)
            default = None if default is None else int(default)
        else:
            default = None if default is None else float(default)
        return self._append(
            ElementSpec(
                name=name,
                kind=kind,
                label=label,
                constraints=ConstraintSet(min=min, max=max, step=step),
                default=default,
                remember=remember,
                help=help,
            )
        )

    def add_choice(
        self,
        kind: ElementKind,
        name: str,
        label: str,
        options: Optional[List[str]] = None,
        default: Optional[ParamValue] = None,
        remember: bool = False,
        help: Optional[str] = None,
    ) -> "FormSpec":
        if kind not in (
            ElementKind.CHECK,
            ElementKind.DROPDOWN,
            ElementKind.SELECT_MULTIPLE,
        ):
            raise FormError(f"{kind.value} is not a choice kind")
        self._check_name(name)
        constraints = ConstraintSet()
        if kind is not ElementKind.CHECK:
            if not options:
                raise FormError(f"{kind.value} requires non-empty options")
            constraints.options = list(options)
        if kind is ElementKind.SELECT_MULTIPLE and default is None:
            default = []
        return self._append(
            ElementSpec(
                name=name,
                kind=kind,
                label=label,
                constraints=constraints,
                default=default,
                remember=remember,
                help=help,
            )
        )

    def add_path(
        self,
        name: str,
        label: str,
        default: Optional[str] = None,
        must_exist: bool = False,
        extensions: Optional[List[str]] = None,
        remember: bool = False,
        help: Optional[str] = None,
    ) -> "FormSpec":
        self._check_name(name)
        return self._append(
            ElementSpec(
                name=name,
                kind=ElementKind.PATH,
                label=label,
                constraints=ConstraintSet(
                    must_exist=must_exist, extensions=list(extensions) if extensions else None
                ),
                default=default,
                remember=remember,
                help=help,
            )
        )

    def add_file_upload(
        self,
        name: str,
        label: str,
        extensions: Optional[List[str]] = None,
        help: Optional[str] = None,
    ) -> "FormSpec":
        self._check_name(name)
        return self._append(
            ElementSpec(
                name=name,
                kind=ElementKind.FILE_UPLOAD,
                label=label,
                constraints=ConstraintSet(
                    extensions=list(extensions) if extensions else None
                ),
                remember=False,
                help=help,
            )
        )

    def add_action(
        self, name: str, button_label: str, callback: Callable
    ) -> "FormSpec":
        self._check_name(name)
        self.actions[name] = callback
        return self._append(
            ElementSpec(name=name, kind=ElementKind.ACTION, label=button_label)
        )

    def add_output(self, name: str) -> "FormSpec":
        self._check_name(name)
        return self._append(ElementSpec(name=name, kind=ElementKind.OUTPUT, label=name))

    def add_custom_widget(
        self, name: str, renderers: Dict[str, Callable]
    ) -> "FormSpec":
        """Register per-backend renderers for an opaque element.

        ``renderers`` maps a backend name ("tui", "web") to a callable the
        backend invokes however it sees fit. Elements without a renderer for
        the active backend are skipped.
        """
        self._check_name(name)
        self.custom_renderers[name] = dict(renderers)
        return self._append(ElementSpec(name=name, kind=ElementKind.LABEL, label=""))

    # -- values ----------------------------------------------------------

    def get_values(self) -> Dict[str, ParamValue]:
        """Snapshot of all set, value-bearing entries; safe to mutate."""
        return {
            el.name: copy.deepcopy(self.values[el.name])
            for el in self.elements
            if el.has_value and self.values.get(el.name) is not None
        }

    def set_value(self, name: str, raw: object):
        """Validate ``raw`` for element ``name`` and apply it on success.

        Returns the canonical value, or the ValidationError on failure
        (leaving the current value untouched).
        """
        el = self.element(name)
        result = validate(el, raw)
        if not isinstance(result, ValidationError):
            self.values[name] = result
        return result

    def reset_to_defaults(self) -> None:
        for el in self.elements:
            if el.has_value:
                self.values[el.name] = copy.deepcopy(el.default)

    # -- outputs and actions ----------------------------------------------

    def write_output(self, text: str, name: Optional[str] = None) -> None:
        """Append ``text`` (split on newlines) to an output buffer."""
        lines = text.split("\n")
        if name is None:
            name = next(
                (el.name for el in self.elements if el.kind is ElementKind.OUTPUT),
                None,
            )
        if name is not None and name in self.output_buffers:
            self.output_buffers[name].extend(lines)

    def _output_near(self, action_index: int) -> Optional[str]:
        best = None
        best_dist = None
        for i, el in enumerate(self.elements):
            if el.kind is ElementKind.OUTPUT:
                dist = abs(i - action_index)
                if best_dist is None or dist < best_dist:
                    best, best_dist = el.name, dist
        return best

    def invoke_action(self, name: str) -> Tuple[bool, List[str]]:
        """Run the callback for action ``name`` with a values snapshot.

        Captures the callback's stdout and return value (if a string) as
        output lines, routed to the nearest output element when one exists.
        Exceptions are contained: the form stays live and the error text is
        returned as the output.
        """
        callback = self.actions[name]
        action_index = next(
            i for i, el in enumerate(self.elements) if el.name == name
        )
        target = self._output_near(action_index)
        buf = io.StringIO()
        try:
            with redirect_stdout(buf):
                returned = callback(self.get_values())
        except Exception as exc:  # noqa: BLE001 - containment contract
            lines = [f"error: {exc}"]
            lines.extend(traceback.format_exc().rstrip("\n").split("\n")[-1:])
            ok = False
        else:
            lines = buf.getvalue().rstrip("\n").split("\n") if buf.getvalue() else []
            if isinstance(returned, str):
                lines.extend(returned.split("\n"))
            ok = True
        if target is not None:
            self.output_buffers[target].extend(lines)
        return ok, lines

    # -- persistence conveniences ------------------------------------------

    def save_parameters(self, path: Optional[str] = None) -> str:
        from . import persistence

        return persistence.save_parameters(self, path)

    def load_parameters(self, path: str):
        from . import persistence

        return persistence.load_parameters(self, path)

    # -- per-method aliases matching the classic builder vocabulary ---------

    def add_label(self, content: str) -> "FormSpec":
        return self.add_static(ElementKind.LABEL, content)

    def add_html(self, content: str) -> "FormSpec":
        return self.add_static(ElementKind.HTML, content)

    add_HTML = add_html

    def add_text(self, name, label, default="", remember=False, max_length=None):
        return self.add_text_input(
            ElementKind.TEXT, name, label, default, remember, max_length
        )

    def add_text_area(self, name, label, default="", remember=False, max_length=None):
        return self.add_text_input(
            ElementKind.TEXT_AREA, name, label, default, remember, max_length
        )

    def add_int_range(self, name, label, min, max, default, step=None, remember=False):
        return self.add_numeric(
            ElementKind.INT_RANGE, name, label, min, max, step, default, remember
        )

    def add_float_range(self, name, label, min, max, default, step=None, remember=False):
        return self.add_numeric(
            ElementKind.FLOAT_RANGE, name, label, min, max, step, default, remember
        )

    def add_int_text(self, name, label, default=None, remember=False):
        return self.add_numeric(
            ElementKind.INT_TEXT, name, label, default=default, remember=remember
        )

    def add_bounded_int_text(self, name, label, min, max, default, remember=False):
        return self.add_numeric(
            ElementKind.BOUNDED_INT_TEXT, name, label, min, max, None, default, remember
        )

    def add_float_text(self, name, label, default=None, remember=False):
        return self.add_numeric(
            ElementKind.FLOAT_TEXT, name, label, default=default, remember=remember
        )

    def add_bounded_float_text(self, name, label, min, max, default, remember=False):
        return self.add_numeric(
            ElementKind.BOUNDED_FLOAT_TEXT, name, label, min, max, None, default, remember
        )

    def add_check(self, name, label, default=None, remember=False):
        return self.add_choice(
            ElementKind.CHECK, name, label, default=default, remember=remember
        )

    def add_dropdown(self, name, label, options, default=None, remember=False):
        return self.add_choice(
            ElementKind.DROPDOWN, name, label, options, default, remember
        )

    def add_select_multiple(self, name, label, options, default=None, remember=False):
        return self.add_choice(
            ElementKind.SELECT_MULTIPLE, name, label, options, default, remember
        )

    add_path_completer = add_path

    def add_callback(self, name, button_label, callback):
        return self.add_action(name, button_label, callback)


def new_form(title: str, params_path: Optional[str] = None) -> FormSpec:
    return FormSpec(title, params_path_override=params_path)
