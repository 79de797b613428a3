"""Standalone driver: build a form from a YAML definition file and run it.

Exit codes: 0 submitted, 1 error, 2 cancelled.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import yaml

from . import environment
from .environment import detect_mode
from .form import FormSpec, new_form
from .model import ElementKind, FormError
from .outcome import Cancelled, Served, Submitted


class DefinitionError(Exception):
    pass


_STANZA_FIELDS = {
    "kind",
    "name",
    "label",
    "content",
    "min",
    "max",
    "step",
    "options",
    "default",
    "remember",
    "extensions",
    "must_exist",
    "max_length",
    "help",
}


def _stanza_error(ordinal: int, message: str) -> DefinitionError:
    return DefinitionError(f"element {ordinal}: {message}")


def _apply_stanza(form: FormSpec, ordinal: int, stanza: dict) -> None:
    if not isinstance(stanza, dict):
        raise _stanza_error(ordinal, "element stanza must be a map")
    unknown = set(stanza) - _STANZA_FIELDS
    if unknown:
        raise _stanza_error(ordinal, f"unknown field {sorted(unknown)[0]!r}")
    kind_name = stanza.get("kind")
    try:
        kind = ElementKind(kind_name)
    except ValueError:
        raise _stanza_error(ordinal, f"unknown kind {kind_name!r}") from None
    if kind in (ElementKind.ACTION,):
        # Definition files never carry executable code.
        raise _stanza_error(ordinal, "action elements are only available via the API")

    def need(field: str):
        if field not in stanza:
            raise _stanza_error(ordinal, f"missing field {field!r} for {kind.value}")
        return stanza[field]

    try:
        if kind in (ElementKind.LABEL, ElementKind.HTML):
            form.add_static(kind, stanza.get("content", stanza.get("label", "")))
        elif kind in (ElementKind.TEXT, ElementKind.TEXT_AREA):
            form.add_text_input(
                kind,
                need("name"),
                stanza.get("label", stanza.get("name", "")),
                stanza.get("default", ""),
                bool(stanza.get("remember", False)),
                stanza.get("max_length"),
                stanza.get("help"),
            )
        elif kind in (
            ElementKind.INT_RANGE,
            ElementKind.FLOAT_RANGE,
            ElementKind.INT_TEXT,
            ElementKind.BOUNDED_INT_TEXT,
            ElementKind.FLOAT_TEXT,
            ElementKind.BOUNDED_FLOAT_TEXT,
        ):
            form.add_numeric(
                kind,
                need("name"),
                stanza.get("label", stanza["name"]),
                stanza.get("min"),
                stanza.get("max"),
                stanza.get("step"),
                stanza.get("default"),
                bool(stanza.get("remember", False)),
                stanza.get("help"),
            )
        elif kind in (
            ElementKind.CHECK,
            ElementKind.DROPDOWN,
            ElementKind.SELECT_MULTIPLE,
        ):
            form.add_choice(
                kind,
                need("name"),
                stanza.get("label", stanza["name"]),
                stanza.get("options"),
                stanza.get("default"),
                bool(stanza.get("remember", False)),
                stanza.get("help"),
            )
        elif kind is ElementKind.PATH:
            form.add_path(
                need("name"),
                stanza.get("label", stanza["name"]),
                stanza.get("default"),
                bool(stanza.get("must_exist", False)),
                stanza.get("extensions"),
                bool(stanza.get("remember", False)),
                stanza.get("help"),
            )
        elif kind is ElementKind.FILE_UPLOAD:
            form.add_file_upload(
                need("name"),
                stanza.get("label", stanza["name"]),
                stanza.get("extensions"),
                stanza.get("help"),
            )
        elif kind is ElementKind.OUTPUT:
            form.add_output(need("name"))
        else:  # pragma: no cover - the kind set above is exhaustive
            raise _stanza_error(ordinal, f"unsupported kind {kind.value!r}")
    except FormError as exc:
        raise _stanza_error(ordinal, str(exc)) from exc


def load_form_definition(path: str) -> FormSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise DefinitionError(f"cannot read definition file {path!r}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise DefinitionError(f"{path}: not valid YAML: {exc}") from exc
    if not isinstance(doc, dict) or "title" not in doc:
        raise DefinitionError(f"{path}: expected a map with 'title' and 'elements'")
    try:
        form = new_form(str(doc["title"]))
    except FormError as exc:
        raise DefinitionError(f"{path}: {exc}") from exc
    elements = doc.get("elements") or []
    if not isinstance(elements, list):
        raise DefinitionError(f"{path}: 'elements' must be a list")
    for ordinal, stanza in enumerate(elements, start=1):
        try:
            _apply_stanza(form, ordinal, stanza)
        except DefinitionError as exc:
            raise DefinitionError(f"{path}: {exc}") from exc
    return form


def _print_values(values: dict) -> None:
    sys.stdout.write(json.dumps(values, sort_keys=True, indent=2) + "\n")


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="paramforge",
        description="Render a declarative parameter form in the terminal, "
        "headlessly, or as a local web service.",
    )
    parser.add_argument("definition", help="form definition file (YAML)")
    parser.add_argument("--mode", choices=["tui", "headless", "serve"])
    parser.add_argument("--params-file", dest="params_file")
    parser.add_argument(
        "--print-values",
        action="store_true",
        help="emit the final values as JSON on stdout",
    )
    parser.add_argument("--bind", default=None, help="host:port for serve mode")
    args = parser.parse_args(argv)

    try:
        form = load_form_definition(args.definition)
        mode = environment.resolve_mode(cli_flag=args.mode)
        outcome = environment.run(
            form, mode, params_path=args.params_file, bind_addr=args.bind
        )
        if isinstance(outcome, Served):
            session = outcome.session
            sys.stderr.write(f"serving on http://{session.bind_addr}\n")
            outcome = session.wait()
            session.close()
        if isinstance(outcome, Submitted):
            if args.print_values:
                _print_values(outcome.values)
            return 0
        if isinstance(outcome, Cancelled):
            return 2
        sys.stderr.write("error: session ended without an outcome\n")
        return 1
    except Exception as exc:  # noqa: BLE001 - single reporting point
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
