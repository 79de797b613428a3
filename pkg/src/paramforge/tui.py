"""Full-screen terminal backend.

The event loop is single-threaded and drives an abstract terminal, so
tests can feed scripted key events through :class:`ScriptTerminal` and
snapshot the grids produced by the pure :func:`render_frame`. The real
binding (:class:`RawTerminal`) uses raw mode plus the alternate screen
and restores the terminal on every exit path.

Keys: Tab/Shift+Tab cycle focus, arrows drive dropdowns and multi-select
lists, space toggles, Enter commits (or activates buttons), Ctrl+U clears
the buffer, Ctrl+F completes paths, Ctrl+C or Esc-Esc cancels.
"""

from __future__ import annotations

import copy
import html as html_mod
import os
import re
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from .form import FormSpec
from .model import (
    Blob,
    ElementKind,
    ElementSpec,
    RANGE_KINDS,
    TEXT_KINDS,
    ValidationError,
)
from .outcome import Cancelled, Submitted
from .persistence import save_parameters

MIN_COLS = 20
MIN_ROWS = 5
OUTPUT_PANE_LINES = 5

# Kinds edited through a text buffer.
BUFFER_KINDS = frozenset(
    {
        ElementKind.TEXT,
        ElementKind.TEXT_AREA,
        ElementKind.INT_RANGE,
        ElementKind.FLOAT_RANGE,
        ElementKind.INT_TEXT,
        ElementKind.BOUNDED_INT_TEXT,
        ElementKind.FLOAT_TEXT,
        ElementKind.BOUNDED_FLOAT_TEXT,
        ElementKind.PATH,
        ElementKind.FILE_UPLOAD,
    }
)

_TAG_RE = re.compile(r"<[^>]*>")


class TuiError(Exception):
    pass


@dataclass
class TuiState:
    focused: int = 0  # index into the focus order (len == submit button)
    scroll_offset: int = 0
    edit_buffers: Dict[str, str] = field(default_factory=dict)
    error_banners: Dict[str, ValidationError] = field(default_factory=dict)
    select_cursors: Dict[str, int] = field(default_factory=dict)
    status: str = ""
    dirty: bool = False


def strip_html(content: str) -> str:
    return html_mod.unescape(_TAG_RE.sub("", content))


def _value_text(el: ElementSpec, value) -> str:
    if value is None:
        return ""
    if isinstance(value, Blob):
        return value.filename
    if isinstance(value, float):
        return repr(value)
    return str(value)


def focus_order(form: FormSpec) -> List[int]:
    """Indices of focusable elements, in declaration order."""
    return [
        i
        for i, el in enumerate(form.elements)
        if el.has_value or el.kind is ElementKind.ACTION
    ]


# -- pure rendering ----------------------------------------------------------


def _element_lines(
    form: FormSpec, state: TuiState, index: int, focused: bool
) -> List[str]:
    el = form.elements[index]
    kind = el.kind
    mark = "> " if focused else "  "
    lines: List[str] = []
    if kind is ElementKind.LABEL:
        lines.append("  " + el.label)
    elif kind is ElementKind.HTML:
        lines.append("  " + strip_html(el.label))
    elif kind is ElementKind.CHECK:
        box = "[x]" if form.values.get(el.name) else "[ ]"
        lines.append(f"{mark}{box} {el.label}")
    elif kind is ElementKind.DROPDOWN:
        current = form.values.get(el.name) or ""
        lines.append(f"{mark}{el.label}: < {current} >")
    elif kind is ElementKind.SELECT_MULTIPLE:
        lines.append(f"{mark}{el.label}:")
        selected = set(form.values.get(el.name) or [])
        cursor = state.select_cursors.get(el.name, 0)
        for j, opt in enumerate(el.constraints.options or []):
            pointer = ">" if focused and j == cursor else " "
            box = "[x]" if opt in selected else "[ ]"
            lines.append(f"  {pointer}{box} {opt}")
    elif kind is ElementKind.ACTION:
        lines.append(f"{mark}[ {el.label} ]")
    elif kind is ElementKind.OUTPUT:
        pass  # output panes render below the form
    elif kind is ElementKind.TEXT_AREA:
        buf = state.edit_buffers.get(el.name, "")
        lines.append(f"{mark}{el.label}:")
        for part in buf.split("\n"):
            lines.append("    " + part)
    else:
        buf = state.edit_buffers.get(el.name, "")
        suffix = ""
        if kind in RANGE_KINDS:
            cs = el.constraints
            suffix = f" [{_trim_num(cs.min)}–{_trim_num(cs.max)}]"
        lines.append(f"{mark}{el.label}: {buf}{suffix}")
    err = state.error_banners.get(el.name)
    if err is not None:
        lines.append(f"  !! {err.message}")
    return lines


def _trim_num(x) -> str:
    if isinstance(x, float) and x == int(x):
        return str(x)
    return str(x)


def render_frame(
    form: FormSpec, state: TuiState, viewport: Tuple[int, int]
) -> List[str]:
    """Deterministic cell grid for the current state; pure."""
    rows, cols = viewport
    if rows < MIN_ROWS or cols < MIN_COLS:
        raise TuiError(f"viewport below minimum {MIN_COLS}x{MIN_ROWS}")
    order = focus_order(form)
    focused_element = order[state.focused] if state.focused < len(order) else None

    body: List[str] = []
    focus_span = (0, 0)
    for i in range(len(form.elements)):
        lines = _element_lines(form, state, i, focused=(i == focused_element))
        if i == focused_element:
            focus_span = (len(body), len(body) + len(lines))
        body.extend(lines)
    submit_focused = state.focused == len(order)
    submit_line = ("> " if submit_focused else "  ") + "[ Submit ]"
    if submit_focused:
        focus_span = (len(body), len(body) + 1)
    body.append(submit_line)
    for el in form.elements:
        if el.kind is ElementKind.OUTPUT:
            body.append(f"  -- {el.name} --")
            for line in form.output_buffers[el.name][-OUTPUT_PANE_LINES:]:
                body.append("  " + line)

    visible = rows - 1  # last row is the status line
    offset = max(0, min(state.scroll_offset, max(0, len(body) - visible)))
    lo, hi = focus_span
    if hi > offset + visible:
        offset = hi - visible
    if lo < offset:
        offset = lo
    window = body[offset : offset + visible]
    while len(window) < visible:
        window.append("")
    status = state.status or "Tab next / Enter submit / Ctrl+C cancel"
    window.append(status)
    return [line[:cols].ljust(cols) for line in window]


# -- path completion ---------------------------------------------------------


def complete_path(
    prefix: str, extensions: Optional[List[str]] = None
) -> List[str]:
    """Filesystem completion candidates for ``prefix``, sorted; advisory."""
    sep = prefix.rfind("/")
    directory = prefix[: sep + 1] if sep >= 0 else ""
    base = prefix[sep + 1 :]
    try:
        names = os.listdir(directory or ".")
    except OSError:
        return []
    out = []
    for name in names:
        if not name.startswith(base):
            continue
        full = directory + name
        if os.path.isdir(full):
            out.append(full + "/")
        elif not extensions or os.path.splitext(name)[1] in extensions:
            out.append(full)
    return sorted(out)


# -- terminals ---------------------------------------------------------------


class ScriptTerminal:
    """Scripted pseudo-terminal for tests: fixed size, queued key events."""

    def __init__(self, events: List[str], rows: int = 24, cols: int = 80):
        self.events = list(events)
        self.rows = rows
        self.cols = cols
        self.frames: List[List[str]] = []

    def size(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def start(self) -> None:
        pass

    def stop(self) -> None:
        pass

    def draw(self, grid: List[str]) -> None:
        self.frames.append(grid)

    def read_event(self) -> Optional[str]:
        if self.events:
            return self.events.pop(0)
        return None


class RawTerminal:
    """Real terminal: raw mode, alternate screen, ANSI key decoding."""

    _SEQUENCES = {
        "[A": "up",
        "[B": "down",
        "[C": "right",
        "[D": "left",
        "[Z": "backtab",
    }

    def __init__(self, stream=None):
        self._out = stream or sys.stdout
        self._saved = None

    def size(self) -> Tuple[int, int]:
        ts = os.get_terminal_size()
        return ts.lines, ts.columns

    def start(self) -> None:
        import termios
        import tty

        fd = sys.stdin.fileno()
        self._saved = termios.tcgetattr(fd)
        tty.setraw(fd)
        self._out.write("\x1b[?1049h\x1b[?25l")
        self._out.flush()

    def stop(self) -> None:
        import termios

        if self._saved is not None:
            termios.tcsetattr(sys.stdin.fileno(), termios.TCSADRAIN, self._saved)
            self._saved = None
        self._out.write("\x1b[?25h\x1b[?1049l")
        self._out.flush()

    def draw(self, grid: List[str]) -> None:
        parts = ["\x1b[H"]
        for line in grid:
            parts.append(line + "\x1b[K\r\n")
        self._out.write("".join(parts))
        self._out.flush()

    def read_event(self) -> Optional[str]:
        ch = sys.stdin.read(1)
        if ch == "":
            return None
        if ch == "\x03":
            return "ctrl_c"
        if ch == "\t":
            return "tab"
        if ch in ("\r", "\n"):
            return "enter"
        if ch == "\x7f":
            return "backspace"
        if ch == "\x15":
            return "ctrl_u"
        if ch == "\x06":
            return "ctrl_f"
        if ch == "\x1b":
            seq = sys.stdin.read(1)
            if seq != "[":
                return "esc"
            seq += sys.stdin.read(1)
            return self._SEQUENCES.get(seq, "esc")
        return ch


# -- event loop --------------------------------------------------------------


def _init_buffers(form: FormSpec, state: TuiState) -> None:
    for el in form.elements:
        if el.kind in BUFFER_KINDS:
            state.edit_buffers[el.name] = _value_text(el, form.values.get(el.name))
        if el.kind is ElementKind.SELECT_MULTIPLE:
            state.select_cursors[el.name] = 0


def _commit_buffer(form: FormSpec, el: ElementSpec, buf: str):
    """Apply an edit buffer to the form; None on success, error otherwise."""
    if el.kind is ElementKind.FILE_UPLOAD:
        current = form.values.get(el.name)
        if isinstance(current, Blob) and buf == current.filename:
            return None  # already committed; the buffer shows the filename
        if buf == "":
            form.values[el.name] = None
            return None
        try:
            with open(buf, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            return ValidationError(el.name, "parse_failure", f"cannot read file: {exc}")
        result = form.set_value(el.name, Blob(os.path.basename(buf), data))
        return result if isinstance(result, ValidationError) else None
    if buf == "" and el.kind not in TEXT_KINDS:
        form.values[el.name] = copy.deepcopy(el.default)
        return None
    result = form.set_value(el.name, buf)
    return result if isinstance(result, ValidationError) else None


def _live_check(form: FormSpec, state: TuiState, el: ElementSpec) -> None:
    from .model import validate

    buf = state.edit_buffers[el.name]
    if buf == "" and el.kind not in TEXT_KINDS:
        state.error_banners.pop(el.name, None)
        return
    raw: object = buf
    if el.kind is ElementKind.FILE_UPLOAD:
        state.error_banners.pop(el.name, None)
        return  # checked at commit; no disk probing per keystroke
    result = validate(el, raw)
    if isinstance(result, ValidationError):
        state.error_banners[el.name] = result
    else:
        state.error_banners.pop(el.name, None)


def run_tui(
    form: FormSpec, terminal, auto_save: bool = True
) -> Union[Submitted, Cancelled]:
    rows, cols = terminal.size()
    if rows < MIN_ROWS or cols < MIN_COLS:
        raise TuiError(
            f"terminal {cols}x{rows} is below the {MIN_COLS}x{MIN_ROWS} minimum"
        )
    saved_values = copy.deepcopy(form.values)
    state = TuiState()
    _init_buffers(form, state)
    order = focus_order(form)
    state.focused = len(order) if not order else 0
    esc_armed = False

    def cancel(reason: str = "") -> Cancelled:
        form.values = saved_values
        return Cancelled(reason)

    terminal.start()
    try:
        while True:
            terminal.draw(render_frame(form, state, (rows, cols)))
            try:
                ev = terminal.read_event()
            except KeyboardInterrupt:
                return cancel("interrupted")
            except OSError as exc:
                return cancel(f"terminal failure: {exc}")
            if ev is None:
                return cancel("input exhausted")
            if ev == "ctrl_c":
                return cancel("interrupted")
            if ev == "esc":
                if esc_armed:
                    return cancel("escape")
                esc_armed = True
                continue
            esc_armed = False
            state.status = ""

            el = form.elements[order[state.focused]] if state.focused < len(order) else None

            if ev in ("tab", "backtab"):
                if el is not None and el.kind in BUFFER_KINDS:
                    err = _commit_buffer(form, el, state.edit_buffers[el.name])
                    if err is None:
                        state.error_banners.pop(el.name, None)
                        state.edit_buffers[el.name] = _value_text(
                            el, form.values.get(el.name)
                        )
                step = 1 if ev == "tab" else -1
                state.focused = (state.focused + step) % (len(order) + 1)
                continue

            if el is None:  # submit button focused
                if ev == "enter":
                    outcome = _try_submit(form, state, order, auto_save)
                    if outcome is not None:
                        return outcome
                continue

            kind = el.kind
            if kind is ElementKind.CHECK:
                if ev in (" ", "enter"):
                    form.values[el.name] = not bool(form.values.get(el.name))
            elif kind is ElementKind.DROPDOWN:
                options = el.constraints.options or []
                current = form.values.get(el.name)
                idx = options.index(current) if current in options else -1
                if ev in ("down", "right"):
                    form.values[el.name] = options[(idx + 1) % len(options)]
                elif ev in ("up", "left"):
                    form.values[el.name] = options[(idx - 1) % len(options)]
            elif kind is ElementKind.SELECT_MULTIPLE:
                options = el.constraints.options or []
                cursor = state.select_cursors[el.name]
                if ev == "down":
                    state.select_cursors[el.name] = min(cursor + 1, len(options) - 1)
                elif ev == "up":
                    state.select_cursors[el.name] = max(cursor - 1, 0)
                elif ev == " ":
                    selected = set(form.values.get(el.name) or [])
                    opt = options[cursor]
                    selected.symmetric_difference_update({opt})
                    form.values[el.name] = [o for o in options if o in selected]
            elif kind is ElementKind.ACTION:
                if ev == "enter":
                    ok, lines = form.invoke_action(el.name)
                    if not form.output_buffers and lines:
                        state.status = lines[-1]
                    if not ok and lines:
                        state.status = lines[0]
            elif kind in BUFFER_KINDS:
                buf = state.edit_buffers[el.name]
                if ev == "enter":
                    if kind is ElementKind.TEXT_AREA:
                        state.edit_buffers[el.name] = buf + "\n"
                    else:
                        err = _commit_buffer(form, el, buf)
                        if err is not None:
                            state.error_banners[el.name] = err
                        else:
                            state.error_banners.pop(el.name, None)
                            state.edit_buffers[el.name] = _value_text(
                                el, form.values.get(el.name)
                            )
                elif ev == "backspace":
                    state.edit_buffers[el.name] = buf[:-1]
                    _live_check(form, state, el)
                elif ev == "ctrl_u":
                    state.edit_buffers[el.name] = ""
                    _live_check(form, state, el)
                elif ev == "ctrl_f" and kind in (
                    ElementKind.PATH,
                    ElementKind.FILE_UPLOAD,
                ):
                    matches = complete_path(buf, el.constraints.extensions)
                    if len(matches) == 1:
                        state.edit_buffers[el.name] = matches[0]
                    elif matches:
                        state.status = "  ".join(matches[:6])
                elif len(ev) == 1 and (ev.isprintable() or ev == " "):
                    state.edit_buffers[el.name] = buf + ev
                    _live_check(form, state, el)
    finally:
        terminal.stop()


def _try_submit(
    form: FormSpec, state: TuiState, order: List[int], auto_save: bool
) -> Optional[Submitted]:
    failures = []
    for i in order:
        el = form.elements[i]
        if el.kind in BUFFER_KINDS:
            err = _commit_buffer(form, el, state.edit_buffers[el.name])
            if err is not None:
                state.error_banners[el.name] = err
                failures.append(i)
    for i in order:
        el = form.elements[i]
        if el.has_value and form.values.get(el.name) is None:
            state.error_banners[el.name] = ValidationError(
                el.name, "parse_failure", "a value is required"
            )
            failures.append(i)
    if failures:
        state.focused = order.index(failures[0])
        state.status = "fix the highlighted fields before submitting"
        return None
    if auto_save:
        save_parameters(form)
    return Submitted(form.get_values())
