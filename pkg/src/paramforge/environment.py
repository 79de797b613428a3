"""Execution-mode resolution and backend dispatch.

Mode precedence: explicit API argument, then CLI flag, then the
PARAMFORGE_MODE environment variable, then TTY detection. Interactive
mode requires both stdin and stdout to be TTYs so a redirected pipeline
never hangs on a hidden prompt; serve mode is never auto-detected.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from typing import Optional, Union

from . import persistence
from .form import FormSpec
from .outcome import Cancelled, Served, Submitted

ENV_VAR = "PARAMFORGE_MODE"

TERMINAL_INTERACTIVE = "terminal_interactive"
HEADLESS = "headless"
SERVE = "serve"

_TOKENS = {
    "tui": TERMINAL_INTERACTIVE,
    "terminal_interactive": TERMINAL_INTERACTIVE,
    "headless": HEADLESS,
    "serve": SERVE,
}


class ModeError(ValueError):
    pass


class HeadlessError(Exception):
    """A value-bearing element has neither a default nor a loaded value."""

    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__(
            "missing required values: " + ", ".join(self.missing)
        )


@dataclass(frozen=True)
class EnvironmentMode:
    mode: str
    origin: str  # explicit_api | cli_flag | env_var | detected


def _parse_token(token: str, source: str) -> str:
    mode = _TOKENS.get(token.strip().lower())
    if mode is None:
        raise ModeError(f"unknown mode {token!r} from {source}")
    return mode


def detect_mode(
    explicit: Optional[str] = None,
    cli_flag: Optional[str] = None,
    env_var_value: Optional[str] = None,
    stdin_is_tty: bool = False,
    stdout_is_tty: bool = False,
) -> EnvironmentMode:
    env_mode = None
    if env_var_value is not None:
        env_mode = _parse_token(env_var_value, ENV_VAR)
    if explicit is not None:
        return EnvironmentMode(_parse_token(explicit, "explicit argument"), "explicit_api")
    if cli_flag is not None:
        return EnvironmentMode(_parse_token(cli_flag, "--mode"), "cli_flag")
    if env_mode is not None:
        return EnvironmentMode(env_mode, "env_var")
    detected = TERMINAL_INTERACTIVE if (stdin_is_tty and stdout_is_tty) else HEADLESS
    return EnvironmentMode(detected, "detected")


def resolve_mode(
    explicit: Optional[str] = None, cli_flag: Optional[str] = None
) -> EnvironmentMode:
    """detect_mode fed from the real process environment."""
    return detect_mode(
        explicit=explicit,
        cli_flag=cli_flag,
        env_var_value=os.environ.get(ENV_VAR),
        stdin_is_tty=sys.stdin.isatty(),
        stdout_is_tty=sys.stdout.isatty(),
    )


def run_headless(form: FormSpec, params_path: Optional[str] = None):
    """Fill values from a params file plus defaults; no interaction.

    Fails fast with the complete list of names that end up unset, so a
    batch job reports every gap at once.
    """
    if params_path is not None:
        persistence.load_parameters(form, params_path)
    else:
        persistence.autoload_on_init(form)
    missing = [
        el.name
        for el in form.elements
        if el.has_value and form.values.get(el.name) is None
    ]
    if missing:
        raise HeadlessError(missing)
    return form.get_values()


def run(
    form: FormSpec,
    mode: Union[EnvironmentMode, str, None] = None,
    params_path: Optional[str] = None,
    bind_addr: Optional[str] = None,
) -> Union[Submitted, Cancelled, Served]:
    if mode is None:
        mode = resolve_mode()
    mode_name = mode.mode if isinstance(mode, EnvironmentMode) else mode
    if params_path is not None:
        form.params_path_override = params_path
    if mode_name == HEADLESS:
        return Submitted(run_headless(form, params_path))
    if mode_name == TERMINAL_INTERACTIVE:
        from . import tui

        persistence.autoload_on_init(form)
        return tui.run_tui(form, tui.RawTerminal())
    if mode_name == SERVE:
        from . import webbridge

        persistence.autoload_on_init(form)
        return Served(webbridge.serve(form, bind_addr or "127.0.0.1:0"))
    raise ModeError(f"unknown mode {mode_name!r}")
