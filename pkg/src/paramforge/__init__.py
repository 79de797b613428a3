"""paramforge: declare typed parameters once, render them anywhere.

A form is declared through the fluent :class:`FormSpec` API, then rendered
as a terminal form, run headless from a saved YAML params file, or served
over HTTP to a browser client. All backends share one validation engine
and one persistence format, so a session captured in one environment
reproduces exactly in any other.
"""

from .environment import (
    EnvironmentMode,
    HeadlessError,
    ModeError,
    detect_mode,
    run,
    run_headless,
)
from .form import FormSpec, new_form
from .model import (
    Blob,
    ConstraintSet,
    ElementKind,
    ElementSpec,
    FormError,
    ValidationError,
    validate,
)
from .outcome import Cancelled, Served, Submitted
from .persistence import (
    LoadReport,
    PersistenceError,
    autoload_on_init,
    default_params_path,
    load_parameters,
    save_parameters,
)

__version__ = "0.1.0"

__all__ = [
    "Blob",
    "Cancelled",
    "ConstraintSet",
    "ElementKind",
    "ElementSpec",
    "EnvironmentMode",
    "FormError",
    "FormSpec",
    "HeadlessError",
    "LoadReport",
    "ModeError",
    "PersistenceError",
    "Served",
    "Submitted",
    "ValidationError",
    "autoload_on_init",
    "default_params_path",
    "detect_mode",
    "load_parameters",
    "new_form",
    "run",
    "run_headless",
    "save_parameters",
    "validate",
]
