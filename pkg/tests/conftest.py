import pytest

import paramforge as pf

GOLDEN = (
    "esrrf_order: 1\n"
    "frames_per_timepoint: 250\n"
    "magnification: 2\n"
    "mpcorrection: true\n"
    "ring_radius: 1.5\n"
    "save: true\n"
    "sensitivity: 1\n"
)

GOLDEN_VALUES = {
    "esrrf_order": 1,
    "frames_per_timepoint": 250,
    "magnification": 2,
    "mpcorrection": True,
    "ring_radius": 1.5,
    "save": True,
    "sensitivity": 1,
}


def build_demo_form(params_path=None) -> pf.FormSpec:
    """The seven-parameter analysis form used throughout the suite."""
    form = pf.new_form("ESRRF Analysis", params_path)
    form.add_int_range("esrrf_order", "eSRRF order", 1, 4, 1, remember=True)
    form.add_int_range(
        "frames_per_timepoint", "Frames per timepoint", 1, 1000, 250, remember=True
    )
    form.add_int_range("magnification", "Magnification", 1, 10, 2, remember=True)
    form.add_check("mpcorrection", "Macro-pixel correction", True, remember=True)
    form.add_float_range("ring_radius", "Ring radius", 0.1, 3.0, 1.5, remember=True)
    form.add_check("save", "Save output", True, remember=True)
    form.add_int_range("sensitivity", "Sensitivity", 1, 10, 1, remember=True)
    return form


@pytest.fixture
def demo_form(tmp_path):
    return build_demo_form(str(tmp_path / "demo_parameters.yml"))


@pytest.fixture
def golden_file(tmp_path):
    path = tmp_path / "ESRRF_Analysis_parameters.yml"
    path.write_text(GOLDEN, encoding="utf-8")
    return str(path)
