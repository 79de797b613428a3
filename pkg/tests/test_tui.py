import random

import pytest

import paramforge as pf
from paramforge.model import ElementKind
from paramforge.outcome import Cancelled, Submitted
from paramforge.tui import (
    ScriptTerminal,
    TuiError,
    TuiState,
    complete_path,
    focus_order,
    render_frame,
    run_tui,
    strip_html,
)

from conftest import GOLDEN_VALUES, build_demo_form
from formgen import random_assignment, random_form
from tui_driver import script_for


def run_script(form, keys, rows=24, cols=80):
    terminal = ScriptTerminal(keys, rows=rows, cols=cols)
    return run_tui(form, terminal), terminal


class TestRenderFrame:
    def test_label_passthrough(self):
        form = pf.new_form("t").add_label("Input settings")
        grid = render_frame(form, TuiState(), (10, 40))
        assert grid[0].strip() == "Input settings"

    def test_html_tag_stripped(self):
        form = pf.new_form("t").add_html("<b>Warning</b>")
        grid = render_frame(form, TuiState(), (10, 40))
        assert grid[0].strip() == "Warning"
        assert strip_html("&amp;<i>x</i>") == "&x"

    def test_determinism(self):
        form = build_demo_form()
        state = TuiState()
        state.edit_buffers = {}
        a = render_frame(form, state, (12, 60))
        b = render_frame(form, state, (12, 60))
        assert a == b

    def test_grid_dimensions(self):
        form = build_demo_form()
        grid = render_frame(form, TuiState(), (9, 33))
        assert len(grid) == 9 and all(len(row) == 33 for row in grid)

    def test_range_affordance_and_checkbox_marks(self):
        form = build_demo_form()
        state = TuiState()
        state.edit_buffers = {"magnification": "2"}
        text = "\n".join(render_frame(form, state, (20, 60)))
        assert "Magnification: 2 [1–10]" in text
        assert "[x] Macro-pixel correction" in text

    def test_scroll_to_focus(self):
        form = pf.new_form("t")
        for i in range(50):
            form.add_check(f"c{i}", f"box {i}", False)
        state = TuiState(focused=40)
        grid = render_frame(form, state, (10, 40))
        assert any("box 40" in row for row in grid)
        assert any(row.startswith("> ") for row in grid)

    def test_viewport_minimum(self):
        with pytest.raises(TuiError):
            render_frame(pf.new_form("t"), TuiState(), (4, 80))


class TestSessions:
    def test_empty_form_submits_empty_map(self, tmp_path):
        form = pf.new_form("t", str(tmp_path / "p.yml"))
        outcome, _ = run_script(form, ["enter"])
        assert outcome == Submitted({})

    def test_edit_and_submit_writes_file(self, tmp_path):
        form = pf.new_form("t", str(tmp_path / "p.yml"))
        form.add_int_range("magnification", "Magnification", 1, 10, 2, remember=True)
        keys = ["ctrl_u", "7", "enter", "tab", "enter"]
        outcome, _ = run_script(form, keys)
        assert outcome == Submitted({"magnification": 7})
        assert (tmp_path / "p.yml").read_text() == "magnification: 7\n"

    def test_out_of_range_banner_then_cancel(self, tmp_path):
        form = pf.new_form("t", str(tmp_path / "p.yml"))
        form.add_int_range("magnification", "Magnification", 1, 10, 2, remember=True)
        keys = ["ctrl_u", "1", "1", "enter", "ctrl_c"]
        outcome, terminal = run_script(form, keys)
        assert isinstance(outcome, Cancelled)
        assert form.values["magnification"] == 2
        assert not (tmp_path / "p.yml").exists()
        assert any("!!" in row for frame in terminal.frames[-2:] for row in frame)

    def test_double_esc_cancels(self, tmp_path):
        form = pf.new_form("t", str(tmp_path / "p.yml")).add_check("a", "a", True)
        outcome, _ = run_script(form, ["esc", "esc"])
        assert isinstance(outcome, Cancelled)

    def test_cancel_purity_after_commits(self, tmp_path):
        form = pf.new_form("t", str(tmp_path / "p.yml"))
        form.add_int_text("x", "x", 1)
        before = form.get_values()
        keys = ["ctrl_u", "9", "enter", "ctrl_c"]
        outcome, _ = run_script(form, keys)
        assert isinstance(outcome, Cancelled)
        assert form.get_values() == before

    def test_terminal_too_small(self):
        with pytest.raises(TuiError):
            run_tui(pf.new_form("t"), ScriptTerminal([], rows=4, cols=10))

    def test_script_exhaustion_cancels(self, tmp_path):
        form = pf.new_form("t", str(tmp_path / "p.yml")).add_check("a", "a", True)
        outcome, _ = run_script(form, ["tab"])
        assert isinstance(outcome, Cancelled)

    def test_checkbox_dropdown_multiselect(self, tmp_path):
        form = pf.new_form("t", str(tmp_path / "p.yml"))
        form.add_check("flag", "flag", False)
        form.add_dropdown("mode", "mode", ["fast", "accurate"], "fast")
        form.add_select_multiple("ch", "ch", ["R", "G", "B"], ["R"])
        keys = [" ", "tab", "down", "tab", "down", " ", "tab", "enter"]
        outcome, _ = run_script(form, keys)
        assert outcome.values == {"flag": True, "mode": "accurate", "ch": ["R", "G"]}

    def test_action_invoked_with_current_values(self, tmp_path):
        snaps = []
        form = pf.new_form("t", str(tmp_path / "p.yml"))
        form.add_int_text("x", "x", 1)
        form.add_action("go", "Go", lambda values: snaps.append(values["x"]))
        # press Go, change x to 5, press Go again, then submit
        keys = ["tab", "enter", "backtab", "ctrl_u", "5", "enter", "tab",
                "enter", "tab", "enter"]
        outcome, _ = run_script(form, keys)
        assert snaps == [1, 5]
        assert outcome.values == {"x": 5}

    def test_throwing_action_keeps_form_live(self, tmp_path):
        form = pf.new_form("t", str(tmp_path / "p.yml"))
        form.add_action("boom", "Boom", lambda values: 1 / 0)
        keys = ["enter", "tab", "enter"]
        outcome, _ = run_script(form, keys)
        assert isinstance(outcome, Submitted)

    def test_output_buffered_before_render(self, tmp_path):
        form = pf.new_form("t", str(tmp_path / "p.yml"))
        form.add_output("log")
        form.write_output("early line")
        outcome, terminal = run_script(form, ["enter"])
        assert any("early line" in row for row in terminal.frames[0])

    def test_file_upload_reads_bytes_at_submit(self, tmp_path):
        payload = tmp_path / "a.csv"
        payload.write_bytes(b"1,2,3")
        form = pf.new_form("t", str(tmp_path / "p.yml"))
        form.add_file_upload("up", "Upload", extensions=[".csv"])
        keys = ["ctrl_u"] + list(str(payload)) + ["enter", "tab", "enter"]
        outcome, _ = run_script(form, keys)
        assert outcome.values["up"] == pf.Blob("a.csv", b"1,2,3")
        assert "up" not in (tmp_path / "p.yml").read_text()

    def test_unreadable_upload_blocks_submit(self, tmp_path):
        form = pf.new_form("t", str(tmp_path / "p.yml"))
        form.add_file_upload("up", "Upload")
        keys = list(str(tmp_path / "ghost.bin")) + ["enter", "ctrl_c"]
        outcome, terminal = run_script(form, keys)
        assert isinstance(outcome, Cancelled)
        assert any("!!" in row for frame in terminal.frames for row in frame)

    def test_focus_totality(self, tmp_path):
        rng = random.Random(7)
        for _ in range(20):
            form = random_form(rng)
            order = focus_order(form)
            form.params_path_override = str(tmp_path / "p.yml")
            keys = ["tab"] * (len(order) + 1)
            terminal = ScriptTerminal(keys + ["ctrl_c"])
            run_tui(form, terminal)
            # a full Tab cycle returns to the first focusable element
            assert terminal.frames[0] == terminal.frames[len(order) + 1]

    def test_fuzzed_scripts_only_submit_valid_values(self, tmp_path):
        rng = random.Random(99)
        pool = ["tab", "backtab", "enter", "up", "down", " ", "ctrl_u",
                "backspace", "a", "1", "-", "9", "."]
        for case in range(30):
            form = random_form(rng)
            form.params_path_override = str(tmp_path / f"f{case}.yml")
            keys = [rng.choice(pool) for _ in range(rng.randint(0, 60))] + ["ctrl_c"]
            outcome = run_tui(form, ScriptTerminal(keys))
            if isinstance(outcome, Submitted):
                for el in form.elements:
                    if el.has_value:
                        value = outcome.values[el.name]
                        assert pf.validate(el, value) == value


class TestScriptDriver:
    def test_demo_form_reaches_targets(self, tmp_path):
        form = build_demo_form(str(tmp_path / "p.yml"))
        targets = dict(GOLDEN_VALUES, magnification=7, ring_radius=2.5,
                       mpcorrection=False)
        outcome, _ = run_script(form, script_for(form, targets))
        assert outcome == Submitted(targets)

    def test_random_forms_reach_targets(self, tmp_path):
        rng = random.Random(4242)
        for case in range(25):
            form = random_form(rng, newline_ok=False)
            targets = random_assignment(rng, form)
            form.params_path_override = str(tmp_path / f"s{case}.yml")
            outcome = run_tui(form, ScriptTerminal(script_for(form, targets)))
            assert isinstance(outcome, Submitted), (case, outcome)
            canon = {n: form.set_value(n, v) for n, v in targets.items()}
            assert outcome.values == canon


class TestCompletePath:
    @pytest.fixture
    def tree(self, tmp_path, monkeypatch):
        (tmp_path / "data").mkdir()
        (tmp_path / "docs").mkdir()
        (tmp_path / "d.txt").write_text("x")
        monkeypatch.chdir(tmp_path)
        return tmp_path

    def test_prefix_filter_and_dir_suffix(self, tree):
        assert complete_path("./d") == ["./d.txt", "./data/", "./docs/"]
        assert complete_path("./da") == ["./data/"]

    def test_nonexistent_directory(self, tree):
        assert complete_path("./nope/x") == []

    def test_extension_filter_keeps_directories(self, tmp_path, monkeypatch):
        (tmp_path / "a.yml").write_text("")
        (tmp_path / "b.txt").write_text("")
        (tmp_path / "sub").mkdir()
        monkeypatch.chdir(tmp_path)
        assert complete_path("", [".yml"]) == ["a.yml", "sub/"]

    def test_oracle_matches_direct_listing(self, tmp_path, monkeypatch):
        import os

        rng = random.Random(5)
        names = [f"f{i}.{rng.choice(['yml', 'txt'])}" for i in range(10)]
        for n in names:
            (tmp_path / n).write_text("")
        monkeypatch.chdir(tmp_path)
        expected = sorted(n for n in os.listdir(".") if n.startswith("f"))
        assert complete_path("f") == expected
