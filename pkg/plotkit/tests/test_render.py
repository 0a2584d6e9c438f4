"""Rendering golden CSVs and rejecting schema-mismatched input."""

import os

import pytest

from plotkit import FigureSpec, SchemaError, read_table, render
from plotkit.cli import run

DATA = os.path.join(os.path.dirname(__file__), "data")

GOLDEN = {
    "trace": os.path.join(DATA, "trace.csv"),
    "loglog_pure": os.path.join(DATA, "pure.csv"),
    "loglog_noisy": os.path.join(DATA, "noisy_dissipation.csv"),
}


class TestReadTable:
    def test_meta_and_types(self):
        table = read_table(GOLDEN["loglog_noisy"])
        assert table.meta["tool"].startswith("gradmet")
        assert "crossover_w_better_max_n_rate_0.1" in table.meta
        assert isinstance(table.rows[0][0], int)
        assert isinstance(table.rows[0][5], float)

    def test_empty_cell_is_none(self):
        table = read_table(GOLDEN["loglog_noisy"])
        w_rows = [row for row in table.rows if row[1] == "w_state"]
        assert all(row[6] is None for row in w_rows)

    def test_missing_header(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(SchemaError):
            read_table(str(path))


class TestRender:
    @pytest.mark.parametrize("kind", sorted(GOLDEN))
    def test_golden_inputs_render(self, kind, tmp_path):
        out = tmp_path / f"{kind}.png"
        result = render(FigureSpec(GOLDEN[kind], kind, str(out)))
        assert result == str(out)
        assert out.stat().st_size > 1000

    def test_vector_output(self, tmp_path):
        out = tmp_path / "pure.svg"
        render(FigureSpec(GOLDEN["loglog_pure"], "loglog_pure", str(out)))
        assert out.read_text().lstrip().startswith("<?xml")

    def test_dephasing_table_renders(self, tmp_path):
        out = tmp_path / "deph.png"
        render(
            FigureSpec(
                os.path.join(DATA, "noisy_dephasing.csv"), "loglog_noisy", str(out)
            )
        )
        assert out.exists()

    def test_schema_mismatch_refused(self, tmp_path):
        out = tmp_path / "bad.png"
        with pytest.raises(SchemaError) as err:
            render(FigureSpec(GOLDEN["loglog_pure"], "trace", str(out)))
        assert "theta_t" in str(err.value)
        assert not out.exists()

    def test_empty_table_refused(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("n,theta_t,mean_c1\n")
        out = tmp_path / "empty.png"
        with pytest.raises(SchemaError):
            render(FigureSpec(str(empty), "trace", str(out)))
        assert not out.exists()

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            FigureSpec(GOLDEN["trace"], "histogram", "x.png")


class TestCli:
    def test_render_command(self, tmp_path):
        out = tmp_path / "fig.png"
        code = run(
            ["render", "--kind", "trace", "--in", GOLDEN["trace"], "--out", str(out)]
        )
        assert code == 0
        assert out.exists()

    def test_schema_mismatch_exit(self, tmp_path, capsys):
        out = tmp_path / "fig.png"
        code = run(
            ["render", "--kind", "loglog_noisy", "--in", GOLDEN["trace"], "--out", str(out)]
        )
        assert code == 1
        assert "missing" in capsys.readouterr().err
        assert not out.exists()

    def test_missing_file_exit(self, tmp_path):
        code = run(
            ["render", "--kind", "trace", "--in", "no-such.csv", "--out", str(tmp_path / "f.png")]
        )
        assert code == 1

    def test_usage_error(self):
        assert run(["render", "--kind", "trace"]) == 2
