"""Parsers, report serialisation and the command line interface."""

import json
import subprocess
import sys
from fractions import Fraction
from importlib.resources import files

import pydot
import pytest
from hypothesis import given
from hypothesis import strategies as st

from morse_orbits import cli, io
from morse_orbits.corpus import csaszar_torus, cylinder, field_from, tetrahedron
from morse_orbits.errors import (
    CircleSpreadViolation,
    CountMismatch,
    NonManifoldEdge,
    NonNumeric,
    ParseError,
)
from morse_orbits.pipeline import analyze
from morse_orbits.plmorse import CIRCLE, REAL, ScalarField, validate_morse

DATA = files("morse_orbits") / "data"
TETRA_OFF = """OFF
4 4 0
0 0 0
1 0 0
0 1 0
0 0 1
3 0 1 2
3 0 3 1
3 0 2 3
3 1 3 2
"""


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr().out


def data(name):
    return str(DATA / name)


class TestParseOff:
    def test_tetrahedron(self):
        S = io.parse_off(TETRA_OFF)
        assert S.vertex_count == 4 and len(S.triangles) == 4

    def test_counts_on_header_line_and_comments(self):
        text = "OFF 4 4 0  # counts inline\n" + TETRA_OFF.split("\n", 2)[2]
        assert io.parse_off(text).vertex_count == 4

    @pytest.mark.parametrize(
        "text, line",
        [
            ("", 1),
            ("PLY\n", 1),
            ("OFF\n4 x 0\n", 2),
            ("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 0\n", 6),
            ("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n", 6),
            ("OFF\n3 1 0\n0 0 0\n1 0 zz\n0 1 0\n3 0 1 2\n", 4),
            ("OFF\n3 2 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n", 7),
        ],
        ids=["empty", "header", "counts", "quad", "index", "coordinate", "truncated"],
    )
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ParseError) as info:
            io.parse_off(text)
        assert info.value.line == line

    def test_validation_errors_pass_through(self):
        text = "OFF\n5 3 0\n" + "0 0 0\n" * 5 + "3 0 1 2\n3 0 1 3\n3 0 1 4\n"
        with pytest.raises(NonManifoldEdge):
            io.parse_off(text)

    def test_round_trip(self):
        S = csaszar_torus()
        for text in (io.format_off(S), io.format_mesh_json(S)):
            T = io.parse_mesh(text)
            assert T.triangles == S.triangles

    def test_json_mesh_errors(self):
        with pytest.raises(ParseError):
            io.parse_mesh_json("{not json")
        with pytest.raises(ParseError):
            io.parse_mesh_json('{"triangles": [[0, 1]]}')


class TestParseField:
    def test_real(self):
        f = io.parse_field("0\n1\n2\n3\n", vertex_count=4)
        assert f == ScalarField.real([0, 1, 2, 3])

    def test_single_line(self):
        assert io.parse_field("0 1 2 3").values == tuple(map(Fraction, range(4)))

    def test_circle_reduced(self):
        f = io.parse_field("1/3\n4/3\n-1/3\n", CIRCLE)
        assert f.values == (Fraction(1, 3), Fraction(1, 3), Fraction(2, 3))
        assert all(0 <= v < 1 for v in f.values)

    def test_header_selects_codomain(self):
        assert io.parse_field("# codomain: circle\n0.25\n").codomain == CIRCLE
        assert io.parse_field("# codomain: circle\n0.25\n", REAL).codomain == REAL

    def test_decimals_are_exact(self):
        assert io.parse_field("0.1 1e-2 .5").values == (Fraction(1, 10), Fraction(1, 100), Fraction(1, 2))

    def test_count_mismatch(self):
        with pytest.raises(CountMismatch):
            io.parse_field("0 1 2", vertex_count=4)

    @pytest.mark.parametrize("token", ["abc", "1/0", "nan", "inf", "1/2/3", "0x10"])
    def test_non_numeric(self, token):
        with pytest.raises(NonNumeric):
            io.parse_field(f"0\n{token}\n")

    def test_circle_spread_detected_downstream(self):
        f = io.parse_field("0 1/3 2/3 1/10", CIRCLE)
        with pytest.raises(CircleSpreadViolation):
            validate_morse(tetrahedron(), f)

    @given(st.lists(st.fractions(), min_size=1, max_size=20))
    def test_format_round_trip(self, values):
        f = ScalarField.real(values)
        assert io.parse_field(io.format_field(f)) == f


class TestDot:
    @pytest.mark.parametrize("name", ["torus_height", "sphere_height", "torus_fibration"])
    def test_pydot_parses(self, canonical, name):
        ex = canonical[name]
        A = analyze(ex.surface, ex.field, homology=False)
        text = io.reeb_to_dot(A.graph, name)
        graphs = pydot.graph_from_dot_data(text)
        assert graphs is not None and len(graphs) == 1
        g = graphs[0]
        assert len(g.get_nodes()) == len(A.graph.nodes)
        assert len(g.get_edges()) == len(A.graph.edges)
        bold = [e for e in g.get_edges() if e.get("style") == "bold"]
        assert len(bold) == A.graph.l

    def test_shapes(self, canonical):
        A = analyze(canonical["torus_height"].surface, canonical["torus_height"].field, homology=False)
        g = pydot.graph_from_dot_data(io.reeb_to_dot(A.graph))[0]
        shapes = sorted(n.get("shape") for n in g.get_nodes())
        assert shapes == ["circle", "circle", "diamond", "diamond"]


class TestReport:
    @pytest.mark.parametrize("name", ["sphere_height", "torus_height", "klein_fibration"])
    def test_json_round_trip(self, canonical, name):
        ex = canonical[name]
        doc = io.report_document(analyze(ex.surface, ex.field))
        assert io.loads_report(io.dumps_report(doc)) == doc

    def test_round_trip_special(self, special):
        for ex in special.values():
            doc = io.report_document(analyze(ex.surface, ex.field))
            assert io.loads_report(io.dumps_report(doc)) == doc

    def test_stable_keys(self, canonical):
        ex = canonical["torus_height"]
        doc = json.loads(io.dumps_report(io.report_document(analyze(ex.surface, ex.field))))
        assert {"surface", "morse", "reeb", "minimal", "k", "homotopy", "pi1", "codim", "type"} <= set(doc)
        assert {"orientable", "genus", "b", "chi"} <= set(doc["surface"])
        assert {"c0", "c1", "c2", "generic", "simple"} <= set(doc["morse"])
        assert {"nodes", "edges", "l"} <= set(doc["reeb"])
        assert set(doc["minimal"]) == {"rC", "rE", "contractions"}
        assert {"stabilizer_id", "orbit", "orbit_f", "pi0_leaf", "higher_pi_rule"} <= set(doc["homotopy"])
        assert {"diff_id", "free_rank", "G"} <= set(doc["pi1"])
        assert {"level", "order_bound"} <= set(doc["pi1"]["G"])
        assert set(doc["codim"]) == {"orbit", "orbit_cr"}

    def test_text_mentions_every_leaf(self, canonical):
        ex = canonical["sphere_height"]
        text = io.render_text(io.report_document(analyze(ex.surface, ex.field)))
        assert "homotopy.orbit: S2" in text
        assert "type: A" in text


class TestCli:
    def test_tetrahedron_type_a(self, tmp_path, capsys):
        (tmp_path / "t.off").write_text(TETRA_OFF)
        (tmp_path / "t.field").write_text("0\n1\n2\n3\n")
        code, out = run(["analyze", "--mesh", str(tmp_path / "t.off"), "--field", str(tmp_path / "t.field")], capsys)
        doc = json.loads(out)
        assert code == 0
        assert doc["type"] == "A" and doc["homotopy"]["orbit"] == "S2"

    def test_csaszar_torus(self, capsys):
        code, out = run(["analyze", "--mesh", data("torus_height.off"), "--field", data("torus_height.field")], capsys)
        doc = json.loads(out)
        assert code == 0
        assert doc["homotopy"]["orbit"] == "(S1)^3" and doc["k"] == 1

    def test_annulus(self, tmp_path, capsys):
        S = cylinder(5, 3)
        (tmp_path / "a.off").write_text(io.format_off(S))
        (tmp_path / "a.field").write_text(io.format_field(field_from(S, lambda v: v // 5)))
        code, out = run(["analyze", "--mesh", str(tmp_path / "a.off"), "--field", str(tmp_path / "a.field")], capsys)
        doc = json.loads(out)
        assert doc["type"] == "C" and doc["homotopy"]["orbit"] == "point"

    @pytest.mark.parametrize("fmt", ["text", "dot"])
    def test_other_formats(self, fmt, capsys):
        code, out = run(
            ["analyze", "--mesh", data("torus_fibration.off"), "--field", data("torus_fibration.field"), "--format", fmt],
            capsys,
        )
        assert code == 0
        if fmt == "dot":
            assert pydot.graph_from_dot_data(out) is not None
        else:
            assert "homotopy.orbit: S1" in out

    def test_reeb_subcommand(self, capsys):
        code, out = run(["reeb", "--mesh", data("klein_fibration.off"), "--field", data("klein_fibration.field")], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["codomain"] == "circle" and doc["l"] == 1

    def test_no_homology(self, capsys):
        code, out = run(
            ["analyze", "--mesh", data("torus_height.off"), "--field", data("torus_height.field"), "--no-homology"],
            capsys,
        )
        assert json.loads(out)["twists"] is None

    @pytest.mark.parametrize(
        "mesh, field, exc, code",
        [
            ("quad.off", "t.field", "ParseError", 3),
            ("t.off", "short.field", "CountMismatch", 5),
            ("t.off", "bad.field", "NonNumeric", 3),
            ("t.off", "flat.field", "DegenerateLevel", 5),
            ("nm.off", "t.field", "NonManifoldEdge", 4),
            ("missing.off", "t.field", "FileNotFoundError", 8),
        ],
    )
    def test_errors(self, tmp_path, capsys, mesh, field, exc, code):
        (tmp_path / "t.off").write_text(TETRA_OFF)
        (tmp_path / "quad.off").write_text("OFF\n4 1 0\n" + "0 0 0\n" * 4 + "4 0 1 2 3\n")
        (tmp_path / "nm.off").write_text("OFF\n5 3 0\n" + "0 0 0\n" * 5 + "3 0 1 2\n3 0 1 3\n3 0 1 4\n")
        (tmp_path / "t.field").write_text("0 1 2 3")
        (tmp_path / "short.field").write_text("0 1 2")
        (tmp_path / "bad.field").write_text("0 1 two 3")
        (tmp_path / "flat.field").write_text("0 0 0 1")
        got, out = run(["analyze", "--mesh", str(tmp_path / mesh), "--field", str(tmp_path / field)], capsys)
        doc = json.loads(out)
        assert got == code
        assert doc["error"]["type"] == exc and doc["error"]["message"]

    def test_check_bundled_data(self, capsys):
        code, out = run(["check", str(DATA)], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["runs"] == 6 and doc["failures"] == []

    def test_check_random_is_seeded(self, capsys, monkeypatch):
        monkeypatch.setenv(cli.SEED_VARIABLE, "11")
        _, first = run(["check", str(DATA), "--random", "2", "--no-homology"], capsys)
        _, second = run(["check", str(DATA), "--random", "2", "--no-homology", "--jobs", "2"], capsys)
        assert json.loads(first) == json.loads(second)
        assert json.loads(first)["seed"] == 11

    def test_check_not_a_directory(self, capsys):
        code, out = run(["check", data("torus_height.off")], capsys)
        assert code == 8 and json.loads(out)["error"]["type"] == "NotADirectoryError"

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "morse_orbits.cli", "analyze", "--mesh", data("sphere_height.off"),
             "--field", data("sphere_height.field"), "--format", "text"],
            capture_output=True, text=True, check=False,
        )
        assert proc.returncode == 0
        assert "codim.orbit: 2" in proc.stdout
