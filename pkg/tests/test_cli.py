import json
import math

import pytest

from parcut.cli import emit_svg, load_polygon, run, solution_document, _to_json
from parcut.geometry import canonicalize
from parcut.solver import solve


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


SQUARE_DOC = {"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]], "n": 2}


class TestSolveCommand:
    def test_square(self, tmp_path, capsys):
        path = write(tmp_path, "sq.json", SQUARE_DOC)
        assert run(["solve", path]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["rho"] == pytest.approx(0.25, rel=1e-12)
        assert len(out["cuts"]) == 1
        assert out["stats"]["m"] == 4

    def test_halfplane_input_matches_vertices(self, tmp_path, capsys):
        p1 = write(tmp_path, "v.json", SQUARE_DOC)
        hp = {
            "halfplanes": [
                {"normal": [1, 0], "offset": 1},
                {"normal": [0, 1], "offset": 1},
                {"normal": [-1, 0], "offset": 0},
                {"normal": [0, -1], "offset": 0},
            ],
            "n": 2,
        }
        p2 = write(tmp_path, "h.json", hp)
        assert run(["solve", p1]) == 0
        rho1 = json.loads(capsys.readouterr().out)["rho"]
        assert run(["solve", p2]) == 0
        rho2 = json.loads(capsys.readouterr().out)["rho"]
        assert rho1 == pytest.approx(rho2, rel=1e-10)

    def test_malformed_input(self, tmp_path, capsys):
        path = write(tmp_path, "bad.json", {"vertices": [[0, 0]], "n": 2})
        assert run(["solve", path]) == 2
        path2 = write(tmp_path, "bad2.json", {"n": 2})
        assert run(["solve", path2]) == 2
        path3 = write(
            tmp_path, "bad3.json", {"vertices": SQUARE_DOC["vertices"], "n": 0}
        )
        assert run(["solve", path3]) == 2
        capsys.readouterr()

    def test_both_keys_rejected(self, tmp_path, capsys):
        doc = dict(SQUARE_DOC)
        doc["halfplanes"] = [{"normal": [1, 0], "offset": 1}]
        path = write(tmp_path, "both.json", doc)
        assert run(["solve", path]) == 2
        capsys.readouterr()

    def test_seventeen_digit_floats(self):
        s = _to_json({"x": 1.0 / 3.0})
        assert "0.33333333333333331" in s


class TestOracleCommand:
    def test_square(self, tmp_path, capsys):
        path = write(tmp_path, "sq.json", SQUARE_DOC)
        assert run(["oracle", path]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["rho"] == pytest.approx(0.25, abs=1e-9)


class TestVerifyCommand:
    def test_round_trip(self, tmp_path, capsys):
        path = write(tmp_path, "sq.json", SQUARE_DOC)
        assert run(["solve", path]) == 0
        out = capsys.readouterr().out
        outp = tmp_path / "out.json"
        outp.write_text(out)
        assert run(["verify", path, str(outp)]) == 0
        capsys.readouterr()

    def test_tampered_rho(self, tmp_path, capsys):
        path = write(tmp_path, "sq.json", SQUARE_DOC)
        assert run(["solve", path]) == 0
        doc = json.loads(capsys.readouterr().out)
        doc["rho"] = 0.3
        outp = tmp_path / "tampered.json"
        outp.write_text(json.dumps(doc))
        assert run(["verify", path, str(outp)]) == 3
        capsys.readouterr()


class TestBenchCommand:
    def test_csv_shape(self, capsys):
        assert run(["bench", "--m-list", "16,32", "--repeats", "2"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "m,build_ms,solve_ms,lp_queries,vertex_inspections"
        assert len(lines) == 5
        assert lines[1].startswith("16,")
        assert lines[3].startswith("32,")


class TestSvg:
    def test_deterministic_bytes(self, tmp_path):
        P = canonicalize(SQUARE_DOC["vertices"])
        sol = solve(P, 2)
        p1 = tmp_path / "a.svg"
        p2 = tmp_path / "b.svg"
        emit_svg(P, sol, str(p1))
        emit_svg(P, sol, str(p2))
        assert p1.read_bytes() == p2.read_bytes()
        text = p1.read_text()
        assert text.startswith("<svg")
        assert text.count("<line") == 1  # one cut
        assert text.count("<circle") == 2

    def test_n1_no_cut_elements(self, tmp_path):
        P = canonicalize(SQUARE_DOC["vertices"])
        sol = solve(P, 1)
        p = tmp_path / "c.svg"
        emit_svg(P, sol, str(p))
        assert "<line" not in p.read_text()

    def test_triangle_two_cuts(self, tmp_path):
        P = canonicalize([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)])
        sol = solve(P, 3)
        p = tmp_path / "t.svg"
        emit_svg(P, sol, str(p))
        assert p.read_text().count("<line") == 2

    def test_solve_with_svg_flag(self, tmp_path, capsys):
        path = write(tmp_path, "sq.json", SQUARE_DOC)
        svg = tmp_path / "out.svg"
        assert run(["solve", path, "--svg", str(svg)]) == 0
        assert svg.exists()
        capsys.readouterr()


def test_load_polygon_validation():
    with pytest.raises(ValueError):
        load_polygon({"vertices": [[0, 0], [1, 0], [1, 1]], "n": "two"})
    with pytest.raises(ValueError):
        load_polygon([1, 2, 3])


def test_solution_document_schema():
    P = canonicalize(SQUARE_DOC["vertices"])
    doc = solution_document(solve(P, 3))
    assert set(doc) == {
        "rho",
        "direction",
        "winner_facet",
        "n",
        "cuts",
        "verification",
        "stats",
    }
    assert set(doc["verification"]) == {
        "width_check",
        "piece_inradii",
        "max_piece_inradius",
    }
