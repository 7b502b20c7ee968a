import json
import math

import pytest

from hcchroma.cli import main
from hcchroma.graph import complete, cycle, star, write_edge_list


@pytest.fixture()
def c5_file(tmp_path):
    p = tmp_path / "c5.edges"
    write_edge_list(cycle(5), p)
    return p


@pytest.fixture()
def k3_file(tmp_path):
    p = tmp_path / "k3.edges"
    write_edge_list(complete(3), p)
    return p


def test_hardcore_stats_c5(c5_file, tmp_path, capsys):
    out = tmp_path / "stats.json"
    code = main([
        "hardcore-stats", "--input", str(c5_file), "--lam", "1.0",
        "--fact-check", "--output", str(out),
    ])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["mode"] == "exact"
    assert abs(data["occupancy"][0] - 3 / 11) <= 1e-12
    assert abs(data["log_Z"] - math.log(11)) <= 1e-12
    assert data["fact_check"]["fact1_residual"] <= 1e-12
    assert set(data["neighbour_occupancy"]) == {"1"}


def test_hardcore_stats_tsv(c5_file, capsys):
    code = main(["hardcore-stats", "--input", str(c5_file), "--lam", "1.0",
                 "--format", "tsv"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("vertex\t")
    assert len(lines) == 6


def test_hardcore_stats_sampled_mode(c5_file, tmp_path):
    out = tmp_path / "sampled.json"
    code = main([
        "hardcore-stats", "--input", str(c5_file), "--lam", "1.0",
        "--cutoff", "3", "--trials", "64", "--steps", "200",
        "--output", str(out),
    ])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["mode"] == "sampled"
    assert data["log_Z"] is None


def test_missing_file_is_io_error(tmp_path):
    code = main(["hardcore-stats", "--input", str(tmp_path / "nope.edges"),
                 "--lam", "1.0"])
    assert code == 1


def test_empty_file_is_io_error(tmp_path):
    p = tmp_path / "empty.edges"
    p.write_text("")
    assert main(["hardcore-stats", "--input", str(p), "--lam", "1.0"]) == 1


def test_triangle_fact_check_is_hypothesis_error(k3_file):
    code = main(["hardcore-stats", "--input", str(k3_file), "--lam", "1.0",
                 "--fact-check"])
    assert code == 2


def test_frac_colour_c5(c5_file, tmp_path):
    out = tmp_path / "col.json"
    slack = tmp_path / "slack.tsv"
    code = main([
        "frac-colour", "--input", str(c5_file), "--epsilon", "2.0",
        "--output", str(out), "--slack-tsv", str(slack),
    ])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["total"] > 0
    rows = slack.read_text().strip().splitlines()
    assert len(rows) == 6
    assert all(float(r.split("\t")[4]) > -1e-9 for r in rows[1:])


def test_frac_colour_rejects_triangles(k3_file):
    assert main(["frac-colour", "--input", str(k3_file), "--epsilon", "2.0"]) == 2


def test_frac_colour_empty_graph(tmp_path):
    p = tmp_path / "empty0.edges"
    p.write_text("0 0\n")
    out = tmp_path / "col.json"
    code = main(["frac-colour", "--input", str(p), "--epsilon", "1.0",
                 "--output", str(out)])
    assert code == 0
    assert json.loads(out.read_text()) == {"total": 0.0, "parts": []}


def test_frac_colour_cutoff_resource_error(c5_file, monkeypatch):
    monkeypatch.setenv("HCCHROMA_CUTOFF", "3")
    assert main(["frac-colour", "--input", str(c5_file), "--epsilon", "2.0"]) == 3
    monkeypatch.setenv("HCCHROMA_CUTOFF", "30")
    assert main(["frac-colour", "--input", str(c5_file), "--epsilon", "2.0"]) == 0


def test_dp_solve_list_cover(c5_file, tmp_path):
    cover = tmp_path / "cover.json"
    cover.write_text(json.dumps({
        "graph": "c5.edges",
        "lists": {str(v): [1, 2, 3] for v in range(5)},
    }))
    out = tmp_path / "sol.json"
    code = main(["dp-solve", "--cover", str(cover), "--seed", "4",
                 "--output", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    labels = {int(u): lab for u, lab in data["labels"].items()}
    g = cycle(5)
    for u, v in g.edges():
        assert labels[u] != labels[v]


def test_dp_solve_two_phase(c5_file, tmp_path):
    cover = tmp_path / "cover.json"
    cover.write_text(json.dumps({
        "graph": "c5.edges",
        "lists": {str(v): [1, 2, 3] for v in range(5)},
    }))
    out = tmp_path / "tp.json"
    code = main(["dp-solve", "--cover", str(cover), "--two-phase", "--ell", "3",
                 "--rounds", "10", "--seed", "2", "--output", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["choice"] is not None
    assert "two_phase" in data


def test_dp_solve_unsatisfiable_is_resource_error(tmp_path):
    write_edge_list(complete(2), tmp_path / "k2.edges")
    cover = tmp_path / "cover.json"
    cover.write_text(json.dumps({"graph": "k2.edges", "lists": {"0": [1], "1": [1]}}))
    code = main(["dp-solve", "--cover", str(cover), "--max-resamples", "10"])
    assert code == 3


def test_construct_level1(tmp_path):
    out = tmp_path / "report.json"
    graph_out = tmp_path / "inst.edges"
    lists_out = tmp_path / "lists.json"
    code = main([
        "construct", "--delta", "3", "--level", "1",
        "--out-graph", str(graph_out), "--out-lists", str(lists_out),
        "--output", str(out),
    ])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["not_colourable"] is True
    assert report["properties_ok"] is True
    assert report["n"] == 29
    lists = json.loads(lists_out.read_text())
    assert len(lists["lists"]) == 29


def test_construct_delta2_is_precondition_error():
    assert main(["construct", "--delta", "2", "--level", "0"]) == 2


def test_construct_level2_is_resource_error():
    assert main(["construct", "--delta", "3", "--level", "2"]) == 3


def test_semibip_c5(c5_file, tmp_path):
    out = tmp_path / "semibip.json"
    code = main(["semibip", "--input", str(c5_file), "--lam", "1.0",
                 "--output", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["A"] == [0, 2]
    assert abs(data["avg_degree"] - 1.6) <= 1e-12
    assert abs(data["expected_boundary_edges"] - 30 / 11) <= 1e-9


def test_semibip_auto_mode(tmp_path):
    p = tmp_path / "pet.edges"
    from hcchroma.graph import petersen

    write_edge_list(petersen(), p)
    out = tmp_path / "o.json"
    assert main(["semibip", "--input", str(p), "--output", str(out)]) == 0
    data = json.loads(out.read_text())
    assert abs(data["lambda"] - 10 / (10 * math.log(3))) <= 1e-12


def test_semibip_triangle_is_hypothesis_error(k3_file):
    assert main(["semibip", "--input", str(k3_file), "--lam", "1.0"]) == 2


def test_byte_identical_reruns(c5_file, tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    args = ["frac-colour", "--input", str(c5_file), "--epsilon", "2.0"]
    assert main(args + ["--output", str(out1)]) == 0
    assert main(args + ["--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()

    s1 = tmp_path / "s1.json"
    s2 = tmp_path / "s2.json"
    args = ["semibip", "--input", str(c5_file), "--lam", "1.0", "--seed", "7"]
    assert main(args + ["--output", str(s1)]) == 0
    assert main(args + ["--output", str(s2)]) == 0
    assert s1.read_bytes() == s2.read_bytes()
