from __future__ import annotations

import json

import pytest

from normwalk import serialize
from normwalk.cli import main
from normwalk.lattice import convex_hull


def write_square(tmp_path):
    path = tmp_path / "square.json"
    P = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
    path.write_text(serialize.canonical_dumps(serialize.polytope_to_json(P)))
    return path


def write_simplex(tmp_path):
    path = tmp_path / "simplex.json"
    P = convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)])
    path.write_text(serialize.canonical_dumps(serialize.polytope_to_json(P)))
    return path


# --- round trips -----------------------------------------------------------------

def test_polytope_json_round_trip_bytes():
    P = convex_hull([(0, 0), (3, 0), (0, 2), (5, 7)])
    text = serialize.canonical_dumps(serialize.polytope_to_json(P))
    Q = serialize.polytope_from_json(json.loads(text))
    assert serialize.canonical_dumps(serialize.polytope_to_json(Q)) == text


def test_rational_round_trip():
    from fractions import Fraction

    from normwalk.continuous import rational_hull

    P = rational_hull([(0, 0), (Fraction(1, 2), 0), (0, Fraction(3, 7))])
    text = serialize.canonical_dumps(serialize.rational_polytope_to_json(P))
    Q = serialize.rational_polytope_from_json(json.loads(text))
    assert serialize.canonical_dumps(serialize.rational_polytope_to_json(Q)) == text


def test_decimal_string_integers_survive_big_values():
    big = 10 ** 30
    P = convex_hull([(0,), (big,)])
    obj = serialize.polytope_to_json(P)
    assert obj["vertices"][1] == [str(big)]
    Q = serialize.polytope_from_json(obj)
    assert Q.vertices == ((0,), (big,))


# --- subcommand behavior ------------------------------------------------------------

def test_check_square_exit_zero(tmp_path, capsys):
    path = write_square(tmp_path)
    code = main(["check", str(path)])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["integrally_closed"] is True
    assert out["smooth"] is True


def test_check_simplex_falsified(tmp_path, capsys):
    path = write_simplex(tmp_path)
    code = main(["check", str(path)])
    out = json.loads(capsys.readouterr().out)
    assert code == 1
    assert out["integrally_closed"] is False
    assert out["normal_wrt_lambda"] is True
    assert out["witness"] == {"c": "2", "z": ["1", "1", "1"]}


def test_check_deterministic_bytes(tmp_path):
    path = write_square(tmp_path)
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(["check", str(path), "-o", str(out1)]) == 0
    assert main(["check", str(path), "-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_jumps_cube_heights_bounded(tmp_path, capsys):
    path = tmp_path / "cube.json"
    from itertools import product

    P = convex_hull(list(product((0, 1), repeat=3)))
    path.write_text(serialize.canonical_dumps(serialize.polytope_to_json(P)))
    code = main(["jumps", str(path)])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["jumps"]
    assert all(int(j["height"]) <= 2 for j in out["jumps"])


def test_walk_jsonl_and_determinism(tmp_path):
    path = write_square(tmp_path)
    bits = tmp_path / "bits.bin"
    bits.write_bytes(bytes(range(100)))
    out1 = tmp_path / "w1.jsonl"
    out2 = tmp_path / "w2.jsonl"
    args = ["walk", str(path), "--strategy", "random", "--budget", "3",
            "--bits", str(bits)]
    assert main(args + ["-o", str(out1)]) == 0
    assert main(args + ["-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = [json.loads(l) for l in out1.read_text().splitlines()]
    assert lines[0]["type"] == "header"
    assert lines[0]["provenance"]["sha256"]
    assert lines[-1]["type"] == "summary"
    assert lines[-1]["zeta_partial_1"]


def test_atlas_command(tmp_path, capsys):
    code = main(["atlas", "--dim", "2", "--radius", "1"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert len(out["elements"]) == 15
    assert out["betti"][0] == 1


def test_gen_zero_bits_degenerate(tmp_path, capsys):
    bits = tmp_path / "zeros.bin"
    bits.write_bytes(bytes(64))
    code = main([
        "gen", "--dim", "2", "--max-vertices", "4", "--n-start", "1",
        "--n-end", "1", "--bits", str(bits),
    ])
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert code == 0
    polys = [l for l in lines if l["type"] == "polytope"]
    assert polys
    assert all(p["vertices"] == [["0", "0"]] for p in polys)
    assert all(p["degenerate"] for p in polys)


def test_survey_csv_header(tmp_path, capsys):
    bits = tmp_path / "bits.bin"
    bits.write_bytes(bytes(range(256)) * 4)
    code = main([
        "survey", "--dim", "2", "--max-vertices", "3", "--n-start", "1",
        "--n-end", "2", "--bits", str(bits), "--format", "csv",
        "--checks", "normal",
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0] == "cluster,n,total,normal,minimal,maximal"


def test_pyramid_check_exit_codes(tmp_path, capsys):
    inner = tmp_path / "p.json"
    square = tmp_path / "sq.json"
    outer_bad = tmp_path / "qbad.json"
    inner.write_text(json.dumps({"vertices": [["0", "0"], ["1", "0"], ["0", "1"]]}))
    square.write_text(json.dumps(
        {"vertices": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]]}
    ))
    outer_bad.write_text(json.dumps(
        {"vertices": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"], ["2", "2"]]}
    ))
    assert main(["pyramid", str(inner), str(square)]) == 0
    capsys.readouterr()
    # (2,2) sees two facets of the square: not a pyramidal extension
    assert main(["pyramid", str(square), str(outer_bad)]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["holds"] is False


def test_pyramid_search_chain(tmp_path, capsys):
    inner = tmp_path / "p.json"
    outer = tmp_path / "q.json"
    inner.write_text(json.dumps({"vertices": [["0", "0"], ["1", "0"], ["0", "1"]]}))
    outer.write_text(json.dumps(
        {"vertices": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]]}
    ))
    code = main(["pyramid", str(inner), str(outer), "--search-chain"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["found"] is True
    assert len(out["chain"]) == 2


def test_malformed_json_is_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert main(["check", str(bad)]) == 2


def test_resource_cap_exit_code(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("NORMWALK_MAX_POINTS", "4")
    assert main(["atlas", "--dim", "2", "--radius", "2"]) == 3


def test_hrep_export_round_trip():
    from normwalk.hull import vertices_from_facets

    P = convex_hull([(0, 0), (2, 0), (0, 2)])
    obj = serialize.hrep_to_json(P)
    facets = [
        (tuple(int(a) for a in n), int(b))
        for n, b in zip(obj["normals"], obj["offsets"])
    ]
    rebuilt = vertices_from_facets(facets, 2)
    assert tuple(tuple(int(a) for a in v) for v in rebuilt) == P.vertices
