import json
from fractions import Fraction
from random import Random

import pytest

from resconv import InputError, random_stoch_map, finset, identity
from resconv.cli import run
from resconv.jsonio import (dump_ncomb, dump_stoch_map, load_finite_table,
                            load_prob_vector, load_stoch_map, load_theory,
                            parse_term)
from resconv.combs import identity_comb, one_comb_as_ncomb

F = Fraction


@pytest.fixture
def food_file(tmp_path):
    path = tmp_path / "food.json"
    path.write_text(json.dumps({
        "kind": "vector", "arity": 2, "mode": "additive",
        "monotones": [{"name": "component:0", "class": "additive"},
                      {"name": "component:1", "class": "additive"}]}))
    return str(path)


@pytest.fixture
def prof_file(tmp_path):
    path = tmp_path / "prof.json"
    path.write_text(json.dumps({"kind": "vector", "arity": 2, "mode": "supremal"}))
    return str(path)


@pytest.fixture
def chain_file(tmp_path):
    path = tmp_path / "chain.json"
    path.write_text(json.dumps({
        "carrier": 2, "combine": [[0, 1], [1, 1]], "zero": 0,
        "geq": [[1, 0], [1, 1]]}))
    return str(path)


def test_convert_proven_exits_zero(food_file, capsys):
    assert run(["convert", food_file, "[2,3]", "[1,1]"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "Proven"


def test_convert_refuted_exits_one(food_file, capsys):
    assert run(["convert", food_file, "[0,3]", "[1,1]"]) == 1
    assert capsys.readouterr().out.splitlines()[0] == "Refuted"


def test_convert_rejects_malformed_term(food_file, capsys):
    assert run(["convert", food_file, "[2]", "[1,1]"]) == 2


def test_unknown_subcommand_exits_two(capsys):
    assert run(["frobnicate"]) == 2


def test_missing_file_exits_two(capsys):
    assert run(["convert", "nope.json", "[1,0]", "[0,0]"]) == 2


def test_check_axioms_clean_table(chain_file, capsys):
    assert run(["check-axioms", chain_file]) == 0
    assert "no violations" in capsys.readouterr().out


def test_check_axioms_reports_violations(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "carrier": 3, "combine": [[0, 1, 2], [1, 2, 0], [2, 0, 1]], "zero": 0,
        "geq": [[1, 1, 0], [0, 1, 1], [0, 0, 1]]}))
    assert run(["check-axioms", str(bad)]) == 1
    out = capsys.readouterr().out
    assert "transitivity" in out


def test_catalyst_found_in_proficiency(prof_file, capsys):
    assert run(["catalyst", prof_file, "[0,0]", "[1,0]", "--box", "1"]) == 0
    assert "catalyst: (1,0)" in capsys.readouterr().out


def test_catalyst_absent_in_food(food_file, capsys):
    assert run(["catalyst", food_file, "[0,0]", "[1,0]", "--box", "2"]) == 1


def test_rate_human_output(food_file, capsys):
    assert run(["rate", food_file, "[2,3]", "[1,1]", "--caps", "8"]) == 0
    out = capsys.readouterr().out
    assert "best m/n = 2" in out and "upper bound 2" in out and "exact" in out


def test_rate_json_output(food_file, capsys):
    assert run(["rate", food_file, "[2,3]", "[1,1]", "--caps", "8", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["best"] == "2" and data["exact"] is True


def test_monotones_report(food_file, capsys):
    assert run(["monotones", food_file, "--sample-box", "2"]) == 0
    out = capsys.readouterr().out
    assert "monotone:component:0" in out and "class:component:1" in out


def test_properties_json_roundtrip(prof_file, capsys):
    assert run(["properties", prof_file, "--sample-box", "1", "--json"]) == 0
    reports = json.loads(capsys.readouterr().out)
    names = {r["property"] for r in reports}
    assert {"quality-like", "quantity-like", "catalysis-free"} <= names
    quality = next(r for r in reports if r["property"] == "quality-like")
    assert quality["verdict"] != "Refuted"


def test_properties_random_tables_deterministic(capsys):
    assert run(["properties", "--random-tables", "4", "--size", "4",
                "--seed", "9"]) == 0
    first = capsys.readouterr().out
    assert run(["properties", "--random-tables", "4", "--size", "4",
                "--seed", "9"]) == 0
    assert capsys.readouterr().out == first
    assert "consistent" in first


def test_hasse_dot_output(prof_file, tmp_path, capsys):
    out = tmp_path / "prof.dot"
    assert run(["hasse", prof_file, "--box", "2", "--out", str(out)]) == 0
    dot = out.read_text()
    assert dot.count("label=") == 9
    assert dot.count("->") == 12  # covering edges of the 3x3 grid
    assert dot.startswith("digraph")


def test_hasse_merges_equivalence_classes(tmp_path, capsys):
    path = tmp_path / "sym.json"
    # two mutually convertible elements collapse into one node
    path.write_text(json.dumps({
        "carrier": 2, "combine": [[0, 1], [1, 1]], "zero": 0,
        "geq": [[1, 1], [1, 1]]}))
    assert run(["hasse", str(path), "--box", "2"]) == 0
    dot = capsys.readouterr().out
    assert dot.count("label=") == 1


def test_simulate_channel_apply(tmp_path, capsys):
    rng = Random(0)
    b2 = finset("b", 2)
    p = tmp_path / "p.json"
    p.write_text(json.dumps(dump_stoch_map(identity(b2))))
    e = tmp_path / "e.json"
    e.write_text(json.dumps(dump_stoch_map(identity(b2))))
    d = tmp_path / "d.json"
    d.write_text(json.dumps(dump_stoch_map(identity(b2))))
    r = tmp_path / "r.json"
    r.write_text(json.dumps({"sa": ["*"], "sb": ["*"], "joint": [["1"]]}))
    assert run(["simulate-channel", str(p), "--encoder", str(e),
                "--decoder", str(d), "--randomness", str(r), "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["matrix"] == [["1", "0"], ["0", "1"]]


def test_simulate_channel_search(tmp_path, capsys):
    b2, b4 = finset("b", 2), finset("q", 4)
    p = tmp_path / "p.json"
    p.write_text(json.dumps(dump_stoch_map(identity(b4))))
    t = tmp_path / "t.json"
    t.write_text(json.dumps(dump_stoch_map(identity(b2))))
    assert run(["simulate-channel", str(p), "--target", str(t)]) == 0
    out = capsys.readouterr().out
    assert "Proven" in out and "re-verified" in out


def test_simulate_channel_search_refuted(tmp_path, capsys):
    b2 = finset("b", 2)
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"dom": ["a0", "a1"], "cod": ["b0", "b1"],
                             "matrix": [["1", "1"], ["0", "0"]]}))
    t = tmp_path / "t.json"
    t.write_text(json.dumps(dump_stoch_map(identity(b2))))
    assert run(["simulate-channel", str(p), "--target", str(t)]) == 1
    assert "Refuted" in capsys.readouterr().out


def circuit_files(tmp_path):
    rng = Random(31)
    from resconv import tensor
    A, B, Z = finset("A", 2), finset("B", 2), finset("Z", 2)
    lib = {"maps": {
        "f": {"dom": ["A"], "cod": ["A", "Z"],
              "matrix": dump_stoch_map(random_stoch_map(rng, A, tensor(A, Z)))["matrix"]},
        "g": {"dom": ["B", "Z"], "cod": ["B"],
              "matrix": dump_stoch_map(random_stoch_map(rng, tensor(B, Z), B))["matrix"]},
    }}
    (tmp_path / "maps.json").write_text(json.dumps(lib))
    circ = tmp_path / "tele.circ"
    circ.write_text(
        "types: A=2, B=2, Z=2\n"
        "library: lib = maps.json\n"
        "input: A\n"
        "layer: f[lib]\n"
        "layer: hole h(A -> B) ; id[Z]\n"
        "layer: g[lib]\n")
    return circ


def test_normalize_circuit_cli(tmp_path, capsys):
    circ = circuit_files(tmp_path)
    assert run(["normalize-circuit", str(circ)]) == 0
    out = capsys.readouterr().out
    assert "matches circuit on 4 basis processes" in out  # all deterministic 2->2 maps


def test_normalize_circuit_writes_comb_json(tmp_path, capsys):
    circ = circuit_files(tmp_path)
    out_file = tmp_path / "comb.json"
    assert run(["normalize-circuit", str(circ), "--out", str(out_file)]) == 0
    from resconv.jsonio import load_one_comb
    comb = load_one_comb(json.loads(out_file.read_text()))
    assert len(comb.ancilla) == 2


def test_plug_and_uc_apply_cli(tmp_path, capsys):
    b2 = finset("b", 2)
    outer = tmp_path / "outer.json"
    outer.write_text(json.dumps(dump_ncomb(one_comb_as_ncomb(identity_comb(b2, b2)))))
    inner = tmp_path / "inner.json"
    inner.write_text(json.dumps(dump_ncomb(one_comb_as_ncomb(identity_comb(b2, b2)))))
    assert run(["plug", str(outer), str(inner), "--json"]) == 0
    composite = json.loads(capsys.readouterr().out)
    assert len(composite["holes"]) == 1

    uc = tmp_path / "uc.json"
    uc.write_text(json.dumps({
        "allocation": [0],
        "combs": [dump_ncomb(one_comb_as_ncomb(identity_comb(b2, b2)))]}))
    f = tmp_path / "f.json"
    f.write_text(json.dumps({"dom": ["b0", "b1"], "cod": ["b0", "b1"],
                             "matrix": [["1/3", "1/2"], ["2/3", "1/2"]]}))
    assert run(["uc-apply", str(uc), str(f), "--json"]) == 0
    outputs = json.loads(capsys.readouterr().out)
    assert outputs[0]["matrix"] == [["1/3", "1/2"], ["2/3", "1/2"]]


# jsonio round trips

def test_stoch_map_roundtrip():
    rng = Random(5)
    p = random_stoch_map(rng, finset("a", 3), finset("b", 2))
    assert load_stoch_map(dump_stoch_map(p)).matrix == p.matrix


def test_finite_table_requires_well_formed_input():
    with pytest.raises(InputError):
        load_finite_table({"carrier": 2, "combine": [[0]], "zero": 0, "geq": [[1]]})


def test_prob_vector_parsing():
    v = load_prob_vector(["1/2", "1/4", "1/4"])
    assert v.entries == (F(1, 2), F(1, 4), F(1, 4))
    with pytest.raises(InputError):
        load_prob_vector(["1/2", "x"])


def test_theory_dispatch_and_terms(tmp_path):
    reaction = {"objects": ["N2", "H2", "NH3"],
                "morphisms": [{"name": "haber", "from": {"N2": 1, "H2": 3},
                               "to": {"NH3": 2}}]}
    t = load_theory(reaction, bound=4)
    a = parse_term(t, {"N2": 1, "H2": 3})
    b = parse_term(t, {"NH3": 2})
    assert t.geq(a, b).is_proven
    with pytest.raises(InputError):
        load_theory({"what": 1})
