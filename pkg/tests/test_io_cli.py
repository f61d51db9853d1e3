import io
import json
import subprocess
import sys

import pytest

from sftkit import Configuration, Domain, Lattice, free_abelian, heisenberg3, semidirect, wang_to_sft
from sftkit.automorphism import AutMatrix, shear
from sftkit.cli import run
from sftkit.constructions import column_base, mod3_marker, mod3_point, quotient_lift
from sftkit.errors import MalformedInput
from sftkit.groups import coordinate_projection, embedding, heisenberg_abelianization
from sftkit.io import (
    automorphism_from_json,
    chain_from_json,
    config_from_json,
    config_to_json,
    digest,
    dumps,
    external_tiles,
    group_from_json,
    group_to_json,
    hom_from_json,
    hom_to_json,
    sft_from_json,
    sft_to_json,
    tiles_from_json,
    tiles_to_json,
)

from oracles import cnf_satisfiable


# serialization

@pytest.mark.parametrize("g", [free_abelian(1), free_abelian(3), heisenberg3(), semidirect(((2, 1), (1, 1)))])
def test_group_round_trip(g):
    assert group_from_json(json.loads(dumps(group_to_json(g)))) == g


def test_sft_round_trip(clashing_tiles):
    for x in (mod3_marker(2), wang_to_sft(clashing_tiles),
              quotient_lift(column_base(), heisenberg_abelianization())):
        d = sft_to_json(x)
        y = sft_from_json(json.loads(dumps(d)))
        assert y == x and y.meta == x.meta
        assert dumps(sft_to_json(y)) == dumps(d)
        assert digest(sft_to_json(y)) == digest(d)


def test_hom_and_chain_round_trip():
    z1 = free_abelian(1)
    homs = [heisenberg_abelianization(), coordinate_projection(3, (0, 2)),
            embedding(z1, heisenberg3(), (heisenberg3().element(0, 1, 0),))]
    for h in homs:
        assert hom_from_json(hom_to_json(h)) == h
    assert chain_from_json({"chain": [hom_to_json(h) for h in homs[:2]]}) == homs[:2]


def test_tiles_and_config_round_trip(clashing_tiles):
    assert tiles_from_json(tiles_to_json(clashing_tiles)) == clashing_tiles
    x = mod3_marker(2)
    for dom in (Domain.torus(x.group, Lattice.diagonal(3, 3)), Domain.ball(x.group, 2),
                Domain.window(x.group, [x.group.element(0, 0), x.group.element(5, 1)])):
        c = mod3_point(dom)
        back, alphabet = config_from_json(json.loads(dumps(config_to_json(c, x.alphabet))))
        assert back == c and alphabet == x.alphabet


def test_config_keyed_values():
    d = {"group": {"family": "free_abelian", "rank": 2}, "alphabet": ["a", "b"],
         "domain": {"kind": "torus", "lattice": [[2, 0], [0, 1]]},
         "values": {"0,0": "a", "3,5": "b"}}
    c, _ = config_from_json(d)
    assert c.values == (0, 1)


def test_automorphism_json():
    assert automorphism_from_json({"matrix": [[1, 1], [0, 1]]}) == AutMatrix(((1, 1), (0, 1)))
    assert automorphism_from_json({"shear": {"u": [1, 0], "v": [0, 1]}}) == shear((1, 0), (0, 1))


@pytest.mark.parametrize("bad", [
    {"family": "Free"},
    {"family": "free_abelian"},
    {"family": "semidirect", "matrix": [[2, 0], [0, 1]]},
])
def test_malformed_group(bad):
    with pytest.raises(MalformedInput):
        group_from_json(bad)


def test_malformed_sft():
    base = sft_to_json(mod3_marker(1))
    broken = json.loads(json.dumps(base))
    broken["forbidden"][0]["symbols"] = ["0"]
    with pytest.raises(MalformedInput):
        sft_from_json(broken)
    broken = json.loads(json.dumps(base))
    broken["forbidden"][0]["symbols"][0] = "9"
    with pytest.raises(MalformedInput):
        sft_from_json(broken)


def test_external_tiles():
    t = external_tiles()
    assert len(t.tiles) == 11
    assert all(len(tile) == 4 for tile in t.tiles)


# CLI

def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(dumps(obj))
    return str(p)


def test_cli_mod3():
    code, out, _ = call("mod3", "--dim", "2")
    assert code == 0
    d = json.loads(out)
    assert len(d["alphabet"]) == 9
    assert len(d["forbidden"]) == 144
    assert sft_from_json(d) == mod3_marker(2)


def test_cli_check(tmp_path, clashing_tiles):
    full = write(tmp_path, "full.json", {"group": {"family": "free_abelian", "rank": 2}, "alphabet": ["a", "b"],
                                         "forbidden": []})
    code, out, _ = call("check", full, "--radius", "2")
    rep = json.loads(out)
    assert code == 0 and rep["result"]["verdict"] == "witness"
    assert set(rep["result"]["witness"]["values"]) == {"a"}
    empty = write(tmp_path, "empty.json", sft_to_json(wang_to_sft(clashing_tiles)))
    code, out, _ = call("check", empty, "--radius", "1")
    assert code == 1 and json.loads(out)["result"]["verdict"] == "empty"
    mod3 = write(tmp_path, "mod3.json", sft_to_json(mod3_marker(2)))
    code, out, _ = call("check", mod3, "--radius", "2", "--budget", "3")
    assert code == 2 and json.loads(out)["result"]["verdict"] == "inconclusive"


def test_cli_periodic_stabilizer_pipeline(tmp_path):
    mod3 = write(tmp_path, "mod3.json", sft_to_json(mod3_marker(2)))
    code, out, _ = call("periodic", mod3, "--lattice", "3,0;0,3")
    assert code == 0
    witness = json.loads(out)["result"]["witness"]
    cfg = write(tmp_path, "w.json", witness)
    code, out, _ = call("stabilizer", cfg)
    assert code == 0
    assert json.loads(out)["result"]["stabilizer"] == Lattice.diagonal(3, 3).to_text()
    code, out, _ = call("periodic", mod3, "--lattice", "1,0;0,3")
    assert code == 1 and json.loads(out)["result"]["witness"] is None


def test_cli_search_periods(tmp_path):
    mod3 = write(tmp_path, "mod3.json", sft_to_json(mod3_marker(2)))
    code, out, _ = call("search-periods", mod3, "--max-index", "9")
    res = json.loads(out)["result"]
    assert code == 0 and res["admitting"] == 1
    assert [r["lattice"] for r in res["lattices"] if r["admits"]] == ["3,0;0,3"]
    code, _, _ = call("search-periods", mod3, "--max-index", "8")
    assert code == 1


def test_cli_constructions_round_trip(tmp_path, no_aa, single_tile):
    base = write(tmp_path, "cols.json", sft_to_json(column_base()))
    hom = write(tmp_path, "ab.json", hom_to_json(heisenberg_abelianization()))
    code, out, _ = call("lift", base, "--hom", hom)
    assert code == 0 and sft_from_json(json.loads(out)) == quotient_lift(column_base(), heisenberg_abelianization())

    rows = write(tmp_path, "rows.json", hom_to_json(embedding(free_abelian(1), free_abelian(2),
                                                              (free_abelian(2).element(1, 0),))))
    code, out, _ = call("induce", write(tmp_path, "noaa.json", sft_to_json(no_aa)), "--hom", rows)
    assert code == 0 and sft_from_json(json.loads(out)).group == free_abelian(2)

    code, out, _ = call("product", base, base)
    assert code == 0 and len(json.loads(out)["alphabet"]) == 4

    code, out, _ = call("extend", base, "--dim", "3")
    assert code == 0 and json.loads(out)["group"]["rank"] == 3

    code, out, _ = call("autfree", base, "--projection", '{"0": 0, "1": 1}', "--dim", "2")
    d = json.loads(out)
    assert code == 0 and len(d["alphabet"]) == 36 and d["meta"]["projection"] == {"0": 0, "1": 1}

    tiles = write(tmp_path, "tiles.json", tiles_to_json(single_tile))
    code, out, _ = call("wang", tiles)
    assert code == 0 and json.loads(out)["forbidden"] == []
    chain = write(tmp_path, "chain.json", {"chain": [hom_to_json(heisenberg_abelianization())]})
    code, out, _ = call("reduce", tiles, "--chain", chain)
    assert code == 0 and json.loads(out)["group"]["family"] == "heisenberg3"
    # construction output re-serializes byte for byte
    assert dumps(sft_to_json(sft_from_json(json.loads(out)))) == out


def test_cli_aut_check(tmp_path):
    x = mod3_marker(2)
    mod3 = write(tmp_path, "mod3.json", sft_to_json(x))
    z = write(tmp_path, "z.json", config_to_json(mod3_point(Domain.torus(x.group, Lattice.diagonal(3, 3))),
                                                 x.alphabet))
    code, out, _ = call("aut-check", mod3, z, "--matrix=-1,0;0,-1")
    assert code == 1 and json.loads(out)["result"]["verdict"] == "refuted"
    code, out, _ = call("aut-check", mod3, z, "--matrix", '{"matrix": [[1, 0], [0, 1]]}')
    assert code == 0 and json.loads(out)["result"]["verdict"] == "consistent"


def test_cli_render(tmp_path):
    z2 = free_abelian(2)
    dom = Domain.torus(z2, Lattice.diagonal(3, 2))
    c = Configuration.from_function(dom, lambda g: g.coords[0] % 3)
    from sftkit import Alphabet
    cfg = write(tmp_path, "c.json", config_to_json(c, Alphabet(("a", "b", "c"))))
    code, out, _ = call("render", cfg)
    assert code == 0 and out == "a b c\na b c\n"
    proc = subprocess.run([sys.executable, "-m", "sftkit.cli", "render", cfg, "--format", "pgm"],
                          capture_output=True, check=True)
    assert proc.stdout == b"P5\n3 2\n255\n" + bytes([0, 127, 255, 0, 127, 255])


def test_cli_export_cnf(tmp_path, clashing_tiles, single_tile):
    empty = write(tmp_path, "e.json", sft_to_json(wang_to_sft(clashing_tiles)))
    code, out, _ = call("export-cnf", empty, "--radius", "1")
    assert code == 0 and out.splitlines()[1].startswith("p cnf 10 ")
    assert not cnf_satisfiable(out)
    ok = write(tmp_path, "o.json", sft_to_json(wang_to_sft(single_tile)))
    assert cnf_satisfiable(call("export-cnf", ok, "--radius", "1")[1])


def test_cli_usage_and_malformed(tmp_path):
    assert call()[0] == 64
    assert call("nonsense")[0] == 64
    assert call("check")[0] == 64
    assert call("mod3", "--dim", "0")[0] == 64
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("check", str(bad), "--radius", "1")[0] == 65
    assert call("check", str(tmp_path / "missing.json"), "--radius", "1")[0] == 65
    wrong = write(tmp_path, "wrong.json", {"group": {"family": "free_abelian", "rank": 2}, "alphabet": ["a"],
                                           "forbidden": [{"support": [[0, 0]], "symbols": ["z"]}]})
    assert call("check", wrong, "--radius", "1")[0] == 65


def test_cli_reports_deterministic(tmp_path):
    mod3 = write(tmp_path, "mod3.json", sft_to_json(mod3_marker(2)))
    a = call("check", mod3, "--radius", "2")[1]
    b = call("check", mod3, "--radius", "2")[1]
    assert a == b
    timed = json.loads(call("--timing", "check", mod3, "--radius", "2")[1])
    assert "wall_seconds" in timed["timing"]
    del timed["timing"]
    plain = json.loads(a)
    plain["command"] = timed["command"]
    assert timed == plain
