import json
import subprocess
import sys

import pytest

from ybx.canon import binomial_matrix, shift_matrix
from ybx.cli import main
from ybx.formats import (dumps, format_table, parse_matrix, parse_table, solution_from_json,
                         solution_to_json)
from ybx.kernel import (AffineSolution, PermutationMap, complete_affine, complete_solution,
                        to_permutation)
from ybx.modmat import GroupSpec, Ring

J2 = "[[0,1],[0,0]]"
B2 = "[[1,1],[0,1]]"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


# -- formats ---------------------------------------------------------------------------


def test_parse_matrix_rejects_garbage():
    with pytest.raises(ValueError):
        parse_matrix("[1,2]", Ring(5))
    with pytest.raises(ValueError):
        parse_matrix([[1, 2], [3]], Ring(5))
    with pytest.raises(ValueError):
        parse_matrix([[1.5]], Ring(5))


def test_solution_json_completes_on_load():
    obj = {"group": {"mod": 5, "rank": 2}, "a": [[0, 1], [0, 0]], "b": [[1, 1], [0, 1]]}
    sol = solution_from_json(obj)
    assert sol.c.tolist() == [[1, 4], [0, 1]] and sol.d.tolist() == [[0, 4], [0, 0]]
    aff = solution_from_json({**obj, "z": [1, 1]})
    assert isinstance(aff, AffineSolution) and aff.t == (4, 4)


def test_solution_json_roundtrip():
    g = GroupSpec(5, 2)
    R5 = g.ring
    for sol in (complete_solution(g, shift_matrix(2, R5), binomial_matrix(2, R5)),
                complete_affine(g, shift_matrix(2, R5), binomial_matrix(2, R5), (2, 3))):
        text = dumps(solution_to_json(sol))
        again = solution_from_json(json.loads(text))
        assert again == sol
        assert dumps(solution_to_json(again)) == text


def test_table_text_roundtrip():
    g = GroupSpec(3, 2)
    sol = complete_solution(g, shift_matrix(2, g.ring), binomial_matrix(2, g.ring))
    R = to_permutation(sol)
    text = format_table(R)
    lines = text.splitlines()
    assert len(lines) == 81 and lines == sorted(lines)
    assert lines[0] == "0,0 0,0 -> 0,0 0,0"
    assert parse_table(text, g) == R


def test_table_text_errors():
    g = GroupSpec(2, 1)
    with pytest.raises(ValueError):
        parse_table("0 0 -> 0 0\n", g)
    with pytest.raises(ValueError):
        parse_table("0 0 -> 0 0\n0 0 -> 1 1\n0 1 -> 0 1\n1 1 -> 1 0\n", g)
    with pytest.raises(ValueError):
        parse_table("0 0 -> 0 5\n", g)


# -- commands ---------------------------------------------------------------------------


def test_construct(capsys):
    code, out, _ = run(capsys, "construct", "--mod", "5", "--rank", "2", "--a", J2, "--b", B2)
    assert code == 0
    obj = json.loads(out)
    assert obj["c"] == [[1, 4], [0, 1]] and obj["d"] == [[0, 4], [0, 0]]
    assert out.strip() == dumps(obj)


def test_construct_affine(capsys):
    code, out, _ = run(capsys, "construct-affine", "--mod", "5", "--rank", "2",
                       "--a", J2, "--b", B2, "--z", "[1,1]")
    assert code == 0 and json.loads(out)["t"] == [4, 4]


def test_construct_math_failures(capsys):
    code, out, _ = run(capsys, "construct", "--mod", "4", "--rank", "2",
                       "--a", J2, "--b", "[[1,0],[0,2]]")
    assert code == 1 and json.loads(out)["which"] == "b"
    code, out, _ = run(capsys, "construct", "--mod", "5", "--rank", "3",
                       "--a", "[[0,1,0],[0,0,1],[0,0,0]]", "--b", "[[1,0,0],[0,1,0],[0,0,1]]")
    assert code == 1 and json.loads(out)["error"] == "Eq13Violation"


def test_construct_usage_errors(capsys):
    code, _, err = run(capsys, "construct", "--mod", "5", "--rank", "2", "--a", "[[0,1]",
                       "--b", B2)
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "construct", "--mod", "5", "--rank", "3", "--a", J2, "--b", B2)
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["construct", "--mod", "5"])
    assert exc.value.code == 2


def test_verify_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "--mod", "5", "--rank", "2", "--a", J2, "--b", B2)
    f = tmp_path / "sol.json"
    f.write_text(out)
    for flags in ([], ["--set-level"]):
        code, rep, _ = run(capsys, "verify", str(f), *flags)
        assert code == 0
        rep = json.loads(rep)
        assert all(rep[k]["status"] == "pass" for k in ("qybe", "unitarity", "crossing"))
    # re-serialization is bit-identical
    assert dumps(solution_to_json(solution_from_json(json.loads(out)))) == out.strip()


def test_verify_failure_has_witness(capsys, tmp_path):
    bad = {"group": {"mod": 2, "rank": 1}, "a": [[1]], "b": [[0]], "c": [[0]], "d": [[1]]}
    f = tmp_path / "flip.json"
    f.write_text(json.dumps(bad))
    code, out, _ = run(capsys, "verify", str(f), "--set-level")
    rep = json.loads(out)
    assert code == 1
    assert rep["qybe"]["status"] == "pass" and rep["unitarity"]["status"] == "pass"
    assert rep["crossing"]["status"] == "fail" and "witness" in rep["crossing"]
    code, out, _ = run(capsys, "verify", str(f))
    assert code == 1 and json.loads(out)["crossing"]["witness"]["condition"] == 1


def test_verify_table_file(capsys, tmp_path):
    f = tmp_path / "flip.txt"
    f.write_text(format_table(PermutationMap.flip(3)))
    code, out, _ = run(capsys, "verify", str(f), "--mod", "3", "--rank", "1",
                       "--checks", "qybe,unitarity")
    assert code == 0 and json.loads(out)["crossing"]["status"] == "skipped"
    code, _, _ = run(capsys, "verify", str(f))
    assert code == 2


def test_verify_bad_input(capsys, tmp_path):
    f = tmp_path / "x.json"
    f.write_text('{"group": {"mod": 5}}')
    assert run(capsys, "verify", str(f))[0] == 2
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2
    with pytest.raises(SystemExit):
        main(["verify", str(f), "--checks", "qybe,bogus"])


def test_enumerate(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--mod", "4", "--rank", "1")
    assert code == 0
    rows = jsonl(out)
    assert len(rows) == 5 and rows[-1]["summary"]["count_raw"] == 4
    assert {(r["a"][0][0], r["b"][0][0]) for r in rows[:-1]} == {(0, 1), (0, 3), (2, 1), (2, 3)}
    dest = tmp_path / "out.jsonl"
    code, out, _ = run(capsys, "enumerate", "--mod", "2", "--rank", "2", "--out", str(dest),
                       "--no-timing")
    assert code == 0 and out == ""
    rows = jsonl(dest.read_text())
    assert rows[-1] == {"summary": {"count_raw": 18, "count_canonical": None,
                                    "checks": ["eq13"]}}
    assert run(capsys, "enumerate", "--mod", "4", "--rank", "2", "--budget", "10")[0] == 2


def test_search_set(capsys):
    code, out, _ = run(capsys, "search-set", "--n", "2", "--no-timing")
    rows = jsonl(out)
    assert code == 0
    assert [r["perm"] for r in rows[:-1]] == [[0, 1, 2, 3], [3, 2, 1, 0]]
    assert rows[-1]["summary"] == {"count_raw": 2, "count_canonical": 2,
                                   "checks": ["qybe", "unitarity", "crossing"]}
    assert run(capsys, "search-set", "--n", "4")[0] == 2


def test_classify(capsys, tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"group": {"mod": 5, "rank": 2}, "a": [[0, 1], [0, 0]],
                             "b": [[1, 1], [0, 1]]}))
    code, out, _ = run(capsys, "classify", str(f))
    rep = json.loads(out)
    assert code == 0 and rep["jordan_type"] == [2] and rep["nilpotency_index"] == 2
    f.write_text(json.dumps({"ring": {"ring": "Z"}, "a": [[0, 2], [0, 0]], "b": [[1, 0], [0, 1]]}))
    code, out, _ = run(capsys, "classify", str(f), "--probe-prop5")
    rep = json.loads(out)
    assert rep["prop5_probe"]["conjugate_over_Z"] is False and rep["eq13"] is True


def test_cross_validate_cmd(capsys):
    code, out, _ = run(capsys, "cross-validate", "--mod", "2", "--rank", "1")
    rep = json.loads(out)
    assert code == 0 and rep["inclusion"] and rep["residue"] == [[3, 2, 1, 0]]
    assert run(capsys, "cross-validate", "--mod", "2", "--rank", "2")[0] == 2


def test_module_entry_point_and_env_workers(tmp_path):
    env = {"YBX_WORKERS": "2", "PATH": "/usr/bin:/bin"}
    res = subprocess.run([sys.executable, "-m", "ybx", "search-set", "--n", "2", "--no-timing"],
                         capture_output=True, text=True, env=env)
    assert res.returncode == 0
    assert jsonl(res.stdout)[-1]["summary"]["count_raw"] == 2
