"""Instance files, reports, exit codes and figures."""

import copy
import json
import os

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import HANKEL_RECIPE, INSTANCES
from residua import cli
from residua.verify import REFUTED, Verdict

SCHEMA = json.load(open(cli.SCHEMA_PATH, encoding="utf-8"))

LINK_TEXT = """
name = "link"
[ring]
field = "QQ"
variables = ["x", "y"]
[ideal]
generators = ["x", "y"]
[a]
generators = ["x^2", "y^2"]
"""


def instance(name):
    return os.path.join(INSTANCES, name + ".toml")


def write(tmp_path, text, name="inst.toml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def run_json(path, *flags):
    """Run the CLI with --json to a temp file next to ``path``; return (exit code, report)."""
    out = path + ".json"
    code = cli.main(["run", path, "--json", out, *flags])
    with open(out, encoding="utf-8") as fh:
        return code, fh.read()


def untimed(text):
    report = json.loads(text)
    report.pop("timing")
    return json.dumps(report, sort_keys=True)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def test_parse_link_file():
    spec = cli.parse_instance(instance("link"))
    assert spec.name == "link" and spec.field == "QQ" and spec.variables == ["x", "y"]
    assert spec.ideal == ["x", "y"] and spec.a_generators == ["x^2", "y^2"]
    assert spec.suite == ["cm", "canonical", "numerics"] and spec.degree_bound == 8


@pytest.mark.parametrize("name", ["link", "power_square", "linear_four", "hankel"])
def test_parse_serialize_parse(name):
    spec = cli.parse_instance(instance(name))
    again = cli.parse_text(spec.dumps())
    assert again == spec and again.dumps() == spec.dumps()


@st.composite
def instance_texts(draw):
    names = draw(st.sampled_from([["x", "y"], ["x", "y", "z"]]))
    field = draw(st.sampled_from(["QQ", "GF(101)", "GF(32003)"]))
    order = draw(st.sampled_from(["grevlex", "lex", "deglex"]))
    lines = [f'name = "{draw(st.sampled_from(["a", "b_1"]))}"', "[ring]", f'field = "{field}"',
             "variables = [" + ", ".join(f'"{v}"' for v in names) + "]", f'order = "{order}"',
             "[ideal]"]
    if draw(st.booleans()):
        lines += ['generators = ["x", "y"]', "[a]"]
        if draw(st.booleans()):
            lines.append('generators = ["x^2", "y^3"]')
        else:
            seed = draw(st.integers(0, 99))
            lines += [f"degrees = [{draw(st.integers(2, 3))}, 3]", f"seed = {seed}"]
    else:
        lines += ['family = "power"', "vars = 2", f"exponent = {draw(st.integers(1, 3))}", "[a]",
                  "degrees = [3, 3, 3]", f"seed = {draw(st.integers(0, 99))}"]
    if draw(st.booleans()):
        lines += ["[run]", f"degree_bound = {draw(st.integers(2, 10))}", 'suite = ["cm"]']
    return "\n".join(lines) + "\n"


@settings(max_examples=40, deadline=None, derandomize=True)
@given(instance_texts())
def test_parse_serialize_parse_generated(text):
    spec = cli.parse_text(text)
    assert cli.parse_text(spec.dumps()) == spec


@pytest.mark.parametrize("text, message", [
    (LINK_TEXT + "foo = 1\n", "unknown key 'foo'"),
    (LINK_TEXT.replace("[ring]", "[ring]\nfoo = 1"), "unknown key 'foo' in [ring]"),
    (LINK_TEXT.replace('generators = ["x^2", "y^2"]', "degrees = [2, 2]"),
     "seed required for reproducibility"),
    (LINK_TEXT.replace("[ring]", "[ring"), "line 3, column"),
    (LINK_TEXT.replace('"x^2", "y^2"', '"x^2", "y^2 + x"'), "degree mismatch"),
    (LINK_TEXT.replace('"x^2", "y^2"', '"x^2", "z^2"'), "z"),
    (LINK_TEXT.replace('[ring]', '[run]\nsuite = ["nope"]\n[ring]'), "unknown suite"),
])
def test_parse_errors(text, message):
    with pytest.raises(cli.InstanceError, match=message.replace("[", r"\[").replace("]", r"\]")):
        cli.parse_text(text)


# ---------------------------------------------------------------------------
# runs and exit codes
# ---------------------------------------------------------------------------


def test_run_link(capsys):
    code = cli.main(["run", instance("link"), "--suite", "cm,canonical,numerics"])
    out = capsys.readouterr().out
    assert code == cli.EXIT_OK
    assert 'invariant\tJ\t["x^2","x*y","y^2"]' in out.splitlines()
    assert all(line.endswith("verified") for line in out.splitlines() if line.startswith("verdict"))


def test_report_validates_against_schema(tmp_path):
    path = write(tmp_path, open(instance("power_square"), encoding="utf-8").read())
    code, text = run_json(path)
    report = json.loads(text)
    jsonschema.validate(report, SCHEMA)
    assert code == cli.EXIT_OK
    assert report["invariants"]["type"] == 6 and report["classification"]["residual"]
    bad = copy.deepcopy(report)
    bad["verdicts"][0]["status"] = "proved"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, SCHEMA)


def test_reruns_identical_modulo_timing(tmp_path):
    path = write(tmp_path, open(instance("power_square"), encoding="utf-8").read())
    _, first = run_json(path)
    _, second = run_json(path)
    assert untimed(first) == untimed(second)
    # the seed is part of the input: another seed gives another instance
    _, other = run_json(path, "--seed", "1")
    assert json.loads(other)["generated"]["a"] != json.loads(first)["generated"]["a"]


def test_thread_count_independence(tmp_path):
    path = write(tmp_path, open(instance("linear_four"), encoding="utf-8").read())
    _, serial = run_json(path, "--suite", "cm,canonical,duality,numerics,disguised")
    _, threaded = run_json(path, "--suite", "cm,canonical,duality,numerics,disguised", "--threads", "3")
    assert untimed(serial) == untimed(threaded)


def test_hankel_strict_exit(hankel, monkeypatch, capsys):
    # the file describes the session fixture, so its cached modules can be reused
    spec = cli.parse_instance(instance("hankel"))
    assert spec.recipe() == HANKEL_RECIPE and spec.seed == 0
    monkeypatch.setattr(cli.InstanceFile, "build", lambda self, seed=None: hankel)
    code = cli.main(["run", instance("hankel"), "--suite", "canonical", "--strict"])
    out = capsys.readouterr().out
    assert code == cli.EXIT_STRICT
    line = [x for x in out.splitlines() if x.startswith("verdict\tcanonical")][0]
    assert "hypotheses-not-met" in line and "SD2 fails" in line
    assert "16" in line and "20" in line and "21" in line


def test_not_met_without_strict_is_ok(tmp_path):
    text = LINK_TEXT + '[run]\nsuite = ["duality"]\n'
    path = write(tmp_path, text)
    assert cli.main(["run", path]) == cli.EXIT_OK
    assert cli.main(["run", path, "--strict"]) == cli.EXIT_STRICT


def test_refuted_exit(monkeypatch, tmp_path):
    def refuting(inst, suites, seed=0, bound=8):
        return [Verdict("cm", REFUTED, {"residual": True}, {})]

    monkeypatch.setattr(cli, "run_suite", refuting)
    assert cli.main(["run", write(tmp_path, LINK_TEXT)]) == cli.EXIT_REFUTED


def test_io_error(tmp_path, capsys):
    assert cli.main(["run", str(tmp_path / "missing.toml")]) == cli.EXIT_IO
    assert "I/O error" in capsys.readouterr().err


@pytest.mark.parametrize("text", [
    LINK_TEXT + "foo = 1\n",
    LINK_TEXT.replace('generators = ["x^2", "y^2"]', "degrees = [2, 2]"),
    LINK_TEXT.replace("[ring]", "[ring"),
    LINK_TEXT.replace('"x^2", "y^2"', '"x^2", "y^2 + x"'),
], ids=["unknown-key", "missing-seed", "syntax", "degree-mismatch"])
def test_parse_error_exit(text, tmp_path, capsys):
    assert cli.main(["run", write(tmp_path, text)]) == cli.EXIT_PARSE
    assert "invalid instance" in capsys.readouterr().err


def test_attempt_cap_exit(tmp_path, capsys):
    text = LINK_TEXT.replace('generators = ["x^2", "y^2"]', "degrees = [2, 2]\nseed = 0\nmax_attempts = 0")
    assert cli.main(["run", write(tmp_path, text)]) == cli.EXIT_CAP
    assert "attempt cap" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# other commands and figures
# ---------------------------------------------------------------------------


def test_invariants_command(capsys):
    assert cli.main(["invariants", instance("link")]) == cli.EXIT_OK
    rows = dict(line.split("\t", 1) for line in capsys.readouterr().out.splitlines())
    assert rows["type"] == "2" and rows["regularity"] == "1" and rows["sigma"] == "4"
    assert rows["hilbert_function"] == "[1,2,0,0,0,0,0,0,0]"


def test_complex_command(capsys):
    assert cli.main(["complex", instance("power_square"), "--k", "1"]) == cli.EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert "d_squared_zero\tTrue" in lines
    homology = [x for x in lines if x.startswith("homology")]
    assert len(homology) == 3 and all("\tvanishes\t" in x for x in homology)
    assert cli.main(["complex", instance("link"), "--k", "1", "--coefficients", "omega"]) == cli.EXIT_OK
    assert "coefficients\tomega" in capsys.readouterr().out


def test_figures(tmp_path, capsys):
    target = tmp_path / "figs"
    code = cli.main(["run", instance("link"), "--figures", str(target)])
    assert code == cli.EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.startswith("classification\t")
    names = sorted(os.listdir(target))
    assert names == ["betti_table.png", "hilbert_function.png", "invariants.tsv"]
    for name in names[:2]:
        with open(target / name, "rb") as fh:
            assert fh.read(8) == b"\x89PNG\r\n\x1a\n"
    tsv = (target / "invariants.tsv").read_text(encoding="utf-8").splitlines()
    assert "type\t2" in tsv
