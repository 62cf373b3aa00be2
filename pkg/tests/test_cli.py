import json

import pytest

from mapgerms.cli import main, render_json
from mapgerms.dsl import parse
from mapgerms.errors import DSLError

FROBENIUS_FAMILY = "field F 5\nvars x\nmap f=(x^3)\nunfolding F params t = (x^3 + t^5*x)\n"


def _run(capsys, argv, tmp_path, script):
    p = tmp_path / "s.ms"
    p.write_text(script)
    rc = main(argv[:1] + [str(p)] + argv[1:])
    out, err = capsys.readouterr()
    return rc, out, err


def test_parse_examples():
    s = parse(FROBENIUS_FAMILY)
    assert s.unfoldings["F"].base == "f" and s.field.characteristic == 5
    s = parse("field Q\nvars x y mod x*y\nmap f=(x^2+y^2)")
    assert s.relations == [{(1, 1): 1}]


@pytest.mark.parametrize("text,msg,line", [
    ("vars x", "field must precede vars", 1),
    ("field F 9\n", "not a prime", 1),
    ("field Q\nvars x\nmap f=(x^3+z)", "undeclared variable", 3),
    ("field Q\nvars x y mod x", "order < 2", 2),
    ("field Q\nvars x\nmap f=(x^3)\nunfolding F params t = (x^2)", "does not restrict", 4),
    ("field Q\nvars x\nmap f=(x^3 + )", "unexpected", 3),
    ("field Q\nvars x\nmap f=(x^3", r"expected '\)'", 3),
])
def test_parse_errors(text, msg, line):
    with pytest.raises(DSLError, match=msg) as e:
        parse(text)
    assert e.value.line == line and e.value.col >= 1


def test_cli_examples(capsys, tmp_path):
    rc, out, _ = _run(capsys, ["tjurina"], tmp_path, "field Q\nvars x\nmap f=(x^4)\n")
    assert rc == 0 and out.splitlines()[0] == "tau = 3, certified at N=3"
    rc, out, _ = _run(capsys, ["separable"], tmp_path, FROBENIUS_FAMILY)
    assert out.splitlines()[0] == "INSEPARABLE at t-degree 5, class = x"
    rc, out, _ = _run(capsys, ["t1", "--group", "A"], tmp_path, "field Q\nvars x u\nmap c=(x^3+u*x, u)\n")
    assert out.splitlines()[0] == "dim 0 (jet-level; A-certificates unavailable)"


def test_exit_codes(capsys, tmp_path):
    rc, _, err = _run(capsys, ["separable"], tmp_path, "field Q\nvars x\nmap f=(x^3)\n")
    assert rc == 1 and "refused" in err
    rc, _, err = _run(capsys, ["t1"], tmp_path, "vars x\n")
    assert rc == 2 and "field must precede vars" in err


@pytest.mark.parametrize("cmd", ["t1", "tjurina", "versal", "rank", "stable", "genotype",
                                 "transversal", "myau-check", "fingerprint", "derval"])
def test_json_roundtrip_and_text_mirror(capsys, tmp_path, cmd):
    script = "field Q\nvars x y\nmap f=(x^3+y^3)\n"
    rc, out, _ = _run(capsys, [cmd, "--format", "json"], tmp_path, script)
    assert rc == 0
    assert render_json(json.loads(out)) == out.rstrip("\n")
    rc2, out2, _ = _run(capsys, [cmd, "--format", "json"], tmp_path, script)
    assert out2 == out
    rc, text, _ = _run(capsys, [cmd], tmp_path, script)
    rep = json.loads(out)
    assert text.splitlines()[0] == rep["summary"]
    for k in rep["result"]:
        assert "  %s:" % k in text


@pytest.mark.parametrize("cmd", ["trivial", "separable", "prenormal", "versal"])
def test_unfolding_commands(capsys, tmp_path, cmd):
    rc, out, _ = _run(capsys, [cmd, "--format", "json", "--log"], tmp_path, FROBENIUS_FAMILY)
    assert rc == 0
    assert render_json(json.loads(out)) == out.rstrip("\n")
