from __future__ import annotations

import argparse
import io
import subprocess
import sys

import pytest
from hypothesis import given, settings

from common import corpus, scripts
from gstrat.cli import ParseError, emit_dot, emit_json, evaluate, format_script, parse, read_json
from gstrat.cli.dsl import Call, IntLit, Let
from gstrat.cli.main import cmd_repl, main
from gstrat.strat import cone, circle, point


def run_cli(tmp_path, text, *flags):
    path = tmp_path / "script.strat"
    path.write_text(text, encoding="utf-8")
    proc = subprocess.run([sys.executable, "-m", "gstrat.cli.main", "eval", str(path), *flags],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


# ---------------------------------------------------------------- parsing


def test_parse_examples():
    s = parse("let X = cone(circle(4)); print depth(X);")
    assert len(s.statements) == 2
    assert s.statements[0] == Let("X", Call("cone", (Call("circle", (IntLit(4),)),)))
    nested = parse("let X = cone(rotsphere(4));\nprint iso(unfold(quotient(X,<2>)), quotient(unfold(X),<2>));")
    assert isinstance(nested.statements[1].expr, Call) and nested.statements[1].expr.name == "iso"


def test_parse_error_at_eof():
    with pytest.raises(ParseError) as info:
        parse("let X = cone(")
    err = info.value
    assert (err.span.line, err.span.col) == (1, 14)
    assert err.expected == {"expr"}


@pytest.mark.parametrize("text, fragment", [
    ("print depth(Y);", "unbound identifier 'Y'"),
    ("let X = point(); ", "unknown function 'point'"),
    ("let X = circle(2); let X = circle(3);", "already bound"),
    ("print circle(0);", "out of range"),
    ("print euclidean(-1);", "out of range"),
    ("print cone(circle(2), circle(2));", "takes 1 argument"),
    ("print quotient(circle(4), 2);", "subgroup literal"),
    ("print depth(circle(4))", "expected ';'"),
    ("emit svg circle(2);", "expected 'dot' | 'json'"),
    ("let cone = circle(2);", "reserved"),
    ("print $;", "unexpected character"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert fragment in str(info.value)


def test_spans_point_at_lines():
    with pytest.raises(ParseError) as info:
        parse("let X = circle(2);\n# comment\nprint depth(Z);")
    assert info.value.span.line == 3 and info.value.span.col == 13


@settings(max_examples=200)
@given(scripts())
def test_print_parse_round_trip(script):
    text = format_script(script)
    parsed = parse(text)
    assert parsed == script
    assert parse(format_script(parsed)) == parsed


# ---------------------------------------------------------------- evaluation


@pytest.mark.parametrize("text, expected", [
    ("print depth(cone(circle(4)));", "1"),
    ("print depth(quotient(cone(circle(4)), <2>));", "1"),
    ("print depth(unfold(cone(rotsphere(4))));", "1"),
])
def test_eval_examples(tmp_path, text, expected):
    assert evaluate(parse(text)) == [expected]
    code, out, err = run_cli(tmp_path, text)
    assert (code, out, err) == (0, expected + "\n", "")


def test_eval_iso_and_validate():
    out = evaluate(parse("let X = cone(rotsphere(4));\n"
                         "print iso(unfold(quotient(X,<2>)), quotient(unfold(X),<2>));\n"
                         "print iso(X, cone(rotsphere(2)));\n"
                         "print validate(X);"), samples=2000)
    assert out[0].startswith("isomorphic\nwitness: strata {")
    assert out[1] == "not isomorphic"
    assert out[2].startswith("valid\nthom-mather: pass (2000 samples")


def test_eval_product_and_quotient_shapes():
    out = evaluate(parse("print depth(product(euclidean(2), cone(rotsphere(3))));"
                         "print product(euclidean(1), euclidean(2));"
                         "print depth(unfold_all(cone(rotsphere(2))));"
                         "print quotient(product(euclidean(0), rotsphere(6)), <(3)>);"
                         "print unfold_all(cone(rotsphere(2)));"))
    assert out[0] == "2"
    assert "e: dim 3" in out[1]
    assert out[2] == "0"
    assert "space over Z3" in out[3]
    assert out[4].endswith("provenance: cT<-cT")


def test_eval_errors(tmp_path):
    code, out, err = run_cli(tmp_path, "print depth(circle(2));\nprint cone(euclidean(1));")
    assert code == 1 and out == "0\n" and "2:7: error: cone over a non-compact space" in err
    code, _, err = run_cli(tmp_path, "print product(circle(2), circle(3));")
    assert code == 1 and "trivial action" in err
    code, _, err = run_cli(tmp_path, "print quotient(circle(4), <(1,0)>);")
    assert code == 1 and "rank" in err
    code, _, err = run_cli(tmp_path, "print cone(depth(circle(2)));")
    assert code == 1 and "expected a space" in err
    code, out, err = run_cli(tmp_path, "let X = cone(")
    assert code == 2 and out == "" and "syntax error" in err


def test_check_and_out_flags(tmp_path, capsys):
    path = tmp_path / "s.strat"
    path.write_text("let X = cone(circle(4)); emit dot X;", encoding="utf-8")
    assert main(["check", str(path)]) == 0
    assert "ok: 2 statement(s)" in capsys.readouterr().out
    target = tmp_path / "out.dot"
    assert main(["eval", str(path), "--out", str(target)]) == 0
    assert target.read_text().startswith("digraph strat {")
    (tmp_path / "bad.strat").write_text("print (", encoding="utf-8")
    assert main(["check", str(tmp_path / "bad.strat")]) == 2


def test_emit_flag_renders_printed_spaces(tmp_path):
    code, out, _ = run_cli(tmp_path, "print cone(circle(2)); print depth(circle(2));", "--emit", "json")
    assert code == 0
    body, last = out.rsplit("}\n", 1)
    assert read_json(body + "}\n") == cone(circle(2))
    assert last == "0\n"


def test_repl_reads_statements_across_lines():
    args = argparse.Namespace(samples=0, seed=0, emit=None)
    out = io.StringIO()
    stdin = io.StringIO("let X = cone(\n  circle(4));\nprint depth(X);\nprint depth(Y);\nprint depth(X);\n")
    status = cmd_repl(args, out, stdin)
    assert out.getvalue() == "1\n1\n"
    assert status == 2  # the unbound Y is reported, evaluation continues


def test_deterministic_output(tmp_path):
    text = "let X = cone(rotsphere(4)); print validate(X); emit json X; emit dot unfold(X);"
    runs = [run_cli(tmp_path, text, "--samples", "500", "--seed", "3") for _ in range(2)]
    assert runs[0] == runs[1] and runs[0][0] == 0


# ---------------------------------------------------------------- emitters


def _dot_counts(text):
    lines = [l.strip() for l in text.splitlines()]
    top = []
    depth = 0
    for l in lines:
        if l.startswith("subgraph"):
            depth += 1
        elif l == "}":
            depth -= 1
        elif depth == 0:
            top.append(l)
    nodes = [l for l in top if "[label=" in l]
    edges = [l for l in top if "->" in l]
    return len(nodes), len(edges)


def test_dot_examples():
    assert _dot_counts(emit_dot(point())) == (1, 0)
    text = emit_dot(cone(circle(4)))
    assert _dot_counts(text) == (2, 1)
    assert '"v" [label="v|0|4"]' in text and '"co" [label="co|2|1"]' in text
    assert 'subgraph "cluster_v/"' in text
    assert "subgraph" not in emit_dot(cone(circle(4)), links=False)


def test_json_round_trip_on_corpus():
    for entry in corpus():
        text = emit_json(entry.space)
        back = read_json(text)
        assert back == entry.space
        assert emit_json(back) == text


def test_repl_status_is_worst_seen():
    args = argparse.Namespace(samples=0, seed=0, emit=None)
    stdin = io.StringIO("print (;\nprint cone(euclidean(1));\nprint depth(circle(2));\n")
    assert cmd_repl(args, io.StringIO(), stdin) == 2
    stdin = io.StringIO("print cone(euclidean(1));\nprint depth(circle(2));\n")
    out = io.StringIO()
    assert cmd_repl(args, out, stdin) == 1 and out.getvalue() == "0\n"
