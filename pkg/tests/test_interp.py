import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import run_source
from tabled.checker.types import TableType
from tabled.interp import EvalConfig
from tabled.model import NUMBER, Schema
from tabled.pipeline import check_source, run_checked
from tabled.stats import MODULUS


def out(source, tables=None, **kw):
    checked, ran = run_source(source, tables, **kw)
    assert checked.ok, [d.message for d in checked.diagnostics]
    assert ran.error is None, ran.error.message
    return ran.output


def failure(source, tables=None):
    _, ran = run_source(source, tables)
    assert ran.error is not None
    return ran.error


@pytest.mark.parametrize(
    "source, text",
    [
        ('println("a" ++ "b")\n', "ab\n"),
        ("println(3 / 4)\n", "0.75\n"),
        ("println(-2 * 3)\n", "-6\n"),
        ("println([1, 2] ++ [3])\n", "[1, 2, 3]\n"),
        ("println(true and false or true)\n", "true\n"),
        ('println(nameSplit("a_b", "_"))\n', "[a, b]\n"),
        ("println(range(3))\n", "[0, 1, 2]\n"),
        ('println(if 1 < 2:\n  "a"\nelse:\n  "b"\nend)\n', "a\n"),
    ],
)
def test_expressions(source, text):
    assert out(source) == text


def test_function_locals_do_not_leak():
    src = "x = 1\nf =\n  function():\n    x = 5\n    x\n  end\nprintln(f())\nprintln(x)\n"
    assert out(src) == "5\n1\n"


def test_loops_update_outer_bindings():
    assert out("x = 1\nfor i in [1, 2]:\n  x = x + i\nend\nprintln(x)\n") == "4\n"


def test_loop_locals_are_block_scoped():
    checked, _ = run_source("for i in [1, 2]:\n  y = i\nend\nprintln(y)\n")
    assert "UnboundName" in [d.category for d in checked.diagnostics]


def test_row_prints_as_one_row_table(tables):
    text = out("println(getRow(students, 0))\n", tables)
    assert text == 'table:\n  "name": String | "age": Number | "favorite color": String\n  "Bob" | 12 | "blue"\nend\n'


def test_missing_cells_are_guarded(tables):
    src = 'r = getRow(gradebookMissing, 2)\nprintln(isMissing(r["quiz1"]))\nprintln(withDefault(r["quiz1"], 0))\n'
    assert out(src, tables) == "true\n0\n"


def test_runtime_error_names_the_builtin(tables):
    err = failure("println(getRow(students, 5))\n", tables)
    assert err.category == "RowIndexOutOfBounds"
    assert err.message.endswith("(in getRow)")


def test_runtime_error_inside_callback_has_trace(tables):
    src = 't = buildColumn(gradebookMissing, "x", function(r):\n  r["quiz1"] + 1\nend)\n'
    checked = check_source(src, "<test>", tables)
    ran = run_checked(checked, tables, EvalConfig(True, 42, io.StringIO()))
    assert ran.error.category == "ContractViolation(MissingCell)"
    assert "the function passed to buildColumn called with 1 argument" in ran.error.message
    assert "(" in ran.error.message and ran.error.message.endswith("in buildColumn)")


def test_output_before_failure_is_kept(tables):
    _, ran = run_source('println("before")\nprintln(head(students, -1))\n', tables)
    assert ran.output == "before\n"
    assert ran.error.category == "ContractViolation(HeadOutOfRange)"


def test_division_by_zero():
    assert failure("println(1 / 0)\n").category == "ContractViolation(DivisionByZero)"


def test_arity_message_pluralizes():
    err = failure("f =\n  function(a):\n    a + 1\n  end\nprintln(f(1, 2))\n")
    assert err.message == "f takes 1 argument, got 2"


def test_ensure_mode_catches_a_wrong_prediction(tables):
    src = 't = selectColumns(students, ["age"])\n'
    checked = check_source(src, "<test>", tables)
    call = checked.program.body[0].value
    checked.result.predicted[id(call)] = {TableType.from_schema(Schema.of(("years", NUMBER)))}
    ran = run_checked(checked, tables, EvalConfig(True, 42, io.StringIO()))
    assert ran.error.category == "ContractViolation(EnsureViolation)"
    # the same program runs when the re-check is off
    assert run_checked(checked, tables, EvalConfig(False, 42, io.StringIO())).error is None


def test_ensure_mode_agrees_with_checker_on_corpus(corpus, tables):
    for e in corpus:
        if e.kind == "program":
            assert out(e.path.read_text(encoding="utf-8"), tables, ensure=True) == e.output.read_text(encoding="utf-8")


@given(st.integers(1, MODULUS - 1))
def test_config_seed_is_the_default_sample_seed(tables, seed):
    implicit = out("println(sampleRows(gradebook, 2))\n", tables, seed=seed)
    explicit = out(f"println(sampleRows(gradebook, 2, {seed}))\n", tables, seed=7)
    assert implicit == explicit


@pytest.mark.parametrize("bad", [0, MODULUS, -1])
def test_config_rejects_bad_seeds(bad):
    with pytest.raises(ValueError):
        EvalConfig(seed=bad)

