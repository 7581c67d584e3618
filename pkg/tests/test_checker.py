import pytest

from tabled.checker.types import TableT
from tabled.pipeline import check_source


def check(source, tables):
    return check_source(source, "<test>", tables)


def cats(result, errors_only=True):
    return [d.category for d in result.diagnostics if d.is_error or not errors_only]


def table_type(result, name):
    t = result.result.bindings[name].type
    assert isinstance(t, TableT)
    return t.table


def test_corpus_programs_check_clean(corpus, tables):
    for e in corpus:
        if e.kind == "program":
            env = {t: tables[t] for t in e.tables}
            result = check(e.path.read_text(encoding="utf-8"), env)
            assert cats(result) == [], e.id


def test_add_column_extends_schema(tables):
    r = check('t = addColumn(students, "hair-color", ["brown", "red", "blonde"])\n', tables)
    assert r.ok
    tt = table_type(r, "t")
    assert tt.names == ("name", "age", "favorite color", "hair-color")
    assert str(tt["hair-color"].type) == "String"


def test_select_then_drop(tables):
    r = check('t = dropColumns(selectColumns(gradebook, ["name", "quiz1", "quiz2"]), ["quiz2"])\n', tables)
    assert table_type(r, "t").names == ("name", "quiz1")


def test_unknown_column_with_rename(tables):
    r = check('x = tsort(students, "agee", true)\n', tables)
    (d,) = r.result.errors
    assert d.category == "UnknownColumn"
    assert d.suggestions[0].text == "age"
    assert (d.span.start_line, d.span.start_col) == (1, 21)


def test_row_access_checked_inside_function(tables):
    src = 'f =\n  function(r):\n    r["agee"]\n  end\nt = buildColumn(students, "x", f)\n'
    r = check(src, tables)
    assert cats(r) == ["UnknownColumn"]


def test_arithmetic_on_string_column(tables):
    src = 't = buildColumn(students, "x", function(r):\n  r["name"] + 1\nend)\n'
    assert cats(check(src, tables)) == ["SortMismatch"]


def test_optional_column_needs_guard(tables):
    src = 't = buildColumn(gradebookMissing, "x", function(r):\n  r["quiz1"] + 1\nend)\n'
    assert cats(check(src, tables)) == ["SortMismatch"]
    guarded = 't = buildColumn(gradebookMissing, "x", function(r):\n  withDefault(r["quiz1"], 0) + 1\nend)\n'
    assert check(guarded, tables).ok


def test_dot_product_on_optional_column_warns(tables):
    r = check('println(dotProduct(gradebookMissing, "quiz1", "quiz2"))\n', tables)
    assert r.ok
    assert "PossiblyMissing" in cats(r, errors_only=False)


@pytest.mark.parametrize(
    "source, category",
    [
        ("println(nrows(students, 1))\n", "ArityMismatch"),
        ("println(nrows(5))\n", "NonTableArgument"),
        ("println(nosuch)\n", "UnboundName"),
        ('x = vcat(students, gradebook)\n', "SortMismatch"),
        ('x = addColumn(students, "age", [1, 2, 3])\n', "DuplicateColumn"),
        ('x = addColumn(students, "z", [1, 2])\n', "LengthMismatch"),
        ('x = selectColumns(students, ["name", "name"])\n', "DuplicateColumn"),
    ],
)
def test_static_errors(tables, source, category):
    assert category in cats(check(source, tables))


def test_table_literal_swap_is_reported_with_reorder():
    src = 't = table:\n  name: String | age: Number\n  12 | "Bob"\n  17 | "Alice"\nend\n'
    r = check(src, {})
    d = r.result.errors[0]
    assert d.category == "SortMismatch"
    assert d.suggestions[0].kind == "ReorderColumns"
    assert d.cell == (1, "name")


def test_manufactured_names_are_tracked(tables):
    src = (
        'names = []\nfor s in ["1", "2"]:\n  names = names ++ [nameAppend("quiz", s)]\nend\n'
        "t = selectColumns(gradebook, names)\n"
    )
    r = check(src, tables)
    assert r.ok
    assert table_type(r, "t").names == ("quiz1", "quiz2")


def test_manufactured_bad_name_is_caught(tables):
    src = 'c = nameAppend("quiz", "9")\nt = selectColumns(gradebook, [c])\n'
    assert cats(check(src, tables)) == ["UnknownColumn"]


def test_header_loop_with_prefix_filter(tables):
    src = (
        "qs = []\nfor c in header(gradebook):\n  if namePrefix(c, \"quiz\"):\n    qs = qs ++ [c]\n  end\nend\n"
        "t = selectColumns(gradebook, qs)\n"
    )
    r = check(src, tables)
    assert r.ok
    assert table_type(r, "t").names == ("quiz1", "quiz2", "quiz3", "quiz4")


def test_unused_local_warns(tables):
    src = "f =\n  function(t):\n    unused = 1\n    nrows(t)\n  end\nprintln(f(students))\n"
    assert "UnusedBinding" in cats(check(src, tables), errors_only=False)


def test_uncalled_function_warns():
    src = "f =\n  function(t):\n    nrows(t)\n  end\n"
    assert "UncheckedFunction" in cats(check(src, {}), errors_only=False)


def test_function_checked_per_call_site(tables):
    src = 'f =\n  function(t):\n    getColumn(t, "age")\n  end\nprintln(f(students))\nprintln(f(gradebook))\nprintln(f(employees))\n'
    r = check(src, tables)
    errs = r.result.errors
    assert [d.category for d in errs] == ["UnknownColumn"]
    assert errs[0].span.start_line == 3


def test_pivot_longer_names_are_colnames(tables):
    r = check('t = pivotLonger(gradebook, ["quiz1", "quiz2"], "quiz", "score")\n', tables)
    tt = table_type(r, "t")
    assert tt.names == ("name", "age", "midterm", "quiz3", "quiz4", "final", "quiz", "score")
    assert str(tt["quiz"].type) == "ColName"


def test_group_by_types_nested_table(tables):
    r = check('t = groupByRetentive(students, "favorite color")\n', tables)
    tt = table_type(r, "t")
    assert tt.names == ("key", "groups")
    assert isinstance(tt["groups"].type, TableT)
