import pytest

from oracles import stable_lexicographic_sort
from tabled import ops
from tabled.contracts import ensure_mode, ensures
from tabled.errors import ContractViolation, EnsureViolation, Kind
from tabled.model import BOOLEAN, COLNAME, MISSING, NUMBER, STRING, ColName, Schema, TableSort, validate_table


def students():
    schema = Schema.of(("name", STRING), ("age", NUMBER), ("favorite color", STRING))
    return validate_table(schema, [["Bob", 12, "blue"], ["Alice", 17, "green"], ["Eve", 13, "red"]])


def kind_of(fn, *args):
    with pytest.raises(ContractViolation) as info:
        fn(*args)
    return info.value.kind


def test_add_column_hair_color():
    with ensure_mode():
        t = ops.add_column(students(), "hair-color", ["brown", "red", "blonde"])
    assert t.header == ("name", "age", "favorite color", "hair-color")
    assert t.column("hair-color") == ("brown", "red", "blonde")
    assert t.schema["hair-color"].sort == STRING


def test_add_column_requires():
    assert kind_of(ops.add_column, students(), "age", [1, 2, 3]) is Kind.DUPLICATE_COLUMN
    assert kind_of(ops.add_column, students(), "x", [1, 2]) is Kind.LENGTH_MISMATCH
    assert kind_of(ops.add_column, students(), "x", [1, "a", 2]) is Kind.SORT_MISMATCH


def test_add_column_with_missing_is_optional():
    t = ops.add_column(students(), "score", [1, MISSING, 3])
    assert t.schema["score"].optional


def test_build_column_passes_rows_in_order():
    seen = []

    def f(r):
        seen.append(r["name"])
        return r["age"] + 1

    t = ops.build_column(students(), "next", f)
    assert seen == ["Bob", "Alice", "Eve"]
    assert t.column("next") == (13, 18, 14)


def test_select_rows_by_index_and_mask():
    t = students()
    assert ops.select_rows(t, [2, 0]).column("name") == ("Eve", "Bob")
    assert ops.select_rows(t, [True, False, True]).column("name") == ("Bob", "Eve")
    assert kind_of(ops.select_rows, t, [3]) is Kind.ROW_INDEX_OUT_OF_BOUNDS
    assert kind_of(ops.select_rows, t, [0.5]) is Kind.NON_INTEGRAL_INDEX
    assert kind_of(ops.select_rows, t, [True]) is Kind.LENGTH_MISMATCH


def test_select_and_drop_columns():
    t = students()
    assert ops.select_columns(t, ["age", "name"]).header == ("age", "name")
    assert ops.drop_columns(t, ["age"]).header == ("name", "favorite color")
    assert kind_of(ops.select_columns, t, ["agee"]) is Kind.UNKNOWN_COLUMN
    assert kind_of(ops.select_columns, t, ["age", "age"]) is Kind.DUPLICATE_COLUMN
    assert ops.select_columns(t, [ColName("name")]).header == ("name",)


def test_head():
    t = students()
    assert ops.head(t, 2).column("name") == ("Bob", "Alice")
    assert ops.head(t, 0).nrows == 0
    assert kind_of(ops.head, t, -1) is Kind.HEAD_OUT_OF_RANGE
    assert kind_of(ops.head, t, 4) is Kind.HEAD_OUT_OF_RANGE


def test_tsort():
    t = students()
    assert ops.tsort(t, "age", True).column("name") == ("Bob", "Eve", "Alice")
    assert ops.tsort(t, "age", False).column("name") == ("Alice", "Eve", "Bob")
    assert ops.tsort(t, "name", True).column("name") == ("Alice", "Bob", "Eve")


def test_order_by_matches_insertion_sort():
    schema = Schema.of(("k", NUMBER), ("s", STRING))
    t = validate_table(schema, [[2, "b"], [1, "z"], [2, "a"], [1, "a"], [2, "b"]])
    spec = [(lambda r: r["k"], lambda a, b: a < b), (lambda r: r["s"], lambda a, b: b < a)]
    got = ops.order_by(t, spec)
    rows = [dict(zip(t.header, row)) for row in t.rows]
    want = stable_lexicographic_sort(rows, [(lambda r: r["k"], spec[0][1]), (lambda r: r["s"], spec[1][1])])
    assert [dict(zip(got.header, row)) for row in got.rows] == want


def test_order_by_rejects_bad_comparators():
    t = students()
    assert kind_of(ops.order_by, t, []) is Kind.EMPTY_SPEC
    both = [(lambda r: r["age"], lambda a, b: True)]
    assert kind_of(ops.order_by, t, both) is Kind.INVALID_COMPARATOR


def test_vcat_hcat():
    t = students()
    assert ops.vcat(t, t).nrows == 6
    other = validate_table(Schema.of(("x", NUMBER)), [[1], [2], [3]])
    assert ops.hcat(t, other).header == t.header + ("x",)
    assert kind_of(ops.vcat, t, other) is Kind.SCHEMA_MISMATCH
    assert kind_of(ops.hcat, t, t) is Kind.DUPLICATE_COLUMN
    assert kind_of(ops.hcat, t, ops.head(other, 2)) is Kind.LENGTH_MISMATCH


def test_left_join_keeps_every_left_row():
    emp = validate_table(
        Schema.of(("name", STRING), ("dept", NUMBER)), [["A", 1], ["B", 2], ["C", 9]]
    )
    dept = validate_table(Schema.of(("dept", NUMBER), ("name", STRING)), [[1, "Ops"], [2, "Dev"]])
    with ensure_mode():
        t = ops.left_join(emp, dept, "dept")
    assert t.header == ("name", "dept", "name_2")
    assert t.column("name_2") == ("Ops", "Dev", MISSING)
    assert t.schema["name_2"].optional
    dup = ops.vcat(dept, dept)
    assert kind_of(ops.left_join, emp, dup, "dept") is Kind.DUPLICATE_RIGHT_KEY


def test_join_header_bumps_suffix():
    assert ops.join_header(["a", "b", "b_2"], ["k", "b"], "k") == [("b", "b_3")]


def test_pivot_longer_and_wider():
    t = validate_table(Schema.of(("id", STRING), ("q1", NUMBER), ("q2", NUMBER)), [["a", 1, 2], ["b", 3, 4]])
    long = ops.pivot_longer(t, ["q1", "q2"], "quiz", "score")
    assert long.header == ("id", "quiz", "score")
    assert long.schema["quiz"].sort == COLNAME
    assert long.nrows == 4
    assert ops.pivot_wider(long, "quiz", "score") == t


def test_pivot_wider_fills_gaps_with_missing():
    t = validate_table(
        Schema.of(("id", STRING), ("k", STRING), ("v", NUMBER)), [["a", "x", 1], ["a", "y", 2], ["b", "x", 3]]
    )
    w = ops.pivot_wider(t, "k", "v")
    assert w.column("y") == (2, MISSING)
    assert w.schema["y"].optional and not w.schema["x"].optional
    clash = ops.vcat(t, ops.head(t, 1))
    assert kind_of(ops.pivot_wider, clash, "k", "v") is Kind.DUPLICATE_COMBINATION


def test_group_by_variants():
    t = students()
    retained = ops.group_by_retentive(t, "favorite color")
    assert retained.header == ("key", "groups")
    assert retained.schema["groups"].sort == TableSort(t.schema)
    dropped = ops.group_by_subtractive(t, "favorite color")
    assert dropped.column("groups")[0].header == ("name", "age")


def test_dot_product():
    t = validate_table(Schema.of(("a", NUMBER), ("b", NUMBER, True)), [[1, 2], [3, 4]])
    assert ops.dot_product(t, "a", "b") == 14
    gap = validate_table(t.schema, [[1, MISSING]])
    assert kind_of(ops.dot_product, gap, "a", "b") is Kind.MISSING_CELL
    flags = validate_table(Schema.of(("f", BOOLEAN)), [[True]])
    assert kind_of(ops.dot_product, flags, "f", "f") is Kind.SORT_MISMATCH


def test_ensures_only_checked_in_ensure_mode():
    @ensures(lambda out, x: None if out == x else "changed")
    def ident(x):
        return x + 1

    assert ident(1) == 2
    with ensure_mode(), pytest.raises(EnsureViolation):
        ident(1)
