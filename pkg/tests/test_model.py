import pytest
from hypothesis import given

from strategies import tables
from tabled import model as M
from tabled.errors import CODES, BenchError, ColumnNameError, Kind, TableError
from tabled.model import BOOLEAN, COLNAME, MISSING, NOTHING, NUMBER, STRING, ColName, Schema, SeqSort, Table


def students():
    schema = Schema.of(("name", STRING), ("age", NUMBER), ("favorite color", STRING))
    return M.validate_table(schema, [["Bob", 12, "blue"], ["Alice", 17, "green"], ["Eve", 13, "red"]])


def test_students_shape():
    t = students()
    assert t.header == ("name", "age", "favorite color")
    assert (t.nrows, t.ncols) == (3, 3)
    assert t.column("age") == (12.0, 17.0, 13.0)
    assert M.get_row(t, 1)["name"] == "Alice"


def test_numbers_normalize_to_float():
    t = students()
    assert all(isinstance(v, float) for v in t.column("age"))


@pytest.mark.parametrize(
    "schema, rows, kind",
    [
        (Schema.of(("a", NUMBER), ("a", STRING)), [], Kind.DUPLICATE_COLUMN),
        (Schema.of(("", NUMBER)), [], Kind.EMPTY_NAME),
        (Schema.of(("a", NUMBER), ("b", NUMBER)), [[1]], Kind.RAGGED_ROW),
        (Schema.of(("a", NUMBER)), [[MISSING]], Kind.ILLEGAL_MISSING),
        (Schema.of(("a", NUMBER)), [["1"]], Kind.SORT_MISMATCH),
        (Schema.of(("a", BOOLEAN)), [[1]], Kind.SORT_MISMATCH),
        (Schema.of(("a", NUMBER)), [[True]], Kind.SORT_MISMATCH),
    ],
)
def test_validate_rejects(schema, rows, kind):
    with pytest.raises(TableError) as info:
        M.validate_table(schema, rows)
    assert info.value.kind is kind


def test_header_problems_reported_before_cells():
    schema = Schema.of(("a", NUMBER), ("a", NUMBER))
    with pytest.raises(TableError) as info:
        M.validate_table(schema, [["bad", MISSING]])
    assert info.value.kind is Kind.DUPLICATE_COLUMN


def test_missing_allowed_in_optional_column():
    t = M.validate_table(Schema.of(("a", NUMBER, True)), [[MISSING], [2]])
    assert t.missing_cells() == [("a", 0)]


def test_row_index_bounds():
    t = students()
    for bad in (-1, 3, 0.5):
        with pytest.raises(TableError) as info:
            M.get_row(t, bad)
        assert info.value.kind is Kind.ROW_INDEX_OUT_OF_BOUNDS


def test_unknown_column_on_row():
    with pytest.raises(TableError) as info:
        M.get_row(students(), 0)["agee"]
    assert info.value.kind is Kind.UNKNOWN_COLUMN


def test_colname_rules():
    assert M.name_append("quiz", "1") == ColName("quiz1")
    assert M.name_split("a_b_c", "_") == ["a", "b", "c"]
    assert M.name_prefix(ColName("quiz3"), "quiz")
    assert not M.name_prefix("midterm", "quiz")
    with pytest.raises(ColumnNameError):
        ColName("")
    with pytest.raises(ColumnNameError) as info:
        M.name_split("a", "")
    assert info.value.kind is Kind.EMPTY_SEPARATOR


def test_join_sorts():
    assert M.join_sorts(NOTHING, NUMBER) == NUMBER
    assert M.join_sorts(STRING, COLNAME) == COLNAME
    assert M.join_sorts(NUMBER, STRING) is None
    assert M.join_sorts(SeqSort(NOTHING), SeqSort(BOOLEAN)) == SeqSort(BOOLEAN)


def test_sort_of_elements():
    assert M.sort_of_elements([]) == NOTHING
    assert M.sort_of_elements([MISSING, 1, 2.5]) == NUMBER
    with pytest.raises(TypeError):
        M.sort_of_elements([1, "x"])


@pytest.mark.parametrize("x, text", [(3.0, "3"), (8.25, "8.25"), (-0.5, "-0.5"), (2.0**53 - 1, "9007199254740991"), (1e20, "1e+20")])
def test_format_number(x, text):
    assert M.format_number(x) == text


def test_codes_are_stable_and_unique():
    assert len(set(CODES.values())) == len(CODES)
    assert CODES[Kind.UNKNOWN_COLUMN] == "E001"
    assert CODES[Kind.UNRESOLVED_NAME] == "E017"
    assert CODES[Kind.UNCHECKED_FUNCTION] == "W003"


def test_errors_carry_span_and_trace():
    err = TableError(Kind.SORT_MISMATCH, "bad cell", c=1)
    assert isinstance(err, BenchError)
    assert err.details["c"] == 1
    assert err.trace == []


@given(tables())
def test_random_tables_revalidate(t):
    again = M.validate_table(t.schema, t.rows)
    assert again == t
    assert all(len(row) == t.ncols for row in t.rows)


@given(tables())
def test_tables_are_hashable_values(t):
    assert Table(t.schema, t.rows) == t
    assert hash(Table(t.schema, t.rows)) == hash(t)
