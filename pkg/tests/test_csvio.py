import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import tables
from tabled.csvio import CsvError, import_csv, import_csv_file, infer_column, load_schema, table_to_literal
from tabled.errors import BenchError
from tabled.model import BOOLEAN, NUMBER, STRING
from tabled.pipeline import load_table

GRADEBOOK_MISSING_CSV = (
    "name,age,quiz1,quiz2,midterm,quiz3,quiz4,final\n"
    "Bob,12,8,9,77,7,9,87\n"
    "Alice,17,6,8,88,,7,85\n"
    "Eve,13,,9,84,8,8,77\n"
)


def problems(text, schema=None):
    with pytest.raises(CsvError) as info:
        import_csv(text, "f.csv", load_schema(schema) if schema else None)
    return [(d.category, d.span.start_line, d.span.start_col) for d in info.value.diagnostics]


def test_gradebook_missing_round_trip(tables):
    t = import_csv(GRADEBOOK_MISSING_CSV)
    assert t == tables["gradebookMissing"]
    assert t.missing_cells() == [("quiz3", 1), ("quiz1", 2)]


def test_literal_output_reloads(tmp_path):
    t = import_csv(GRADEBOOK_MISSING_CSV)
    path = tmp_path / "g.tbl"
    path.write_text(table_to_literal(t), encoding="utf-8")
    assert load_table(path) == t


def test_import_from_file_with_sidecar(tmp_path):
    (tmp_path / "g.csv").write_text(GRADEBOOK_MISSING_CSV, encoding="utf-8")
    header = "name: String | age: Number | quiz1: Number? | quiz2: Number | midterm: Number | quiz3: Number? | quiz4: Number | final: Number"
    (tmp_path / "g.schema").write_text(header + "\n", encoding="utf-8")
    assert import_csv_file(tmp_path / "g.csv", tmp_path / "g.schema") == import_csv(GRADEBOOK_MISSING_CSV)


@pytest.mark.parametrize(
    "values, sort, optional",
    [
        (["1", "2", ""], NUMBER, True),
        (["true", ""], BOOLEAN, True),
        (["1", "x"], STRING, False),
        (["-1.5", "2e3"], NUMBER, False),
    ],
)
def test_inference(values, sort, optional):
    assert infer_column(values) == (sort, optional)


def test_quoted_fields():
    t = import_csv('a,b\n"x,y",2\n"say ""hi""",3\n')
    assert t.column("a") == ("x,y", 'say "hi"')


def test_blank_lines_are_skipped():
    assert import_csv("a\n1\n\n2\n").column("a") == (1, 2)


@pytest.mark.parametrize(
    "text, schema, expected",
    [
        ("a,a\n1,2\n", None, [("DuplicateColumn", 1, 3)]),
        ("a,b\n1\n", None, [("RaggedRow", 2, 1)]),
        ("a\n1\nx\n", "a: Number", [("SortMismatch", 3, 1)]),
        ("a,b\n1,\n", "a: Number | b: Number", [("IllegalMissing", 2, 3)]),
        ("b,a\n1,2\n", "a: Number | b: Number", [("SortMismatch", 1, 1)]),
        (",b\n1,2\n", None, [("ContractViolation(EmptyName)", 1, 1)]),
        ("", None, [("ParseError", 1, 1)]),
        ('a\n"x\n', None, [("ParseError", 1, 1)]),
    ],
)
def test_located_problems(text, schema, expected):
    assert problems(text, schema) == expected


def test_every_bad_field_is_reported():
    assert problems("a,b\nx,1\n2,y\n", "a: Number | b: Number") == [("SortMismatch", 2, 1), ("SortMismatch", 3, 3)]


def test_ragged_message_counts_fields():
    with pytest.raises(CsvError) as info:
        import_csv("a,b\n1\n")
    assert "record has 1 field but" in info.value.diagnostics[0].message


def test_schema_rejects_sequences():
    with pytest.raises(BenchError):
        load_schema("xs: Seq<Number>")


def _csv_field(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return '"' + v.replace('"', '""') + '"'


@given(tables(min_cols=1, max_cols=4, max_rows=6, optional=False), st.data())
def test_csv_round_trip_with_schema(t, data):
    # plain sorts only: Number, String, Boolean
    if any(c.sort not in (NUMBER, STRING, BOOLEAN) for c in t.schema.columns):
        return
    if any(v == "" for row in t.rows for v in row if isinstance(v, str)):
        return  # an empty string field reads back as a missing cell
    header = ",".join('"' + n.replace('"', '""') + '"' for n in t.header)
    lines = [header] + [",".join(_csv_field(v) for v in row) for row in t.rows]
    schema = " | ".join(f"{c.name}: {c.sort}" for c in t.schema.columns)
    try:
        parsed = load_schema(schema)
    except BenchError:
        return  # names the header syntax cannot spell
    assert import_csv("\n".join(lines) + "\n", "<g>", parsed) == t
