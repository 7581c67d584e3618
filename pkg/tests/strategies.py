"""Hypothesis strategies for small random tables (at most 6 columns by 8 rows)."""

from hypothesis import strategies as st

from tabled.model import BOOLEAN, MISSING, NUMBER, STRING, Column, Schema, Table

NAMES = ["a", "b", "c", "d", "e", "f", "g", "h"]
SORTS = [NUMBER, STRING, BOOLEAN]

numbers = st.integers(-5, 5).map(float) | st.sampled_from([0.5, -1.25, 2.5])
strings = st.sampled_from(["", "x", "y", "zz", "x y"])
booleans = st.booleans()


def values_of(sort):
    return {NUMBER: numbers, STRING: strings, BOOLEAN: booleans}[sort]


@st.composite
def schemas(draw, min_cols=0, max_cols=6, optional=True):
    n = draw(st.integers(min_cols, max_cols))
    names = draw(st.permutations(NAMES).map(lambda p: p[:n]))
    cols = []
    for name in names:
        sort = draw(st.sampled_from(SORTS))
        opt = draw(st.booleans()) if optional else False
        cols.append(Column(name, sort, opt))
    return Schema(tuple(cols))


def cell(col):
    v = values_of(col.sort)
    return v | st.just(MISSING) if col.optional else v


@st.composite
def tables_of(draw, schema, min_rows=0, max_rows=8):
    n = draw(st.integers(min_rows, max_rows))
    rows = [tuple(draw(cell(c)) for c in schema.columns) for _ in range(n)]
    return Table(schema, tuple(rows))


@st.composite
def tables(draw, min_cols=0, max_cols=6, min_rows=0, max_rows=8, optional=True):
    schema = draw(schemas(min_cols, max_cols, optional))
    return draw(tables_of(schema, min_rows, max_rows))
