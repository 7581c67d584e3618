"""Table API laws as plain functions of (table, rng), plus a seeded table corpus.

Each law raises AssertionError on a breach. They are driven both by
hypothesis (for shrinking) and by a fixed corpus of 1000 tables.
"""

import random
from collections import Counter

from oracles import stable_lexicographic_sort
from tabled import ops
from tabled.contracts import ensure_mode
from tabled.model import BOOLEAN, MISSING, NUMBER, STRING, Column, Schema, Table, validate_table

NAMES = ["a", "b", "c", "d", "e", "f", "g", "h"]
SORTS = [NUMBER, STRING, BOOLEAN]
MAX_COLS, MAX_ROWS = 6, 8
CORPUS_SIZE = 1000
CORPUS_SEED = 20240


def random_value(rng, sort):
    if sort == NUMBER:
        return rng.choice([float(rng.randint(-5, 5)), 0.5, -1.25, 2.5])
    if sort == STRING:
        return rng.choice(["", "x", "y", "zz", "x y"])
    return rng.random() < 0.5


def random_schema(rng, min_cols=0, optional=True):
    n = rng.randint(min_cols, MAX_COLS)
    names = rng.sample(NAMES, n)
    return Schema(tuple(Column(x, rng.choice(SORTS), optional and rng.random() < 0.3) for x in names))


def random_rows(rng, schema, n):
    rows = []
    for _ in range(n):
        rows.append(tuple(
            MISSING if c.optional and rng.random() < 0.25 else random_value(rng, c.sort) for c in schema.columns
        ))
    return tuple(rows)


def random_table(rng, min_cols=0, optional=True):
    schema = random_schema(rng, min_cols, optional)
    return Table(schema, random_rows(rng, schema, rng.randint(0, MAX_ROWS)))


def table_corpus(n=CORPUS_SIZE, seed=CORPUS_SEED):
    rng = random.Random(seed)
    return [random_table(rng) for _ in range(n)]


def _revalidates(t):
    assert validate_table(t.schema, t.rows) == t


def _subset(rng, xs):
    xs = list(xs)
    rng.shuffle(xs)
    return xs[: rng.randint(0, len(xs))]


def _indices(rng, t):
    return [rng.randrange(t.nrows) for _ in range(rng.randint(0, 8))] if t.nrows else []


def _complete_columns(t):
    return [c.name for c in t.schema.columns if MISSING not in t.column(c.name)]


def _key_columns(t):
    return [c.name for c in t.schema.columns if not c.optional]


# ---------------------------------------------------------------------------
# laws
# ---------------------------------------------------------------------------


def random_call(t, rng):
    """One well-formed Table API call on ``t``."""
    fresh = "z"
    ops_ = ["addColumn", "buildColumn", "selectRows", "selectMask", "selectColumns", "dropColumns", "head",
            "orderBy", "vcat", "hcat", "leftJoin"]
    if _complete_columns(t):
        ops_.append("tsort")
    if t.header:
        ops_.append("pivotLonger")
    if _key_columns(t):
        ops_ += ["groupByRetentive", "groupBySubtractive"]
    choice = rng.choice(ops_)
    if choice == "addColumn":
        sort = rng.choice(SORTS)
        return ops.add_column(t, fresh, [MISSING if rng.random() < 0.2 else random_value(rng, sort)
                                         for _ in range(t.nrows)])
    if choice == "buildColumn":
        return ops.build_column(t, fresh, lambda r: float(len(r.header)))
    if choice == "selectRows":
        return ops.select_rows_by_index(t, _indices(rng, t))
    if choice == "selectMask":
        return ops.select_rows_by_mask(t, [rng.random() < 0.5 for _ in range(t.nrows)])
    if choice == "selectColumns":
        return ops.select_columns(t, _subset(rng, t.header))
    if choice == "dropColumns":
        return ops.drop_columns(t, _subset(rng, t.header))
    if choice == "head":
        return ops.head(t, rng.randint(0, t.nrows))
    if choice == "tsort":
        return ops.tsort(t, rng.choice(_complete_columns(t)), rng.random() < 0.5)
    if choice == "orderBy":
        return ops.order_by(t, [(lambda r: float(len(r.header)), lambda a, b: a < b)])
    if choice == "vcat":
        return ops.vcat(t, Table(t.schema, random_rows(rng, t.schema, rng.randint(0, MAX_ROWS))))
    if choice == "hcat":
        extra = Schema((Column(fresh, NUMBER),))
        return ops.hcat(t, Table(extra, random_rows(rng, extra, t.nrows)))
    if choice == "leftJoin":
        key = Column("zk", NUMBER)
        left = ops.hcat(t, validate_table(Schema((key,)), [[float(rng.randint(0, 6))] for _ in range(t.nrows)]))
        right_keys = rng.sample(range(5), rng.randint(0, 5))
        right = validate_table(Schema((key, Column("a", STRING))), [[float(k), "r"] for k in right_keys])
        return ops.left_join(left, right, "zk")
    if choice == "pivotLonger":
        first = rng.choice(t.schema.columns)
        cs = [c.name for c in t.schema.columns if c.sort == first.sort]
        return ops.pivot_longer(t, cs, "zn", "zv")
    c = rng.choice(_key_columns(t))
    return (ops.group_by_retentive if choice == "groupByRetentive" else ops.group_by_subtractive)(t, c)


def law_output_validates(t, rng):
    with ensure_mode():
        out = random_call(t, rng)
    _revalidates(out)


def law_identities(t, rng):
    with ensure_mode():
        assert ops.select_rows_by_index(t, list(range(t.nrows))) == t
        assert ops.select_columns(t, list(t.header)) == t
        assert ops.head(t, t.nrows) == t


def law_select_commutes(t, rng):
    ns, cs = _indices(rng, t), _subset(rng, t.header)
    with ensure_mode():
        a = ops.select_columns(ops.select_rows_by_index(t, ns), cs)
        b = ops.select_rows_by_index(ops.select_columns(t, cs), ns)
    assert a == b


def _less(desc):
    return (lambda a, b: b < a) if desc else (lambda a, b: a < b)


def law_order_by_stable_permutation(t, rng):
    cols = _complete_columns(t)
    if not cols:
        return
    spec = [(rng.choice(cols), rng.random() < 0.5) for _ in range(rng.randint(1, 3))]
    pairs = [((lambda c: lambda r: r[c])(c), _less(desc)) for c, desc in spec]
    with ensure_mode():
        out = ops.order_by(t, pairs)
    assert Counter(out.rows) == Counter(t.rows)
    idx = {c: t.schema.index(c) for c in t.header}
    keys = [((lambda c: lambda x: x[1][idx[c]])(c), _less(desc)) for c, desc in spec]
    assert list(out.rows) == [row for _, row in stable_lexicographic_sort(list(enumerate(t.rows)), keys)]


def random_tidy(rng):
    """Complete table whose key columns identify rows and whose value columns share a sort."""
    nk, nv = rng.randint(1, 3), rng.randint(1, 3)
    names = rng.sample(NAMES, nk + nv)
    keys = [Column(n, rng.choice(SORTS)) for n in names[:nk]]
    vsort = rng.choice(SORTS)
    vals = [Column(n, vsort) for n in names[nk:]]
    seen, rows = set(), []
    for _ in range(rng.randint(1, MAX_ROWS)):
        k = tuple(random_value(rng, c.sort) for c in keys)
        if k not in seen:
            seen.add(k)
            rows.append(k + tuple(random_value(rng, vsort) for _ in vals))
    return Table(Schema(tuple(keys + vals)), tuple(rows)), [c.name for c in vals]


def law_pivot_round_trip(t, rng):
    tidy, cs = random_tidy(rng)
    with ensure_mode():
        long = ops.pivot_longer(tidy, cs, "name", "value")
        back = ops.pivot_wider(long, "name", "value")
    assert long.nrows == tidy.nrows * len(cs)
    assert back == tidy


def law_group_by_partitions(t, rng):
    keys = _key_columns(t)
    if not keys:
        return
    c = rng.choice(keys)
    ki = t.schema.index(c)
    for retain in (True, False):
        with ensure_mode():
            g = ops.group_by_retentive(t, c) if retain else ops.group_by_subtractive(t, c)
        gkeys = list(g.column("key"))
        assert gkeys == list(dict.fromkeys(row[ki] for row in t.rows))
        rebuilt = []
        for k, sub in zip(gkeys, g.column("groups")):
            assert sub.nrows > 0
            for row in sub.rows:
                if retain:
                    assert row[ki] == k
                    rebuilt.append(row)
                else:
                    assert c not in sub.header
                    rebuilt.append(row[:ki] + (k,) + row[ki:])
        assert Counter(rebuilt) == Counter(t.rows)


def law_concat_counts(t, rng):
    other = Table(t.schema, random_rows(rng, t.schema, rng.randint(0, MAX_ROWS)))
    extra_schema = Schema((Column("z", BOOLEAN),))
    extra = Table(extra_schema, random_rows(rng, extra_schema, t.nrows))
    with ensure_mode():
        v = ops.vcat(t, other)
        h = ops.hcat(t, extra)
    assert (v.nrows, v.ncols) == (t.nrows + other.nrows, t.ncols)
    assert (h.nrows, h.ncols) == (t.nrows, t.ncols + 1)


LAWS = {
    "output validates": law_output_validates,
    "identity laws": law_identities,
    "selectRows/selectColumns commute": law_select_commutes,
    "orderBy stable permutation": law_order_by_stable_permutation,
    "pivotWider after pivotLonger": law_pivot_round_trip,
    "groupBy partition": law_group_by_partitions,
    "vcat/hcat counts": law_concat_counts,
}


def check_corpus(tables, seed=CORPUS_SEED):
    """Run every law on every table; returns {law: [failure messages]}."""
    failures = {name: [] for name in LAWS}
    for i, t in enumerate(tables):
        for name, law in LAWS.items():
            try:
                law(t, random.Random(f"{seed}:{i}:{name}"))
            except Exception as exc:  # report, do not stop the sweep
                failures[name].append(f"table {i}: {type(exc).__name__}: {exc}")
    return failures
