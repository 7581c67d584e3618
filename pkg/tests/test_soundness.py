import random

import pytest

from laws import table_corpus
from soundness import generate_program, is_unsound, soundness_sweep
from tabled.diagnostics import ERROR, Diagnostic
from tabled.errors import Kind, SourceSpan
from tabled.pipeline import check_source


@pytest.fixture(scope="module")
def report():
    return soundness_sweep(table_corpus())


def test_no_accepted_program_fails_on_columns_or_sorts(report):
    assert report.programs == 1000
    assert report.violations == []


def test_sweep_is_not_vacuous(report):
    # both outcomes must be well represented for the check to mean anything
    assert report.accepted > 300
    assert report.rejected > 100


def test_rejections_include_column_errors():
    seen = set()
    for i, t in enumerate(table_corpus(200)):
        source = generate_program(t, random.Random(f"r{i}"))
        checked = check_source(source, "<gen>", {"t": t})
        seen.update(d.category for d in checked.diagnostics if d.is_error)
    assert "UnknownColumn" in seen


def test_generator_is_deterministic():
    t = table_corpus(1)[0]
    assert generate_program(t, random.Random(3)) == generate_program(t, random.Random(3))


def test_is_unsound_looks_through_contract_wrapping():
    span = SourceSpan("<x>", 1, 1, 1, 2)
    assert is_unsound(Diagnostic(ERROR, Kind.CONTRACT_VIOLATION, span, "m", sub=Kind.UNKNOWN_COLUMN))
    assert not is_unsound(Diagnostic(ERROR, Kind.CONTRACT_VIOLATION, span, "m", sub=Kind.MISSING_CELL))
