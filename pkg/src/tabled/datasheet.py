"""Markdown datasheet: the standard questions, with answers filled in where the
corpus and the operation table make them mechanical. Everything else is left
as a TODO for a person to write."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Optional

from .harness import ConformanceReport, CorpusEntry
from .signatures import SIGNATURES

TODO = "_TODO_"

REFERENCE = "Reference"
TABLES = "Example Tables"
API = "TableAPI"
PROGRAMS = "Example Programs"
ERRORS = "Errors"


@dataclass(frozen=True)
class Section:
    title: str
    questions: tuple[str, ...]
    preamble: str = ""
    # questions before this index come before the interlude
    interlude_at: Optional[int] = None
    interlude: str = ""


OUTCOMES = (
    "isn't expressive enough to capture it",
    "can at least partially express the situation",
    "prevents the program from being constructed",
)
ARTIFACTS = (
    "the buggy versions of the programs",
    "the correct variants of the programs",
    "the type system's representation of the constraints",
    "the type system's reporting of the violation",
)

SECTIONS = (
    Section(
        REFERENCE,
        (
            "What is the URL of the version of the benchmark being used?",
            "On what date was this version of the datasheet last updated?",
            "If you are not using the latest benchmark available on that date, please explain why not.",
        ),
    ),
    Section(
        TABLES,
        (
            "Do tables express heterogeneous data, or must data be homogenized?",
            "Do tables capture missing data and, if so, how?",
            "Are mutable tables supported? Are there any limitations?",
            "Which tables are inexpressible? Why?",
            "Which tables are only partially expressible? Why, and what's missing?",
            "Which tables' expressibility is unknown? Why?",
            "Which tables can be expressed more precisely than in the benchmark? How?",
            "How direct is the mapping from the tables in the benchmark to representations in your system? "
            "How complex is the encoding?",
        ),
        interlude_at=3,
        interlude="You may reference, instead of duplicating, the responses to the above questions "
        "in answering those below:",
    ),
    Section(
        API,
        (
            "Are there consistent changes made to the way the operations are represented?",
            "Which operations are entirely inexpressible? Why?",
            "Which operations are only partially expressible? Why, and what's missing?",
            "Which operations' expressibility is unknown? Why?",
            "Which operations can be expressed more precisely than in the benchmark? How?",
        ),
    ),
    Section(
        PROGRAMS,
        (
            "Which examples are inexpressible? Why?",
            "Which examples' expressibility is unknown? Why?",
            "Which examples, or aspects thereof, can be expressed especially precisely? How?",
            "How direct is the mapping from the pseudocode in the benchmark to representations in your system? "
            "How complex is the encoding?",
        ),
    ),
    Section(
        ERRORS,
        (
            "Which error situations are known to be inexpressible? Why?",
            "Which error situations are only partially expressible? Why, and what's missing?",
            "Which error situations' expressibility is unknown? Why?",
            "Which error situations can be expressed more precisely than in the benchmark? How?",
            "Which error situations are prevented from being constructed? How?",
            "For each error situation that is at least partially expressible, what is the quality of feedback "
            "to the programmer?",
            "For each error situation that is prevented from being constructed, what is the quality of feedback "
            "to the programmer?",
        ),
        preamble="There are (at least) two parts to errors: representing the source program that causes the "
        "error, and generating output that explains it. The term “error situation” refers to a "
        "representation of the cause of the error in the program source.\n\n"
        "For each error situation it may be that the language:\n\n"
        + "\n".join(f"- *{o}*" for o in OUTCOMES)
        + "\n\nExpressiveness, in turn, can be for multiple artifacts:\n\n"
        + "\n".join(f"- *{a}*" for a in ARTIFACTS),
    ),
)


def all_questions() -> list[str]:
    return [q for s in SECTIONS for q in s.questions]


# --------------------------------------------------------------------------
# generated answers
# --------------------------------------------------------------------------


def _ids(results, kind: str, passed: bool) -> list[str]:
    return [r.id for r in results if r.kind == kind and r.passed == passed]


def _list_or_none(ids: list[str]) -> str:
    return ", ".join(f"`{i}`" for i in ids) if ids else "None."


def _table_appendix(entries: list[CorpusEntry], report: ConformanceReport) -> str:
    status = {r.id: r.passed for r in report.results}
    lines = ["| table | rows | schema | loads |", "| --- | --- | --- | --- |"]
    for e in entries:
        if e.kind == "table":
            lines.append(f"| `{e.id}` | {e.nrows} | {'; '.join(e.schema)} | {'yes' if status.get(e.id) else 'no'} |")
    return "\n".join(lines)


def _api_appendix() -> str:
    lines = ["| operation | signature |", "| --- | --- |"]
    for sig in SIGNATURES.values():
        if sig.table_api:
            lines.append(f"| `{sig.name}` | `{sig.text}` |")
    return "\n".join(lines)


def _program_appendix(entries: list[CorpusEntry], report: ConformanceReport) -> str:
    status = {r.id: r.passed for r in report.results}
    lines = ["| program | checks and matches its expected output |", "| --- | --- |"]
    for e in entries:
        if e.kind == "program":
            lines.append(f"| `{e.id}` | {'yes' if status.get(e.id) else 'no'} |")
    return "\n".join(lines)


def _error_appendix(entries: list[CorpusEntry], report: ConformanceReport) -> str:
    status = {r.id: r.passed for r in report.results}
    lines = [
        "| error situation | category | detected | outcome | reconstructed |",
        "| --- | --- | --- | --- | --- |",
    ]
    for e in entries:
        if e.kind != "error":
            continue
        detected = "at run time" if e.runtime else "statically"
        outcome = OUTCOMES[1] if status.get(e.id) else TODO
        lines.append(
            f"| `{e.id}` | {e.category} | {detected if status.get(e.id) else 'no'} | {outcome} | "
            f"{'yes' if e.reconstructed else 'no'} |"
        )
    return "\n".join(lines)


def build_datasheet(
    entries: list[CorpusEntry], report: ConformanceReport, today: Optional[dt.date] = None
) -> str:
    today = today or dt.date.today()
    results = report.results
    answers: dict[str, str] = {
        SECTIONS[0].questions[1]: today.isoformat(),
        SECTIONS[1].questions[3]: _list_or_none(_ids(results, "table", False)),
        SECTIONS[3].questions[0]: _list_or_none(_ids(results, "program", False)),
        SECTIONS[4].questions[0]: _list_or_none(_ids(results, "error", False)),
    }
    appendices = {
        TABLES: ("Generated: example tables", _table_appendix(entries, report)),
        API: ("Generated: implemented operations", _api_appendix()),
        PROGRAMS: ("Generated: example programs", _program_appendix(entries, report)),
        ERRORS: ("Generated: error situations", _error_appendix(entries, report)),
    }

    out = ["# Type System Datasheet", ""]
    for section in SECTIONS:
        out += [f"## {section.title}", ""]
        if section.preamble:
            out += [section.preamble, ""]
        for i, q in enumerate(section.questions):
            if section.interlude_at == i:
                out += [section.interlude, ""]
            out += [f"- Q. {q}", "", f"  {answers.get(q, TODO)}", ""]
        if section.title in appendices:
            heading, body = appendices[section.title]
            out += [f"### {heading}", "", body, ""]
    return "\n".join(out).rstrip() + "\n"
