"""Checks whether a dependency update can change what a MiniLang project does."""

from ._core import (
    UpdcheckError,
    bench,
    callgraph,
    check_update,
    coverage,
    diff_sources,
    format_source,
    run_tests,
    satisfies,
)

__all__ = [
    "UpdcheckError",
    "bench",
    "callgraph",
    "check_update",
    "coverage",
    "diff_sources",
    "format_source",
    "run_tests",
    "satisfies",
]
