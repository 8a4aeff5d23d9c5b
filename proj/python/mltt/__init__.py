"""Python bindings for the MLTT kernel."""

from ._mltt import (
    Result,
    Term,
    check,
    conv,
    diff_run,
    infer,
    normalize,
    property_run,
    property_suites,
    run,
    validate,
    whnf,
)

__all__ = [
    "Result",
    "Term",
    "check",
    "conv",
    "diff_run",
    "infer",
    "normalize",
    "property_run",
    "property_suites",
    "run",
    "validate",
    "whnf",
]
