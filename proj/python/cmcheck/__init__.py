"""Consistency model checking over histories and abstract executions.

Traces are passed as text in the line format read by the ``cmcheck`` tool,
or as JSON. Every error raised by the library is a ``CmcError``.
"""

from ._core import (
    CapExceeded,
    CmcError,
    EncodingError,
    EvaluationError,
    FormulaError,
    ParseError,
    ValidationError,
    check,
    encode,
    evaluate,
    generate,
    graph,
    implies,
    model_formula,
    models,
    sat,
    to_json,
    validate,
)

__all__ = [
    "CapExceeded",
    "CmcError",
    "EncodingError",
    "EvaluationError",
    "FormulaError",
    "ParseError",
    "ValidationError",
    "check",
    "encode",
    "evaluate",
    "generate",
    "graph",
    "implies",
    "model_formula",
    "models",
    "sat",
    "to_json",
    "validate",
]
