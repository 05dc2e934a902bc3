from .ast import ModelAst, render
from .builder import Model, build, build_nqueens
from .parser import (
    ArityMismatch,
    DuplicateName,
    ModelError,
    ModelSyntaxError,
    UndeclaredVariable,
    parse,
)

__all__ = [
    "ArityMismatch",
    "DuplicateName",
    "Model",
    "ModelAst",
    "ModelError",
    "ModelSyntaxError",
    "UndeclaredVariable",
    "build",
    "build_nqueens",
    "parse",
    "render",
]
