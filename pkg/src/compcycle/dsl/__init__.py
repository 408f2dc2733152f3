"""The ``.catspec`` language: parser, canonical serializer and DOT export."""
from .dot import export_dot
from .elaborate import Model, elaborate
from .model import Diagnostic, SpecError, SpecFile
from .parser import parse, parse_with_diagnostics
from .serialize import serialize

__all__ = [
    "Diagnostic",
    "Model",
    "SpecError",
    "SpecFile",
    "elaborate",
    "export_dot",
    "parse",
    "parse_with_diagnostics",
    "serialize",
]
