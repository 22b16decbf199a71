from .expr import ExprError, parse, parse_gate, pretty
from .main import main

__all__ = ["ExprError", "main", "parse", "parse_gate", "pretty"]
