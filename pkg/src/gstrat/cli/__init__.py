"""Expression DSL, emitters and the `strat` command."""

from .dsl import ParseError, format_script, parse
from .emit import emit_dot, emit_json, read_json
from .evaluate import EvalError, Evaluator, evaluate

__all__ = ["EvalError", "Evaluator", "ParseError", "emit_dot", "emit_json", "evaluate", "format_script", "parse", "read_json"]
