"""Command-line front end, JSON documents and the fixture gallery."""

from .doc import DocError, SystemDoc
from .parse import ParseError, parse_poly, parse_rational, substitute_params

__all__ = ["DocError", "SystemDoc", "ParseError", "parse_poly", "parse_rational", "substitute_params"]
