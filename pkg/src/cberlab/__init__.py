"""cberlab: finite-window experiments on expansion problems over countable groups."""

from .groups import GroupModel, Word, parse_group
from .patterns import Language, Pattern, Symbol

__all__ = ["GroupModel", "Word", "parse_group", "Language", "Pattern", "Symbol"]
__version__ = "0.1.0"
