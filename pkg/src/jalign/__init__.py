"""Joint-attention annotation and expert-alignment pipeline toolkit."""

__version__ = "0.1.0"
