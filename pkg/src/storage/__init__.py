from src.storage.files import (
    format_fn,
    format_set,
    load_fn,
    load_set,
    parse_fn,
    parse_set,
    save_fn,
    save_set,
)

__all__ = [
    "format_fn",
    "format_set",
    "load_fn",
    "load_set",
    "parse_fn",
    "parse_set",
    "save_fn",
    "save_set",
]
