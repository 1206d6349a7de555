from src.utils.rng import make_rng
from src.utils.timing import Timer

__all__ = ["Timer", "make_rng"]
