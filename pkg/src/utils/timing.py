import time
from contextlib import contextmanager


class Timer:
    """Simple timing utility for performance measurement.

    Besides start/stop, named stages can be timed with `stage()`; their
    durations accumulate in `stages` (milliseconds) for the report.
    """

    def __init__(self):
        self._start_time = None
        self._end_time = None
        self.stages: dict[str, float] = {}

    def start(self):
        """Start the timer."""
        self._start_time = time.perf_counter()

    def stop(self) -> float:
        """Stop the timer and return elapsed time in milliseconds."""
        if self._start_time is None:
            raise RuntimeError("Timer not started")
        self._end_time = time.perf_counter()
        return (self._end_time - self._start_time) * 1000

    @contextmanager
    def stage(self, name: str):
        """Time a block and add it to stages[name]."""
        began = time.perf_counter()
        try:
            yield
        finally:
            elapsed = (time.perf_counter() - began) * 1000
            self.stages[name] = self.stages.get(name, 0.0) + elapsed
