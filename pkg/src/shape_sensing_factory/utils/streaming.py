"""
Producer-consumer fan-out for per-sensor work.

The main thread feeds one item per sensor into a queue; worker threads run the
callback. Every result is stored under its item key and handed back in key order,
so outputs never depend on thread scheduling.
"""
import os
import queue
import threading
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Optional

WORKERS_ENV = "SHAPE_FACTORY_WORKERS"
DEFAULT_WORKERS = 4

_STOP = object()


def default_workers() -> int:
    """Worker count from SHAPE_FACTORY_WORKERS, falling back to 4."""
    raw = os.getenv(WORKERS_ENV)
    if not raw:
        return DEFAULT_WORKERS
    try:
        return max(1, int(raw))
    except ValueError:
        return DEFAULT_WORKERS


@dataclass
class ProcessorItem:
    """One unit of work; ``key`` (the sensor id) fixes its place in the output."""

    key: int
    data: Any


class Processor:
    """
    Keyed thread pool. Workers start as items arrive, up to ``thread_size``; once a
    callback fails the remaining items are skipped and ``wait`` re-raises the error.
    """

    def __init__(self, name: str, action_callback: Callable[[Any], Any], thread_size: int = 1, logger=None):
        self.name = name
        self.action_callback = action_callback
        self.thread_size = max(1, thread_size)
        self.logger = logger

        self.queue: queue.Queue = queue.Queue()
        self.results: Dict[int, Any] = {}
        self.error: Optional[BaseException] = None
        self.threads: List[threading.Thread] = []
        self._lock = threading.Lock()

    def _grow(self) -> None:
        if len(self.threads) >= self.thread_size:
            return
        thread = threading.Thread(target=self._worker, name=f"{self.name}-Worker-{len(self.threads) + 1}", daemon=True)
        thread.start()
        self.threads.append(thread)
        if self.logger and len(self.threads) == 1:
            self.logger.info(f"{self.name}: up to {self.thread_size} worker threads")

    def put(self, item: ProcessorItem) -> None:
        self._grow()
        self.queue.put(item)

    def _worker(self) -> None:
        while True:
            item = self.queue.get()
            try:
                if item is _STOP:
                    return
                if self.error is not None:
                    continue
                result = self.action_callback(item.data)
                with self._lock:
                    self.results[item.key] = result
            except Exception as e:
                with self._lock:
                    if self.error is None:
                        self.error = e
                if self.logger:
                    self.logger.error(f"{self.name}: item {item.key} failed: {e}")
            finally:
                self.queue.task_done()

    def wait(self) -> List[Any]:
        """Block until every item is done; results come back sorted by key."""
        self.queue.join()
        for _ in self.threads:
            self.queue.put(_STOP)
        for thread in self.threads:
            thread.join()
        if self.error is not None:
            raise self.error
        return [self.results[k] for k in sorted(self.results)]


def execute_streaming(
    items: Iterable[Any],
    worker_callback: Callable[[Any], Any],
    key: Callable[[Any], int],
    num_workers: int = DEFAULT_WORKERS,
    name: str = "streaming",
    logger=None,
) -> List[Any]:
    """
    Run ``worker_callback`` over ``items`` on a thread pool and return the results
    ordered by ``key(item)``. With one worker the items run inline on the caller's
    thread.
    """
    items = list(items)
    if num_workers <= 1 or len(items) <= 1:
        return [worker_callback(item) for item in sorted(items, key=key)]

    processor = Processor(name, worker_callback, thread_size=num_workers, logger=logger)
    for item in items:
        processor.put(ProcessorItem(key=key(item), data=item))
    return processor.wait()
