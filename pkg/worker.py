"""
Background workers for running verification check tasks.
"""

import logging
import queue
import threading
from typing import Dict, Iterable, List

from models import CheckReport, CheckTask


class SuiteWorker:
    """Pool of threads draining a queue of check tasks."""

    def __init__(self, workers: int = 4):
        """
        Initialize suite worker.

        Args:
            workers: Number of worker threads
        """
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.workers = workers
        self.task_queue: "queue.Queue[CheckTask]" = queue.Queue()
        self.threads: List[threading.Thread] = []
        self.running = False
        self.completed: List[CheckTask] = []
        self._lock = threading.Lock()
        self.stats = {
            'tasks_queued': 0,
            'tasks_completed': 0,
            'tasks_failed': 0,
            'reports': 0,
        }
        self.logger = logging.getLogger(self.__class__.__name__)

    def start(self):
        """Start the worker threads."""
        if any(t.is_alive() for t in self.threads):
            self.logger.warning("Worker already running")
            return

        self.running = True
        self.threads = [
            threading.Thread(target=self._worker_loop, name=f"omlq-worker-{i}", daemon=True)
            for i in range(self.workers)
        ]
        for thread in self.threads:
            thread.start()
        self.logger.debug(f"Started {self.workers} worker thread(s)")

    def stop(self):
        """Stop the worker threads."""
        self.running = False
        for thread in self.threads:
            thread.join(timeout=5)
        self.threads = []
        self.logger.debug("Worker threads stopped")

    def enqueue(self, task: CheckTask):
        """
        Add a task to the queue.

        Args:
            task: Check task to run
        """
        task.status = 'queued'
        self.task_queue.put(task)
        with self._lock:
            self.stats['tasks_queued'] += 1
        self.logger.debug(f"Task {task.group}#{task.index} added to queue")

    def run(self, tasks: Iterable[CheckTask]) -> List[CheckReport]:
        """
        Run tasks to completion and return their reports in canonical order.

        Args:
            tasks: Tasks to run

        Returns:
            Reports sorted by check id, then instance index
        """
        with self._lock:
            self.completed = []
        self.start()
        try:
            for task in tasks:
                self.enqueue(task)
            self.task_queue.join()
        finally:
            self.stop()
        return self.reports()

    def reports(self) -> List[CheckReport]:
        with self._lock:
            collected = [r for task in self.completed for r in task.reports]
        return sorted(collected, key=CheckReport.sort_key)

    def get_stats(self) -> Dict[str, int]:
        with self._lock:
            return self.stats.copy()

    def _worker_loop(self):
        """Main worker loop."""
        while self.running:
            try:
                try:
                    task = self.task_queue.get(timeout=0.1)
                except queue.Empty:
                    continue

                try:
                    self._process_task(task)
                finally:
                    self.task_queue.task_done()

            except Exception as e:
                self.logger.error(f"Worker loop error: {str(e)}", exc_info=True)

    def _process_task(self, task: CheckTask):
        """
        Run a single task, turning an exception into a failed report.

        Args:
            task: Task to run
        """
        task.status = 'running'
        try:
            task.reports = list(task.run())
            task.status = 'completed'
        except Exception as e:
            error_msg = str(e) or e.__class__.__name__
            self.logger.error(f"Task {task.group}#{task.index} failed: {error_msg}")
            self.logger.debug("Task failure details", exc_info=True)
            task.status = 'failed'
            task.error_message = error_msg
            task.reports = [CheckReport.errored(f"{task.group}.error", task.description, task.index,
                                                task.lattice, f"{e.__class__.__name__}: {error_msg}")]

        with self._lock:
            self.completed.append(task)
            self.stats['tasks_completed' if task.status == 'completed' else 'tasks_failed'] += 1
            self.stats['reports'] += len(task.reports)

