import threading
import traceback
from queue import Queue, Empty

from quatlink.util.qlogging import logger


def ThreadedMethod(callable, jobs, results, errors):
    """
    Returns a function that starts a thread; the thread keeps taking
    job indices from the jobs queue and runs callable(index) on them,
    storing (index, result) or (index, exception, traceback)
    """
    def wrapper():
        class ThreadInstance(threading.Thread):

            def run(self):
                while True:
                    try:
                        index = jobs.get_nowait()
                    except Empty:
                        return
                    try:
                        results.put((index, callable(index)))
                    except Exception as e:
                        logger.log_exc('MonteCarloRunner: job %d failed'
                                       % index)
                        errors.put((index, e, traceback.format_exc()))

        thread = ThreadInstance(daemon=True)
        thread.start()
        return thread
    return wrapper


class MonteCarloRunner:
    """
    MonteCarloRunner runs independent jobs, one per run index, on up to
    `workers` threads and keeps their outcomes in thread safe queues.
    Results always come back sorted by index, whatever the scheduling.
    """

    def __init__(self, workers=1):
        self.workers = max(1, int(workers))
        self.jobs = Queue()
        self.results = Queue()
        self.errors = Queue()
        self.threads = []

    def run(self, method, indices):
        """
        Queue the indices and start the worker threads
        """
        indices = list(indices)
        for index in indices:
            self.jobs.put(index)
        for _ in range(min(self.workers, len(indices))):
            self.threads.append(
                ThreadedMethod(method, self.jobs, self.results, self.errors)())
        logger.debug("MonteCarloRunner: %d jobs on %d threads"
                     % (len(indices), len(self.threads)))

    start = run

    def join(self):
        """
        Wait for all threads to complete
        """
        for thread in self.threads:
            thread.join()

    def get_results(self, lenient=True):
        """
        Return [(index, result)] sorted by index. Blocks until all
        threads are finished. If lenient is false and some job failed,
        the exception of the lowest failing index is raised again.
        """
        self.join()
        if not lenient:
            errors = self.get_errors()
            if errors:
                raise errors[0][1]
        results = []
        while not self.results.empty():
            results.append(self.results.get())
        results.sort(key=lambda pair: pair[0])
        return results

    def get_errors(self):
        """
        Return [(index, exception, traceback)] sorted by index
        """
        self.join()
        errors = []
        while not self.errors.empty():
            errors.append(self.errors.get())
        errors.sort(key=lambda triple: triple[0])
        # put them back so a later call sees them too
        for error in errors:
            self.errors.put(error)
        return errors


def run_all(method, indices, workers=1):
    runner = MonteCarloRunner(workers)
    runner.run(method, indices)
    return [result for (_, result) in runner.get_results(lenient=False)]
