"""Pool of scan workers.

Workers are started lazily, receive a settings snapshot before their first
job, and are kept around for reuse until stop_all_workers() runs at exit.
"""
import atexit
import logging
import os
from dataclasses import dataclass
from multiprocessing import Process, Queue
from .process import main_worker_process_function
from .. import settings
from ..errors import InternalError
logger = logging.getLogger(__name__)


@dataclass
class _Worker:
    process: Process
    requests: Queue
    results: Queue
    idle: bool = False

    @property
    def usable(self) -> bool:
        return self.idle and self.process.is_alive()


_workers: dict[int, _Worker] = {}
# forked workers inherit this module; only the parent forwards settings
_owner_pid = os.getpid()


def _settings_snapshot() -> dict:
    return {'action': 'set_settings', 'settings': dict(settings)}


def _spawn() -> int:
    requests, results = Queue(), Queue()
    process = Process(target=main_worker_process_function,
                      args=(requests, results), daemon=True)
    worker = _Worker(process, requests, results)
    process.start()
    _workers[worker.process.pid] = worker
    worker.requests.put(_settings_snapshot())
    logger.info(f"Spawned scan worker {worker.process.pid}")
    return worker.process.pid


def submit(action: str, **payload) -> int:
    """Hands one job to an idle worker, spawning a new one when all are
    busy, and returns the pid whose result queue will carry the answer.
    """
    pid = next((pid for pid, w in _workers.items() if w.usable), None)
    if pid is None:
        pid = _spawn()
    worker = _workers[pid]
    worker.idle = False
    worker.requests.put({'action': action, **payload})
    logger.info(f"Submitted {action} to worker {pid}")
    return pid


def collect(pid: int) -> dict:
    worker = _workers[pid]
    reply = worker.results.get()
    worker.idle = True
    if 'error' in reply:
        raise InternalError(f"worker {pid} failed on {reply['action']}: {reply['error']}")
    return reply


def map_requests(action: str, payloads: list[dict]) -> list[dict]:
    """One job per payload; replies come back in payload order."""
    pids = [submit(action, **payload) for payload in payloads]
    replies, failure = [], None
    # every job is collected so no worker stays busy after a failure
    for pid in pids:
        try:
            replies.append(collect(pid))
        except InternalError as e:
            failure = failure or e
    if failure is not None:
        raise failure
    return replies


def stop_all_workers():
    for pid, worker in list(_workers.items()):
        if worker.process.is_alive():
            worker.requests.put({'action': 'quit'})
            worker.process.join()
        del _workers[pid]
        logger.info(f"Stopped scan worker {pid}")


def update_setting(name, value):
    if os.getpid() != _owner_pid:
        return
    for worker in _workers.values():
        if worker.process.is_alive():
            worker.requests.put({'action': 'set_settings',
                                 'settings': {name: value}})


settings.connect(update_setting)
atexit.register(stop_all_workers)
