import logging
from .. import settings
logging.basicConfig(level=logging.INFO, force=True)
logger = logging.getLogger(__name__)


def _scan_units(request: dict) -> dict:
    from ..palindrome_construct import scan_unit_candidates
    candidates = [tuple(c) for c in request['candidates']]
    hits = scan_unit_candidates(request['ops'], candidates)
    logger.info(f"{len(candidates)} unit candidates scanned, hits {hits}")
    return {'hits': hits}


HANDLERS = {'scan_units': _scan_units}


def main_worker_process_function(request_queue, result_queue):
    """Serves jobs from request_queue until it receives {'action': 'quit'}.

    'set_settings' requests update this process's settings and get no reply.
    Every other action gets exactly one reply on result_queue, carrying
    either the handler's result or an 'error' string.
    """
    logger.setLevel(settings.log_level)
    while True:
        request = request_queue.get()
        action = request.get('action') if isinstance(request, dict) else None
        if action == 'quit':
            break
        if action == 'set_settings':
            for name, value in request['settings'].items():
                setattr(settings, name, value)
            logger.setLevel(settings.log_level)
            continue
        handler = HANDLERS.get(action)
        if handler is None:
            logger.warning(f"Ignoring request without a known action: {request!r}")
            continue
        try:
            reply = handler(request)
        except Exception as e:
            logger.exception(f"{action} failed")
            reply = {'error': f'{type(e).__name__}: {e}'}
        result_queue.put({'action': action, **reply})
    logger.info("Worker shut down")
