"""Shared-state safety: values are immutable, capacity budgets are
context-local, and independent analyses can run in parallel."""

import random
import threading
from concurrent.futures import ThreadPoolExecutor

from povs_wb import povs
from povs_wb.generators import random_space
from povs_wb.semilin import capacity_limits, current_limits
from povs_wb.workbench import run_search


def test_parallel_analyses_agree_with_serial():
    rng = random.Random(555)
    spaces = [random_space(rng, 2) for _ in range(12)]
    serial = [(povs.is_archimedean(sp), povs.alpha_type(sp), povs.lambda_type(sp))
              for sp in spaces]

    def work(sp):
        return (povs.is_archimedean(sp), povs.alpha_type(sp), povs.lambda_type(sp))

    with ThreadPoolExecutor(max_workers=6) as pool:
        parallel = list(pool.map(work, spaces))
    assert parallel == serial


def test_capacity_limits_are_context_local():
    seen = {}
    barrier = threading.Barrier(2)

    def narrow():
        with capacity_limits(max_cells=7):
            barrier.wait()
            seen["narrow"] = current_limits().max_cells
            barrier.wait()

    def wide():
        barrier.wait()
        seen["wide"] = current_limits().max_cells
        barrier.wait()

    threads = [threading.Thread(target=narrow), threading.Thread(target=wide)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert seen == {"narrow": 7, "wide": 4096}


def test_parallel_search_requests_are_deterministic():
    from povs_wb.report import to_json

    with ThreadPoolExecutor(max_workers=3) as pool:
        reports = list(pool.map(lambda _: to_json(run_search(2, 15, 9)), range(3)))
    assert len(set(reports)) == 1
