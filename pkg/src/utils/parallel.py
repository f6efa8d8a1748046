import warnings
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Sequence, TypeVar

from tqdm import TqdmExperimentalWarning
from tqdm.rich import tqdm_rich

warnings.filterwarnings("ignore", category=TqdmExperimentalWarning)

T = TypeVar("T")
R = TypeVar("R")


def run_in_parallel(
    func: Callable[[T], R],
    items: Sequence[T],
    max_workers: int = 4,
    desc: str = "Processing...",
    verbose: bool = True,
) -> list[R]:
    """Map `func` over `items` on a thread pool; results keep the input order."""
    if max_workers == -1:
        max_workers = max(len(items), 1)
    assert max_workers >= 1, "max_workers should be greater than or equal to 1"
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        tasks = {executor.submit(func, item): idx for idx, item in enumerate(items)}
        results = []
        for future in tqdm_rich(
            as_completed(tasks), total=len(tasks), desc=desc, disable=not verbose
        ):
            results.append((tasks[future], future.result()))
    return [result[1] for result in sorted(results, key=lambda r: r[0])]
