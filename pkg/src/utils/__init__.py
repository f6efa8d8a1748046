from .log import get_logger, set_level
from .parallel import run_in_parallel
from .utils import fixed, write_csv, write_json
