import csv
import json
from typing import Iterable, Sequence

from conf import FLOAT_DECIMALS


def fixed(value, decimals: int = FLOAT_DECIMALS):
    """Round floats for deterministic output; other values pass through."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, str)):
        return value
    if isinstance(value, (list, tuple)):
        return [fixed(v, decimals) for v in value]
    if isinstance(value, dict):
        return {k: fixed(v, decimals) for k, v in value.items()}
    number = float(value)
    if number != number or number in (float("inf"), float("-inf")):
        return str(number)
    return float(f"{number:.{decimals}f}")


def write_json(data, file_path: str):
    with open(file_path, "w+", encoding="utf-8") as f:
        json.dump(fixed(data), f, ensure_ascii=False, indent=2)
        f.write("\n")


def write_csv(rows: Iterable[Sequence], header: Sequence[str], file_path: str):
    with open(file_path, "w+", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [
                    f"{v:.{FLOAT_DECIMALS}f}" if isinstance(v, float) else v
                    for v in fixed(list(row))
                ]
            )
