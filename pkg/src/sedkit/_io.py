"""
Deterministic CSV and JSON writers.

Floats are written with ``repr()`` so that identical numbers always give
identical bytes and reading the files back restores the exact values.
"""

import csv
import json
import math
import os

import numpy as np


def _format_value(value):
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path_or_file, header, rows):
    """Write ``rows`` (an iterable of sequences) below a ``header`` line.
    """
    if hasattr(path_or_file, 'write'):
        _write_rows(path_or_file, header, rows)
    else:
        with open(path_or_file, 'w', newline='', encoding='utf-8') as f:
            _write_rows(f, header, rows)


def _write_rows(f, header, rows):
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_value(value) for value in row])


def to_jsonable(obj):
    """Convert numpy scalars/arrays and tuples into plain JSON types.

    Non-finite floats become None since JSON has no spelling for them.
    """
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(value) for value in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def write_json(path, data):
    text = json.dumps(to_jsonable(data), indent=2, sort_keys=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text + '\n')


def ensure_dir(path):
    if not os.path.isdir(path):
        os.makedirs(path)
    return path
