__copyright__ = "Copyright (C) 2026 The rdmat developers"

__license__ = """
Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in
all copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
THE SOFTWARE.
"""

import csv
import hashlib
import json
import os
from datetime import datetime, timezone
from typing import Any, Dict, Iterable, Optional, Sequence

import numpy as np

__doc__ = """
.. currentmodule:: rdmat.io

CSV files have a header row and one record per line. Floating point numbers
are written with 17 significant digits so that they read back unchanged.
JSON records are objects with the keys ``config``, ``results`` and
``provenance``.

.. autofunction:: format_value
.. autofunction:: check_writable
.. autofunction:: write_csv
.. autofunction:: read_csv
.. autofunction:: provenance
.. autofunction:: write_json_record
.. autofunction:: read_json_record
.. autofunction:: file_sha256
"""


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def check_writable(paths: Sequence[str], overwrite: bool = False) -> None:
    """Create the parent directories of *paths*.

    :raises FileExistsError: if one of *paths* exists and *overwrite* is not
        set.
    """
    for path in paths:
        if os.path.exists(path) and not overwrite:
            raise FileExistsError(f"output file '{path}' already exists")

        dirname = os.path.dirname(path)
        if dirname:
            os.makedirs(dirname, exist_ok=True)


def write_csv(path: str, header: Sequence[str],
        rows: Iterable[Sequence[Any]], overwrite: bool = False) -> None:
    check_writable([path], overwrite)

    with open(path, "w", newline="") as outf:
        writer = csv.writer(outf)
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"row of length {len(row)} does not match "
                        f"header of length {len(header)}")
            writer.writerow([format_value(value) for value in row])


def read_csv(path: str):
    """Return ``(header, rows)`` with all fields as strings."""
    with open(path, newline="") as inf:
        reader = csv.reader(inf)
        header = next(reader)
        return header, list(reader)


def provenance() -> Dict[str, Any]:
    import platform
    import mpmath
    import scipy
    from rdmat.version import VERSION_TEXT

    return {
            "rdmat": VERSION_TEXT,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "mpmath": mpmath.__version__,
            "created": datetime.now(timezone.utc).isoformat(),
            }


def _to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def write_json_record(path: str, config: Dict[str, Any],
        results: Any, overwrite: bool = False,
        extra_provenance: Optional[Dict[str, Any]] = None) -> None:
    check_writable([path], overwrite)

    prov = provenance()
    if extra_provenance:
        prov.update(extra_provenance)

    record = {
            "config": config,
            "results": results,
            "provenance": prov,
            }
    with open(path, "w") as outf:
        json.dump(_to_jsonable(record), outf, indent=2)
        outf.write("\n")


def read_json_record(path: str) -> Dict[str, Any]:
    with open(path) as inf:
        record = json.load(inf)

    missing = {"config", "results", "provenance"} - set(record)
    if missing:
        raise ValueError(f"'{path}' lacks the keys {', '.join(sorted(missing))}")

    return record


def file_sha256(path: str) -> str:
    sha = hashlib.sha256()
    with open(path, "rb") as inf:
        for chunk in iter(lambda: inf.read(1 << 16), b""):
            sha.update(chunk)
    return sha.hexdigest()

# vim: foldmethod=marker
