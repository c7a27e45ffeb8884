"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``DIAGHOM_BACKEND=python`` to force the fallback.
"""

import os

import numpy as np

from . import _pykernels

_ckernels = None
if os.environ.get("DIAGHOM_BACKEND", "").strip().lower() != "python":
    try:
        from . import _ckernels  # type: ignore[no-redef]
    except ImportError:
        _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"

_SMALL = 1 << 31


def eliminate(nrows, ncols, rows, cols, vals, modulus=0, backend=None):
    """Dispatch sparse elimination; ``rows/cols/vals`` are parallel sequences."""
    use = backend or BACKEND
    if use == "cython" and _ckernels is not None:
        if modulus < _SMALL:
            try:
                r = np.asarray(rows, dtype=np.int64)
                c = np.asarray(cols, dtype=np.int64)
                v = np.asarray(vals, dtype=np.int64)
            except OverflowError:
                pass
            else:
                try:
                    return _ckernels.eliminate(nrows, ncols, r, c, v, modulus)
                except OverflowError:
                    pass
    entries = zip(_as_list(rows), _as_list(cols), _as_list(vals))
    return _pykernels.eliminate(nrows, ncols, entries, modulus)


def _as_list(seq):
    if isinstance(seq, np.ndarray):
        return seq.tolist()
    return seq
