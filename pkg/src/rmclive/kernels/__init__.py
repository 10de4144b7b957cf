"""Explicit-state kernels: compiled when available, pure Python otherwise.

Set ``RMCLIVE_PURE=1`` to force the pure-Python implementation.
"""

import os

from . import _pykernels as pure

compiled = None
if os.environ.get("RMCLIVE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

impl = compiled if compiled is not None else pure
BACKEND = "compiled" if compiled is not None else "python"

successors = impl.successors
attractor = impl.attractor
trap = impl.trap
bfs = impl.bfs
value_iteration = impl.value_iteration
