"""Exact stable-algebra invariants of shifts of finite type.

Modules are imported directly (``from sft.invariants import invariant_report``);
this package only carries the common value types.
"""

from sft.matrix import IntMatrix
from sft.poly import IntPoly
from sft.verdict import Verdict

__version__ = "0.1.0"

__all__ = ["IntMatrix", "IntPoly", "Verdict", "__version__"]
