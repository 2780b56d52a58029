"""Heisenberg-invariant theta quartics, symmetric-product intersection numbers
and the numerics that reconstruct Kummer and Coble quartics."""

from __future__ import annotations

__version__ = "0.1.0"
