"""Backend selection for the shooting kernel.

The compiled extension is used when it was built at install time;
otherwise the pure-Python twin with the same signature takes over.
"""
try:
    from ._kernel import shoot
    BACKEND = "cython"
except ImportError:  # extension not built
    from ._pykernel import shoot
    BACKEND = "python"

__all__ = ["shoot", "BACKEND"]
