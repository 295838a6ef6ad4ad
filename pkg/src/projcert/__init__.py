"""projcert - decide when combinations of projectors onto convex sets are projectors.

Package entry point. Exports the version string only; the modules are
imported lazily by main.py so that configuration errors surface first.
"""

__version__ = "0.1.0"
