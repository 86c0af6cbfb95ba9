"""tightfam: exact chart-level computer algebra for twisted Poisson
structures, tight families of Poisson structures and star products,
parallel transport and disk holonomy, and triangulation-based descent data.

All core arithmetic is exact (rationals, an imaginary unit, and a formal
period unit L = 2*pi*sqrt(-1)); deformation series are truncated at a
configurable order (default 2).
"""

__version__ = "0.1.0"
SCHEMA_VERSION = "tightfam/v1"
