"""kar2soergel: exact verification of higher idempotents on Soergel bimodules
and deformed Grassmannian cohomology, at desk scale."""

__version__ = "0.1.0"
