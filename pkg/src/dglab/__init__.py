"""One-dimensional discontinuous Galerkin solver with swappable artificial viscosity."""

__version__ = "0.1.0"
