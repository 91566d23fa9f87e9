"""Strange duality between hypersurface and complete intersection singularities."""

__version__ = "0.1.0"
