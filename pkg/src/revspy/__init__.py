"""Game engine, strategy library and exact solver for the
revolutionaries-and-spies pursuit game on graphs."""

__version__ = "0.1.0"
