"""Reality and strong reality of elements in classical matrix groups over exact fields."""

__version__ = "0.1.0"
