"""Fleet sizing for last-mile delivery on a directed road network."""
__version__ = "0.1.0"
