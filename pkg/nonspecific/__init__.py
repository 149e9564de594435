"""Clustering of nonspecific evidence and posterior domain distributions over the number of events."""

__version__ = "0.1.0"
