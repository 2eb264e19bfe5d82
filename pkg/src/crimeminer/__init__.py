"""Spatiotemporal crime pattern mining and crime-type prediction toolkit.

Pipeline: ingest raw city crime CSVs, unify them into a six-attribute
categorical schema, summarize frequencies, mine (location, day, time)
hotspot patterns with a constrained Apriori, train Naive Bayes and
decision-tree crime-type predictors, evaluate them, and compare the
demographics of dangerous vs. safe neighborhoods.
"""

__version__ = "0.1.0"
