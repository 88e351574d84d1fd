"""Tools for evaluating and preparing formality-controlled MT data."""

__version__ = "0.1.0"
