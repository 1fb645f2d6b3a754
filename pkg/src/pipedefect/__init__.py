"""Structured defect extraction and severity rating for pipe inspection text."""

__version__ = "0.1.0"
