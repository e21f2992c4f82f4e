"""Fuzzy color-emotion toolkit: learn color-emotion associations from tagged
art images, tag arbitrary images with ranked emotions, serve fuzzy-hedge
retrieval, and analyze 2AFC perception experiments.
"""

__version__ = "0.1.0"
