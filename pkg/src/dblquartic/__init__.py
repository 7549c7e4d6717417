"""Exact verification engine for a quartic double fivefold singular along a line."""

__version__ = "0.1.0"
