"""Exact arithmetic for Calabi-Yau threefolds over finite fields."""

__version__ = "0.1.0"
