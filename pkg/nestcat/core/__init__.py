"""Finite fields, linear codes, nested cyclic and concatenated codes."""

__all__ = []
