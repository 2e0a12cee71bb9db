"""Verification toolkit for character tables of finite groups."""

__version__ = "0.1.0"
