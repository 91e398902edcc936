"""Keeps the tests directory importable so suites can share helpers.py."""
