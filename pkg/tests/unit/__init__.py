"""
Unit tests for catsim components.
"""
