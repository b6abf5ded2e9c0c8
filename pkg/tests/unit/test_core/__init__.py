"""
Unit tests for the numerical engines.
"""
