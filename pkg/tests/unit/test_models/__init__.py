"""
Unit tests for data models.
"""
