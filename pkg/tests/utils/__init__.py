"""
Test utilities and helpers.
"""
