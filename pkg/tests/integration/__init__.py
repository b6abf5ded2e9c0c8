"""
Integration tests for the catsim command line.
"""
