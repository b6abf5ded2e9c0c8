"""
Tests for the catsim coherent-state qubit simulator.
"""
