"""
Tests for kreinspec.
"""
