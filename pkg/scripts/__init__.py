"""
Utility scripts for kreinspec.
"""

