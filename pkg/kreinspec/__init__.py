"""
kreinspec - pseudo-Hermitian Hamiltonians with even PT-symmetry.
Biorthonormal eigensystems, metric operators, PT doublets and Krein-space assembly.
"""

__version__ = "1.0.0"
