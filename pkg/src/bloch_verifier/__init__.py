"""
Bloch Verifier

Numerical verification of scalar products of N-qubit correlation functions
over the full sphere of measurement settings, for separable quantum states
and local hidden-variable models.
"""

__version__ = "0.1.0"
