"""Unit tests for bloch_verifier."""
