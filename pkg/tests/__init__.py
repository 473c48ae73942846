"""System-level integration tests for Bloch Verifier."""
