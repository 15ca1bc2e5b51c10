"""Discrete Morse theory on open simplicial complexes K = X \\ T."""
