"""Chow weights, vanishing-number filtrations, Okounkov bodies and the
asymptotic volume constant of embedded projective varieties."""

__version__ = "0.1.0"
