"""
Tests package for hahn_field.

Unit and property tests for the chains, couples, series, derivation, ranks,
and the realization pipeline with its CLI and API surfaces.
"""
