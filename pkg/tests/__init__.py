"""Tests for the pauli_universality package."""
