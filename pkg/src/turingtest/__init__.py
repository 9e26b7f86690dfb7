"""Turing machines that answer questions, and the left/right tests that try to tell them apart."""
