"""Shared infrastructure: logging, errors, random streams, parallel map."""
