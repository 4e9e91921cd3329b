"""Sampling, verification suites, data export and the command line."""
