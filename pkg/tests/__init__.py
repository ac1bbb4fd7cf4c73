"""
Test suite for the Web Reputation Index.

Covers the index pipeline, the collectors, the dataset files and the command line.
"""
