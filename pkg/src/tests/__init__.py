"""
The sedkit test suite.
"""
