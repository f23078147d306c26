"""Test suite for the iCGS verification toolkit."""
