"""Test suite for preserverlab."""
