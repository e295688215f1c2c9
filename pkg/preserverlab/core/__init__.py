"""Core module for configuration and exceptions."""
