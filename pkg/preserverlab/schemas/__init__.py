"""Pydantic schemas for the JSON documents read and written by the CLI."""
