"""Service layer: geometry, constructions, classification and self-test."""
