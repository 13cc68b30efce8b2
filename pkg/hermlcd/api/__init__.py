"""Command surface and pydantic schemas."""
