"""HTTP surface and SQLAlchemy store for analyses and census runs."""
