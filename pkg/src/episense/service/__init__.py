"""FastAPI service wrapping the simulation engine."""
