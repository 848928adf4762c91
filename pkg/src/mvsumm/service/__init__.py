"""HTTP service wrapper around the core pipeline."""
