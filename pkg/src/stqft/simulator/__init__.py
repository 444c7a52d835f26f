"""Dense state-vector simulator."""
