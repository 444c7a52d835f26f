"""Cross-cutting infrastructure: the exception hierarchy and error handler."""
