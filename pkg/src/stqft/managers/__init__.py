"""File I/O, caching, reporting and the pipeline driver."""
