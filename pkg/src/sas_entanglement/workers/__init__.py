"""Worker layer."""
