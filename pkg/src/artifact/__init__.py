"""Linear relations, fat groups and integration relations for Manin pairs."""
