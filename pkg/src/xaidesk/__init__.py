"""xaidesk: persistent, searchable and conversational explanation artifacts."""

__version__ = "0.1.0"
