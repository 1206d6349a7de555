"""Sumset and Bogolyubov-Ruzsa experiments."""
