"""Non-malleable code experiments."""
