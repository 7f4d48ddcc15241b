"""Chaotic-learning interior search training of feed-forward forecasting networks."""
