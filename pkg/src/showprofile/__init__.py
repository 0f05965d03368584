"""Profile TV shows from microblog traces: audience demographics and
preferences, post sentiment, social ties and cross-show attention flow."""

__version__ = "0.1.0"
