"""Black-pebbling games on DAGs: certificates, exact search, reduction gadgets,
and LP/IP models with exact rational verification."""

__version__ = "0.1.0"
