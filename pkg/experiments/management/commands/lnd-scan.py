"""`lnd-scan`, the hyphenated spelling of `lnd_scan`"""
from experiments.management.commands.lnd_scan import Command  # noqa: F401
