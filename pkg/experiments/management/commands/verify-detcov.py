"""`verify-detcov`, the hyphenated spelling of `verify_detcov`"""
from experiments.management.commands.verify_detcov import Command  # noqa: F401
