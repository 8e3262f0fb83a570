"""`verify-integrals`, the hyphenated spelling of `verify_integrals`"""
from experiments.management.commands.verify_integrals import Command  # noqa: F401
