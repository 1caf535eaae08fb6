"""beaver_forge_cli: operator CLI for the beaver_forge SDK.

Console script: ``beaver-forge`` (see :mod:`beaver_forge_cli.app`).
"""
