"""One module per subcommand; each exposes ``run(config, args) -> dict``."""

from beaver_forge_cli.commands import bench, demo, keygen, transcript, triples, verify

COMMANDS = {
    "keygen": keygen.run,
    "triples": triples.run,
    "bench-enc": bench.run,
    "demo": demo.run,
    "verify": verify.run,
    "export-transcript": transcript.run,
}

__all__ = ["COMMANDS"]
