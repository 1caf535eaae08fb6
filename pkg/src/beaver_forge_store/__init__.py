"""beaver_forge_store: JSON-lines persistence for offline and online artifacts.

Everything the SDK produces that has to outlive a process lives here:
per-party triple files, server vault journals, key files and exported
transcripts.  The SDK itself never touches the filesystem.
"""

from beaver_forge_store.repository import (
    JsonlVaultJournal,
    KeyRepository,
    TranscriptRepository,
    TripleRepository,
    VaultRepository,
)

__all__ = [
    "JsonlVaultJournal",
    "KeyRepository",
    "TranscriptRepository",
    "TripleRepository",
    "VaultRepository",
]
