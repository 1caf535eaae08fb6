"""File repositories for triples, vault journals, keys and transcripts.

Layout under an output directory::

    keys/public.key   keys/secret.key           APK1 / ASK1 binary
    triples/alice.jsonl  triples/bob.jsonl      one TripleShare per line
    triples/triples.btr                         BTR1 binary, both parties
    vaults/server-<j>.jsonl                     append-only vault journal
    transcript.jsonl                            one Envelope per line

The repositories deliberately avoid protocol validation beyond parsing;
that belongs in the SDK.  Parse failures raise ``MalformedMessageError``,
filesystem failures surface as ``OSError``.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Iterable, Iterator

from pydantic import ValidationError

from beaver_forge.ahe import PublicKey, SecretKey
from beaver_forge.codec import (
    decode_public_key,
    decode_secret_key,
    decode_triple_file,
    encode_public_key,
    encode_secret_key,
    encode_triple_file,
)
from beaver_forge.dispense import server_id_for
from beaver_forge.errors import MalformedMessageError
from beaver_forge.interfaces import ShareJournal, TriplePair
from beaver_forge.models.enums import Party
from beaver_forge.models.params import AheParams
from beaver_forge.models.transport import Envelope, Transcript
from beaver_forge.models.triple import TripleShare
from beaver_forge.transport import transcript_digest

logger = logging.getLogger(__name__)


def _read_jsonl(path: Path) -> Iterator[dict]:
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedMessageError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc


def _dump(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n"


# ------------------------------------------------------------------
# Keys
# ------------------------------------------------------------------

class KeyRepository:
    """Serialized key pair under ``<root>/keys``."""

    def __init__(self, root: Path) -> None:
        self.dir = Path(root) / "keys"
        self.public_path = self.dir / "public.key"
        self.secret_path = self.dir / "secret.key"

    def exists(self) -> bool:
        return self.public_path.exists() or self.secret_path.exists()

    def save(self, pk: PublicKey, sk: SecretKey, *, force: bool = False) -> None:
        if self.exists() and not force:
            raise FileExistsError(f"key files already exist in {self.dir} (use --force to overwrite)")
        self.dir.mkdir(parents=True, exist_ok=True)
        self.public_path.write_bytes(encode_public_key(pk))
        self.secret_path.write_bytes(encode_secret_key(sk))
        logger.info("wrote key pair to %s", self.dir)

    def load(self, params: AheParams) -> tuple[PublicKey, SecretKey]:
        return (
            decode_public_key(self.public_path.read_bytes(), params),
            decode_secret_key(self.secret_path.read_bytes(), params),
        )


# ------------------------------------------------------------------
# Triples
# ------------------------------------------------------------------

class TripleRepository:
    """Per-party JSON-lines triple files plus the BTR1 bulk variant."""

    def __init__(self, root: Path) -> None:
        self.dir = Path(root) / "triples"

    def path_for(self, party: Party) -> Path:
        return self.dir / f"{party.value}.jsonl"

    @property
    def binary_path(self) -> Path:
        return self.dir / "triples.btr"

    def files(self, *, binary: bool = False) -> list[Path]:
        paths = [self.path_for(Party.ALICE), self.path_for(Party.BOB)]
        return paths + [self.binary_path] if binary else paths

    def write(self, pairs: Iterable[TriplePair], *, binary: bool = False) -> int:
        """Write every pair; returns the number of triples written."""
        self.dir.mkdir(parents=True, exist_ok=True)
        count = 0
        flat: list[TripleShare] = []
        with self.path_for(Party.ALICE).open("w", encoding="utf-8") as fa, \
                self.path_for(Party.BOB).open("w", encoding="utf-8") as fb:
            for alice_share, bob_share in pairs:
                fa.write(_dump(alice_share.model_dump()))
                fb.write(_dump(bob_share.model_dump()))
                if binary:
                    flat += [alice_share, bob_share]
                count += 1
        if binary and flat:
            self.binary_path.write_bytes(encode_triple_file(flat[0].t, flat))
        logger.info("wrote %d triples to %s", count, self.dir)
        return count

    def read(self, party: Party) -> list[TripleShare]:
        path = self.path_for(party)
        try:
            return [TripleShare.model_validate(rec) for rec in _read_jsonl(path)]
        except ValidationError as exc:
            raise MalformedMessageError(f"{path}: {exc.error_count()} invalid triple records") from exc

    def read_pairs(self) -> list[TriplePair]:
        alice = self.read(Party.ALICE)
        bob = self.read(Party.BOB)
        if len(alice) != len(bob):
            raise MalformedMessageError(f"{self.dir}: {len(alice)} alice records vs {len(bob)} bob records")
        return list(zip(alice, bob))

    def read_binary(self) -> list[TripleShare]:
        return decode_triple_file(self.binary_path.read_bytes())


# ------------------------------------------------------------------
# Vault journals
# ------------------------------------------------------------------

class JsonlVaultJournal(ShareJournal):
    """Append-only JSON-lines journal for one server vault."""

    def __init__(self, path: Path) -> None:
        self.path = Path(path)

    def append(self, record: dict) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(_dump(record))

    def records(self) -> Iterator[dict]:
        if not self.path.exists():
            return iter(())
        return _read_jsonl(self.path)


class VaultRepository:
    """One journal per server under ``<root>/vaults``."""

    def __init__(self, root: Path) -> None:
        self.dir = Path(root) / "vaults"

    def journal(self, index: int) -> JsonlVaultJournal:
        return JsonlVaultJournal(self.dir / f"{server_id_for(index)}.jsonl")

    def journals(self, count: int) -> list[JsonlVaultJournal]:
        return [self.journal(j) for j in range(1, count + 1)]

    def discover(self) -> int:
        """Number of consecutive server journals present (server-1 upward)."""
        count = 0
        while (self.dir / f"{server_id_for(count + 1)}.jsonl").exists():
            count += 1
        return count

    def reset(self, count: int) -> None:
        """Truncate the journals of ``count`` servers."""
        self.dir.mkdir(parents=True, exist_ok=True)
        for journal in self.journals(count):
            journal.path.write_text("", encoding="utf-8")


# ------------------------------------------------------------------
# Transcripts
# ------------------------------------------------------------------

class TranscriptRepository:
    """``transcript.jsonl``: a seed header line, then one envelope per line."""

    def __init__(self, root: Path) -> None:
        self.path = Path(root) / "transcript.jsonl"

    def write(self, transcript: Transcript) -> str:
        """Write the transcript and return its digest."""
        self.path.parent.mkdir(parents=True, exist_ok=True)
        digest = transcript_digest(transcript.envelopes)
        with self.path.open("w", encoding="utf-8") as fh:
            fh.write(_dump({"seed": transcript.seed, "digest": digest, "envelopes": len(transcript.envelopes)}))
            for env in transcript.envelopes:
                fh.write(_dump(env.to_record()))
        logger.info("wrote %d envelopes to %s", len(transcript.envelopes), self.path)
        return digest

    def read(self) -> Transcript:
        records = iter(_read_jsonl(self.path))
        header = next(records, None)
        if header is None or "envelopes" not in header:
            raise MalformedMessageError(f"{self.path}: missing transcript header")
        try:
            envelopes = [Envelope.from_record(rec) for rec in records]
        except (KeyError, ValueError) as exc:
            raise MalformedMessageError(f"{self.path}: invalid envelope record ({exc})") from exc
        if len(envelopes) != header["envelopes"]:
            raise MalformedMessageError(
                f"{self.path}: header announces {header['envelopes']} envelopes, found {len(envelopes)}"
            )
        return Transcript(seed=header.get("seed"), envelopes=envelopes)
