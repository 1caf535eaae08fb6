"""Abstract interfaces for offline-phase triple sources.

The online phase only needs a stream of two-party Beaver triple shares; it
does not care whether they came from a trusted dealer or from the real
shared-scalar-product protocol.  Both sources implement the contract below
so benchmarks, dispensing and tests can swap them freely.

Typical integration flow::

    generator: TripleGenerator = ProtocolTripleGenerator(pk, sk, master_seed=seed)
    for alice_share, bob_share in generator.generate(count=1000):
        dispenser.dispense(alice_share)
        dispenser.dispense(bob_share)
"""

from abc import ABC, abstractmethod
from typing import Iterator

from beaver_forge.models.triple import TripleShare

TriplePair = tuple[TripleShare, TripleShare]


class TripleGenerator(ABC):
    """Interface for anything that deals two-party Beaver triples.

    Implementations must be deterministic for a fixed master seed: the
    ``i``-th triple of a stream depends only on the seed and ``i``.
    """

    @abstractmethod
    def generate(self, count: int, *, start: int = 0) -> Iterator[TriplePair]:
        """Yield ``count`` triples as (alice_share, bob_share) pairs.

        Parameters
        ----------
        count:
            Number of triples, at least 1.
        start:
            Index of the first triple; ids and generator streams are keyed
            by index, so ``generate(5, start=5)`` continues ``generate(5)``.
        """
        ...

    @property
    @abstractmethod
    def t(self) -> int:
        """Plaintext modulus the triples live in."""
        ...


class ShareJournal(ABC):
    """Append-only record sink for a server vault.

    The SDK never touches files; ``beaver_forge_store`` ships the JSON-lines
    implementation and tests use :class:`beaver_forge.dispense.MemoryJournal`.
    """

    @abstractmethod
    def append(self, record: dict) -> None:
        """Persist one vault event (deposit or consume)."""
        ...

    @abstractmethod
    def records(self) -> Iterator[dict]:
        """Yield every persisted event in append order."""
        ...
