"""Exception hierarchy for the beaver_forge SDK.

Every error derives from ``BeaverForgeError``.  It must not be a
``ValueError``: pydantic wraps those in ``ValidationError`` when they are
raised from a model validator.
The CLI maps these classes to exit codes in ``beaver_forge_cli.errors``.
"""


class BeaverForgeError(Exception):
    """Base class for all SDK errors."""


# --- Parameters -----------------------------------------------------------

class ParameterError(BeaverForgeError):
    """Invalid ring / AHE / protocol parameters."""


class ParamsMismatchError(ParameterError):
    """Operands were built for different parameter sets."""


class PlaintextRangeError(ParameterError):
    """A plaintext or scalar lies outside the centered range of Z_t."""


class NoiseBudgetError(ParameterError):
    """The requested operation would exceed the decryption noise budget."""


# --- Protocol -------------------------------------------------------------

class ProtocolAbortError(BeaverForgeError):
    """A protocol run stopped without producing output."""


class ProtocolStateError(ProtocolAbortError):
    """A message was applied to a state machine in the wrong phase."""


class MalformedMessageError(ProtocolAbortError):
    """A protocol message could not be parsed or has the wrong shape."""


class IncompleteSharesError(ProtocolAbortError):
    """Reconstruction or opening is missing at least one party's share."""


class DuplicateDeliveryError(ProtocolAbortError):
    """A triple_id was delivered twice to the same server by the same origin."""


class TripleReuseError(ProtocolAbortError):
    """A consumed Beaver triple was offered for another multiplication."""


class OfflinePhaseDepletedError(ProtocolAbortError):
    """No ready Beaver triple is left in the server vaults."""


# --- Transport ------------------------------------------------------------

class FramingError(MalformedMessageError):
    """A wire frame is truncated, has an unknown kind or a bad length."""


class ChannelError(ProtocolAbortError):
    """Base class for message-bus failures."""


class UnregisteredEndpointError(ChannelError):
    """Send or receive on an endpoint the bus does not know."""


class ChannelTimeoutError(ChannelError):
    """Expected message never arrived (dropped or never sent)."""
