"""Exception hierarchy shared by every slotcsp module."""


class SlotCspError(Exception):
    """Base class for all library errors."""


class EmptyDomain(SlotCspError, ValueError):
    """Raised when a bound is queried on an empty domain."""


class NotFoundError(SlotCspError, LookupError):
    pass


class PortKindError(SlotCspError, TypeError):
    """Ports with incompatible direction or message kind were connected."""


class ReentrancyError(SlotCspError, RuntimeError):
    pass


class ShareCardinalityError(SlotCspError, RuntimeError):
    """A share request found zero or several responders."""


class ScopeError(SlotCspError, ValueError):
    pass


class DuplicateError(SlotCspError, ValueError):
    pass


class StateError(SlotCspError, RuntimeError):
    pass


class CapacityError(SlotCspError, ValueError):
    """An enumeration would exceed its configured size cap."""
