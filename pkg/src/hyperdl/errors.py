"""Exception types shared across the package."""


class HyperdlError(Exception):
    """Base class for all errors raised by this package."""


class CarrierMismatchError(HyperdlError):
    """A subset mask has bits outside the carrier it is used with."""


class WrongOrderError(HyperdlError):
    """An ordered family carries a different order than the operation needs."""


class ResourceGuardError(HyperdlError):
    """An exhaustive computation would exceed its configured size bound."""


class LatticeError(HyperdlError):
    """A structure fails the bounded-distributive-lattice laws."""


class InvalidHomError(HyperdlError):
    """A map fails the homomorphism laws required by its kind."""


class ValidationError(HyperdlError):
    """A modal space/algebra or input document fails validation."""


class ParseError(HyperdlError):
    """An input document or term cannot be parsed."""
