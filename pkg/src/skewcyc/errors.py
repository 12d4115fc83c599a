"""Exception hierarchy.

Verification outcomes are never exceptions: a failed check is a certificate
with ``verdict == "fail"``.  The classes here signal bad input or broken
internal invariants.
"""


class SkewCycError(Exception):
    """Base class for every error raised by this package."""


# field
class NonPrimeCharacteristic(SkewCycError, ValueError):
    pass


class ReducibleModulus(SkewCycError, ValueError):
    pass


class ZeroToNegativePower(SkewCycError, ZeroDivisionError):
    pass


class ModulusDoesNotDivideGroupOrder(SkewCycError, ValueError):
    pass


class FieldTooLarge(SkewCycError, ValueError):
    pass


class FieldTooLargeForExactPath(FieldTooLarge):
    pass


# cycint
class ConductorMismatch(SkewCycError, ValueError):
    pass


class NotCoprime(SkewCycError, ValueError):
    pass


class BadConductorSplit(SkewCycError, ValueError):
    pass


class ZeroElement(SkewCycError, ValueError):
    pass


# charsum
class EvenCharacteristic(SkewCycError, ValueError):
    pass


class BadOrder(SkewCycError, ValueError):
    pass


class ClusteringAmbiguous(SkewCycError, RuntimeError):
    pass


# verify
class EvenOrder(SkewCycError, ValueError):
    pass


# sw
class OrderDoesNotDivideDegree(SkewCycError, ValueError):
    pass


class NotStronglyRegular(SkewCycError, ValueError):
    pass


class IdentityFailed(SkewCycError, RuntimeError):
    pass


# construct
class EvenModulus(SkewCycError, ValueError):
    pass


class ZeroInL(SkewCycError, ValueError):
    pass


class NoEligiblePart(SkewCycError, ValueError):
    pass


class IndexMismatch(SkewCycError, ValueError):
    pass


class CoverageViolated(SkewCycError, ValueError):
    pass


class SizeViolated(SkewCycError, ValueError):
    pass


class PremiseNotSRG(SkewCycError, ValueError):
    pass


class NotCyclicQuotient(SkewCycError, ValueError):
    pass


class BadGenerator(SkewCycError, ValueError):
    pass


# cli
class ManifestParseError(SkewCycError, ValueError):
    pass


class UnknownOp(SkewCycError, KeyError):
    pass
