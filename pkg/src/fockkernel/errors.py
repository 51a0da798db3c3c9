"""Exception types shared across the toolkit."""


class FockKernelError(Exception):
    """Base class for all toolkit errors."""


class DomainMismatch(FockKernelError):
    """Point variant does not match the kernel's declared domain."""


class OutOfDomain(FockKernelError):
    """Point violates a domain constraint (e.g. disk point with |z| >= 1)."""


class DimensionMismatch(FockKernelError):
    """Vector dimensions disagree."""


class AlphabetMismatch(FockKernelError):
    """Group words built over different generator alphabets."""


class NotAKernelEvidence(FockKernelError):
    """Numerical evidence that the supplied function is not positive semidefinite."""


class DuplicatePoints(FockKernelError):
    """Two points coincide under the numeric distinctness predicate."""

    def __init__(self, i, j, message=None):
        self.pair = (i, j)
        super().__init__(message or f"points {i} and {j} coincide")


class NotHermitian(FockKernelError):
    """Matrix fails the Hermitian symmetry check."""


class EigenFailure(FockKernelError):
    """Eigendecomposition did not converge."""


class SeparationFailed(FockKernelError):
    """Randomized separation search exhausted its retry budget."""

    def __init__(self, min_gap, tries, message=None):
        self.min_gap = min_gap
        self.tries = tries
        super().__init__(
            message
            or f"no separating functional after {tries} tries (best gap {min_gap:.3e})"
        )


class Divergent(FockKernelError):
    """Series evaluation outside its radius of convergence."""


class TailBoundExceeded(FockKernelError):
    """Requested truncation cannot guarantee the tail tolerance."""


class GridTooLarge(FockKernelError):
    """Requested lattice exceeds the configured point cap."""


class SolveFailure(FockKernelError):
    """Least-squares system is singular beyond ridge repair."""


class NonRealKernel(FockKernelError):
    """A real-valued kernel was required but the value has an imaginary part."""


class WrongForm(FockKernelError):
    """Model has the wrong expansion form for the requested conversion."""


class ParseError(FockKernelError):
    """Malformed input text."""


class IndexOutOfRange(ParseError):
    """Generator index outside the declared alphabet."""
