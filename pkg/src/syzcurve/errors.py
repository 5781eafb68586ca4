"""Exception hierarchy shared across the package."""


class InputError(ValueError):
    """Rejected input: unparseable, wrong degree, degenerate or non-reduced."""


class PolyParseError(InputError):
    """Polynomial text does not conform to the input grammar."""


class NonHomogeneousError(InputError):
    """Polynomial mixes two total degrees."""

    def __init__(self, deg_a, deg_b):
        self.degrees = (deg_a, deg_b)
        super().__init__(
            f"polynomial is not homogeneous: found terms of degree {deg_a} and {deg_b}"
        )


class NonReducedError(InputError):
    """Hilbert function of the Jacobian quotient never stabilizes."""


class InternalConsistencyError(RuntimeError):
    """A structural identity the engine relies on failed; indicates a bug
    or an input outside the supported class that slipped past the gates."""
