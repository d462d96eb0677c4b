"""Exception hierarchy shared by the engine and the CLI."""


class LowerableError(Exception):
    """Base class for every error raised by this package."""


class PolyParseError(LowerableError, ValueError):
    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class GermValidationError(LowerableError, ValueError):
    """Raised with the full list of violations found in a raw germ description."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class DeltaNotCertified(LowerableError):
    def __init__(self, branch, delta_max):
        self.branch = branch
        self.delta_max = delta_max
        super().__init__(
            f"δ(f_{branch}) not certified finite up to bound delta_max={delta_max}"
        )


class NotFinitelyDetermined(LowerableError):
    def __init__(self, ell_max, witness=None, witness_text=None):
        self.ell_max = ell_max
        self.witness = witness
        msg = f"not finitely 𝓛-determined up to ell_max={ell_max}"
        if witness_text:
            msg += f"; witness: {witness_text} not attainable"
        super().__init__(msg)
