"""Domain errors. All subclass ValueError so the CLI handles them with config errors."""


class CoblabError(ValueError):
    """Base class for every error raised by coblab."""


class RationalInput(CoblabError):
    def __init__(self, depth: int, terms: int):
        super().__init__(
            f"continued fraction terminated after {terms} term(s) before depth {depth}: "
            "alpha is rational at working precision"
        )
        self.depth = depth
        self.terms = terms


class BandUnreachable(CoblabError):
    def __init__(self, r: int, n_max: int):
        super().__init__(
            f"no n <= {n_max} has ||n*alpha|| in the band for r={r}; raise n_max"
        )
        self.r = r
        self.n_max = n_max


class DivisorUnderflow(CoblabError):
    def __init__(self, n: int, size: float):
        super().__init__(
            f"|e(n*alpha) - 1| = {size:.3e} for n={n}: Frac128 precision exhausted"
        )
        self.n = n
        self.size = size


class BadIndex(CoblabError):
    """A constructor index (k, j, l) is outside its admissible range."""


class NoSeriesCoordinate(CoblabError):
    """A family was requested over a spec that carries no coboundary series."""


class ComplexityGuard(CoblabError):
    """A brute-force search was requested beyond its size limits."""


class NotAProduct(CoblabError):
    """A spec or certificate does not decompose as an interleaved product."""


class ShapeMismatch(CoblabError):
    """Dimensions of points, specs or maps disagree."""
