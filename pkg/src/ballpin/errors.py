"""Exception hierarchy shared by all modules.

Every error carries a short machine-readable ``code`` so the CLI can emit
it as JSON without guessing.
"""


class PinningError(Exception):
    code = "error"


class DegenerateInput(PinningError):
    code = "degenerate_input"


class InvalidPattern(PinningError):
    code = "invalid_pattern"


class ProvidedAnglesNotSigma5(PinningError):
    code = "angles_not_sigma5"


class NotSpanningTriple(PinningError):
    code = "not_spanning_triple"


class ToleranceAmbiguous(PinningError):
    code = "tolerance_ambiguous"


class GivesUp(PinningError):
    code = "gives_up"


class InvalidConfig(PinningError):
    code = "invalid_config"


class GapTooSmall(PinningError):
    code = "gap_too_small"


class NotTangent(PinningError):
    code = "not_tangent"


class DeltaTooLarge(PinningError):
    code = "delta_too_large"


class DisjointnessFailure(PinningError):
    code = "disjointness_failure"


class ExtractionFailed(PinningError):
    code = "extraction_failed"
