"""Exception hierarchy.

Errors are grouped into families so the CLI can map each family to its own
exit code: scenario problems (2), conflicts that cannot be resolved (3) and
the iteration cap (4).
"""


class ComcoreError(Exception):
    """Base class for every error raised by this package."""


class GridError(ComcoreError, ValueError):
    pass


class BoundsError(GridError):
    pass


class RingError(GridError):
    pass


class ScenarioError(ComcoreError, ValueError):
    """Malformed or semantically invalid scenario input."""


class GenerationError(ScenarioError):
    pass


class Unreachable(ScenarioError):
    def __init__(self, agent_id, message=None):
        self.agent_id = agent_id
        super().__init__(message or f"agent {agent_id}: goal is unreachable from start")


class UnresolvableConflict(ComcoreError):
    """A conflict the resolution rules cannot handle.

    ``chain`` is filled in by ``phase2`` with the solution nodes built so far.
    """

    chain = None
    timestep = None


class WindowUnavailable(UnresolvableConflict):
    pass


class UnclassifiableConflict(UnresolvableConflict):
    def __init__(self, message, window=None):
        self.window = window
        super().__init__(message)


class RoleNotApplicable(UnresolvableConflict):
    pass


class BoundaryResolutionError(UnresolvableConflict):
    pass


class SpliceError(UnresolvableConflict):
    pass


class IterationLimitExceeded(ComcoreError):
    timestep = None

    def __init__(self, message, chain=None):
        self.chain = chain
        super().__init__(message)
