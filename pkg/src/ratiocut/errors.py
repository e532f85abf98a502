class RatioCutError(Exception):
    """Base class for solver errors that map to a non-zero CLI exit."""


class NoFiniteCutError(RatioCutError):
    def __init__(self, msg: str = "no finite cut"):
        super().__init__(msg)


class InfeasibleError(RatioCutError):
    """No feasible set exists (bad seeds, or no set with positive denominator)."""


class UndefinedRatioError(RatioCutError):
    def __init__(self, msg: str = "undefined ratio"):
        super().__init__(msg)


class InstanceTooLargeError(RatioCutError):
    def __init__(self, size: int, limit: int):
        super().__init__(f"instance too large: {size} free nodes > limit {limit}")
