class RcpDynamicsException(Exception):
    pass


class ParameterError(RcpDynamicsException, ValueError):
    pass


class DomainError(ParameterError):
    pass


class ConfigurationError(RcpDynamicsException):
    pass


class PreconditionError(RcpDynamicsException):
    pass


class SpectrumError(RcpDynamicsException):
    pass


class DivergenceError(RcpDynamicsException):
    """
    Raised when an integration meets a non-finite or unbounded state.
    :param time: simulated time of the failing step
    :param trajectory: samples computed before the failure, may be None
    """
    def __init__(self, message: str, time: float, trajectory=None):
        super().__init__(message)
        self.time = time
        self.trajectory = trajectory


class SingularityError(DivergenceError):
    def __init__(self, message: str, time: float = float('nan'), trajectory=None):
        super().__init__(message, time, trajectory)


class PartialSpectrumWarning(UserWarning):
    pass
