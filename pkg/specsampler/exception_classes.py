class ContractViolationException(Exception):
    pass


class DomainException(Exception):
    pass


class SingularSolveException(Exception):
    pass


class GaugeSingularException(Exception):
    pass


class NotAnEigenvalueException(Exception):
    pass


class DegenerateNodeException(Exception):
    pass


class DegreeOverflowException(Exception):
    pass


class InvalidAnchorException(Exception):
    pass


class InputValidationException(Exception):
    pass


class InternalAssertionException(Exception):
    pass


class VerificationFailedException(Exception):
    pass
