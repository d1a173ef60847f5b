"""
Exception and warning classes of sedkit.

All errors raised by the package derive from `SedkitError`.  The more
specific classes also derive from the matching builtin exception, so
that callers may catch ``ValueError`` or ``ArithmeticError`` as usual.
"""


class SedkitError(Exception):
    """Base class of all sedkit errors.
    """


class ParameterError(SedkitError, ValueError):
    """A parameter violates its documented range.

    The name of the offending parameter is available as ``key``.
    """
    def __init__(self, message, key=None):
        if key is not None:
            message = "%s: %s" % (key, message)
        SedkitError.__init__(self, message)
        self.key = key


class ConfigError(ParameterError):
    """Unknown or malformed configuration entry.
    """


class DivergenceError(SedkitError, ArithmeticError):
    """The integrated state became non-finite.

    ``step`` is the index of the first non-finite state, ``member`` the
    ensemble member (or None outside of ensembles).
    """
    def __init__(self, step, member=None):
        self.step = step
        self.member = member
        SedkitError.__init__(self, self._describe())

    def _describe(self):
        message = "non-finite state at step %d" % self.step
        if self.member is not None:
            message = "member %d: %s" % (self.member, message)
        return message

    def for_member(self, member):
        return DivergenceError(self.step, member)


class QuadratureError(SedkitError, ArithmeticError):
    """Numerical integration did not reach the requested tolerance.
    """


class TrajectoryParseError(SedkitError, ValueError):
    """Malformed walker trajectory input.
    """
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = "line %d: %s" % (lineno, message)
        SedkitError.__init__(self, message)
        self.lineno = lineno


class ParameterWarning(UserWarning):
    """A parameter is legal but outside of its recommended range.
    """
