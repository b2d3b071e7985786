"""Error types shared across the package.

DomainError: the caller handed us something outside an operation's domain
(bad dimensions, non-ample class, parameter out of range).  Maps to CLI
exit code 1.

InvariantError: an internal guarantee failed (an identity that must hold by
construction did not).  Never caught and repaired silently.  Maps to CLI
exit code 2.
"""


class DomainError(Exception):
    pass


class InvariantError(Exception):
    pass
