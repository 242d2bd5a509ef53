"""Exception types shared across the store, index and service layers."""


class StoreError(Exception):
    """Base class for store-level failures."""


class ConflictError(StoreError):
    """A uniqueness constraint (username, document uri) was violated."""


class NotFoundError(StoreError):
    """A referenced record (user, document) does not exist."""


class AuthError(StoreError):
    """Authentication failed.

    Deliberately carries no detail about whether the username or the
    password was wrong.
    """


class EmptyQueryError(ValueError):
    """A query contained no eligible tokens after normalization.

    Distinct from a query that is valid but matches nothing.
    """
