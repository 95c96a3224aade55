"""Exception types shared across the package."""


class LimitExceeded(ValueError):
    """A size or budget cap was hit.

    ``cap`` is the active limit and ``flag`` names the CLI option that raises it.
    """

    def __init__(self, what: str, value: int, cap: int, flag: str | None = None):
        self.what = what
        self.value = value
        self.cap = cap
        self.flag = flag
        msg = f"{what} = {value} exceeds the cap of {cap}"
        if flag:
            msg += f" (raise it with {flag})"
        super().__init__(msg)


class TreeParseError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


class InvalidRankError(ValueError):
    pass
