class QbafError(ValueError):
    """Root of every error the library raises on bad input."""


class QbafFormatError(QbafError):
    pass


class UnknownArgumentError(QbafError, KeyError):
    def __init__(self, argument_id: str):
        super().__init__(f"unknown argument '{argument_id}'")
        self.argument_id = argument_id

    def __str__(self) -> str:
        return self.args[0]


class CyclicFrameworkError(QbafError):
    pass


class SemanticsSpecError(QbafError):
    pass


class AggregationError(QbafError):
    pass


class UnknownPrincipleError(QbafError):
    pass
