from typing import Optional


class ShapeFactoryError(Exception):
    """
    Base exception for errors raised while building or running a shape pipeline.

    Carries the scenario file and stage that failed so CLI and Dagster logs can
    point at the offending input.
    """

    def __init__(
        self,
        message: str,
        file_name: Optional[str] = None,
        stage: Optional[str] = None,
        error_type: str = "VALIDATION_ERROR",
    ):
        self.message = message
        self.file_name = file_name
        self.stage = stage
        self.error_type = error_type
        super().__init__(self.message)

    def __str__(self) -> str:
        ctx = []
        if self.file_name:
            ctx.append(f"file: {self.file_name}")
        if self.stage:
            ctx.append(f"stage: {self.stage}")

        context_str = f" [{', '.join(ctx)}]" if ctx else ""
        return f"{self.error_type}{context_str}: {self.message}"

    def with_context(self, file_name: Optional[str] = None, stage: Optional[str] = None) -> "ShapeFactoryError":
        """Fill in missing context without overwriting what the raiser already knew."""
        if file_name and not self.file_name:
            self.file_name = file_name
        if stage and not self.stage:
            self.stage = stage
        return self
