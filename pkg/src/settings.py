import os
from dataclasses import dataclass, replace

OUTPUT_FORMATS = ("text", "json")


@dataclass(frozen=True)
class AnalysisSettings:
    """Knobs shared by the CLI, the decomposer and the fixture suite.

    Defaults can be overridden through ``ABSURF_MAX_GROUP_ORDER`` and
    ``ABSURF_JOBS``; explicit keyword overrides (the CLI flags) win over both.
    """

    max_group_order: int = 200
    jobs: int = 1
    assume_a_split: bool = False
    output_format: str = "text"

    def __post_init__(self):
        if self.max_group_order < 1:
            raise ValueError("max_group_order must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"output_format must be one of {OUTPUT_FORMATS}")

    @classmethod
    def from_env(cls, **overrides) -> "AnalysisSettings":
        base = cls(
            max_group_order=int(os.environ.get("ABSURF_MAX_GROUP_ORDER", cls.max_group_order)),
            jobs=int(os.environ.get("ABSURF_JOBS", cls.jobs)),
        )
        return replace(base, **{k: v for k, v in overrides.items() if v is not None})
