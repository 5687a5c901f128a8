"""Run configuration shared by the analyzer and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class RunConfig:
    max_cosets: int = 2_000_000
    listing_cap: int = 100_000
    # property checks run exhaustively up to this group order, then fall
    # back to a seeded tuple sample
    tuple_exhaustive_order: int = 30
    tuple_samples: int = 10_000
    # largest group order attempted in the regular representation before
    # switching to cosets of the embedded copy of G
    regular_cap: int = 20_000
    strategy: str = "auto"  # auto | regular | cosets
    output_format: str = "json"
    seed: int = 0
    use_numba: bool = True
    verify_budget: int = 2_000_000_000
    max_group_order: int = 10_000
    jobs: int = 1
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("max_cosets", "listing_cap", "tuple_samples",
                     "regular_cap", "max_group_order"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
