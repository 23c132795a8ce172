from pydantic_settings import BaseSettings
from typing import List, Optional

class Settings(BaseSettings):
    # Search budgets
    reversing_budget: int = 100_000
    bfs_budget: int = 1_000_000
    verify_budget: int = 20_000
    workbench_budget: Optional[int] = None  # WORKBENCH_BUDGET overrides both budgets above

    # Artin-Tits / Coxeter configuration
    coxeter_cap: int = 100_000
    garside_length_bound: int = 6

    # Abelian group computations
    extension_torsion_bound: int = 64
    extension_candidate_limit: int = 4096
    max_matrix_side: int = 512

    # API / CLI Configuration
    log_level: str = "INFO"
    schema_version: str = "1.0"
    cors_origins: List[str] = ["*"]

    @property
    def effective_reversing_budget(self) -> int:
        return self.workbench_budget or self.reversing_budget

    @property
    def effective_bfs_budget(self) -> int:
        return self.workbench_budget or self.bfs_budget

    class Config:
        env_file = ".env"
        case_sensitive = False

settings = Settings()
