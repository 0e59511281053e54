import os
from typing import Optional
from pydantic_settings import BaseSettings
from dotenv import load_dotenv

load_dotenv()

class Settings(BaseSettings):
    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    # Redis Configuration (optional cache backend, in-memory otherwise)
    REDIS_ENABLED: bool = os.getenv("REDIS_ENABLED", "false").lower() in ("1", "true", "yes")
    REDIS_HOST: str = os.getenv("REDIS_HOST", "localhost")
    REDIS_PORT: int = int(os.getenv("REDIS_PORT", "6379"))
    REDIS_PASSWORD: Optional[str] = os.getenv("REDIS_PASSWORD")

    # Cache Configuration
    CACHE_TTL: int = int(os.getenv("CACHE_TTL", "3600"))
    CACHE_MAX_ENTRIES: int = int(os.getenv("CACHE_MAX_ENTRIES", "10000"))

    # Desk-scale thresholds (warnings only, results never depend on them)
    ORACLE_MAX_VERTICES: int = int(os.getenv("ORACLE_MAX_VERTICES", "40"))
    GUIDED_MAX_VERTICES: int = int(os.getenv("GUIDED_MAX_VERTICES", "60"))

    # Counterexample candidates
    CANDIDATES_PATH: str = os.getenv("CANDIDATES_PATH", "reports/counterexample_candidates.jsonl")
    LEDGER_MAX_HISTORY: int = int(os.getenv("LEDGER_MAX_HISTORY", "100"))

    # Generator Configuration
    GEN_MAX_ATTEMPTS: int = int(os.getenv("GEN_MAX_ATTEMPTS", "4000"))
    GEN_MAX_PATH: int = int(os.getenv("GEN_MAX_PATH", "4"))  # internal vertices per face-splitting path

    # Audit Configuration
    AUDIT_COUNT: int = int(os.getenv("AUDIT_COUNT", "200"))
    AUDIT_MIN_N: int = int(os.getenv("AUDIT_MIN_N", "12"))
    AUDIT_MAX_N: int = int(os.getenv("AUDIT_MAX_N", "22"))
    AUDIT_JOBS: int = int(os.getenv("AUDIT_JOBS", "1"))

    @property
    def redis_url(self) -> str:
        if self.REDIS_PASSWORD:
            return f"redis://:{self.REDIS_PASSWORD}@{self.REDIS_HOST}:{self.REDIS_PORT}"
        return f"redis://{self.REDIS_HOST}:{self.REDIS_PORT}"

    class Config:
        env_file = ".env"
        extra = "ignore"

settings = Settings()
