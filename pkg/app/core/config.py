from pydantic_settings import BaseSettings, SettingsConfigDict

class Settings(BaseSettings):
    LOG_LEVEL: str = "WARNING"

    DEFAULT_SEMANTICS: str = "ddrl"
    DEFAULT_Q: str = "sum"
    DEFAULT_GAMMA: float = 1.0
    DEFAULT_K: float = 100.0

    SOLVER_EPSILON: float = 1e-6
    SOLVER_MAX_ITER: int = 10000
    SOLVER_STEP_H: float = 0.05

    OSCILLATION_WINDOW: int = 64
    OSCILLATION_TOL: float = 1e-10

    DELTA_CONSISTENCY_TOL: float = 1e-12

    POSTULATE_TOL: float = 1e-9
    POSTULATE_SATURATION_TOL: float = 1e-6
    POSTULATE_TARGETS_PER_FRAMEWORK: int = 6
    POSTULATE_MAX_WITNESSES: int = 10
    OPEN_MINDED_MAX_PARENTS: int = 64
    OPEN_MINDED_LOW: float = 0.05
    OPEN_MINDED_HIGH: float = 0.95

    LADDER_MAX_RESAMPLES: int = 100

    BENCH_EPSILON: float = 1e-4
    BENCH_MAX_ITER: int = 10000

    CSV_FLOAT_FORMAT: str = ".17g"
    STRENGTH_DECIMALS: int = 6

    model_config = SettingsConfigDict(env_file=".env", env_prefix="QBAF_", extra="ignore")

settings = Settings()
