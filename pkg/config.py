import os
from dotenv import load_dotenv

load_dotenv()

class Config:
    # Environment detection
    ENV = os.getenv("ENV", "development")
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

    # Enumeration budgets
    UNIVERSE_BUDGET = int(os.getenv("MEKR_UNIVERSE_BUDGET", "100000"))
    BRUTE_FORCE_BUDGET = int(os.getenv("MEKR_BUDGET", "24"))
    CLOSURE_CAP = int(os.getenv("MEKR_CLOSURE_CAP", "500000"))
    CLIQUE_BUDGET = int(os.getenv("MEKR_CLIQUE_BUDGET", "200"))
    BIJECTION_BUDGET = int(os.getenv("MEKR_BIJECTION_BUDGET", "100000"))

    # Sampling defaults for the kernel pipeline
    DEFAULT_SEED = int(os.getenv("MEKR_SEED", "20240601"))
    DEFAULT_SAMPLES = int(os.getenv("MEKR_SAMPLES", "100"))

    # Worker processes for the brute-force engine
    THREADS = int(os.getenv("MEKR_THREADS", str(os.cpu_count() or 1)))

    # API Configuration
    API_HOST = os.getenv("API_HOST", "0.0.0.0")
    API_PORT = int(os.getenv("API_PORT", "8000"))

    @classmethod
    def validate_config(cls):
        """Validate that every budget and count is a positive integer"""
        positive_vars = [
            "UNIVERSE_BUDGET",
            "BRUTE_FORCE_BUDGET",
            "CLOSURE_CAP",
            "CLIQUE_BUDGET",
            "BIJECTION_BUDGET",
            "DEFAULT_SAMPLES",
            "THREADS",
        ]

        bad_vars = [var for var in positive_vars if getattr(cls, var) < 1]
        if bad_vars:
            raise ValueError(f"Configuration values must be positive: {', '.join(bad_vars)}")

        return True

    @classmethod
    def get_budget_summary(cls):
        """Budgets as a dict for logging and the health endpoint"""
        return {
            "universe": cls.UNIVERSE_BUDGET,
            "brute_force": cls.BRUTE_FORCE_BUDGET,
            "closure_cap": cls.CLOSURE_CAP,
            "clique": cls.CLIQUE_BUDGET,
            "bijection": cls.BIJECTION_BUDGET,
            "threads": cls.THREADS,
        }

    @classmethod
    def is_production(cls):
        """Check if running in production environment"""
        return cls.ENV == "production"

    @classmethod
    def log_level(cls):
        """Logging level for entry points"""
        return "WARNING" if cls.is_production() else cls.LOG_LEVEL.upper()
