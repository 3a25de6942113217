"""Application configuration constants and guards.

Values come from environment variables (optionally loaded from a ``.env``
file) with defaults suited to the desk-scale reproductions: bases up to 121
points, closures of at most a couple of dozen atoms.
"""

import os
from typing import Final

from dotenv import load_dotenv

load_dotenv()

# Application settings loaded from environment
DEBUG: Final[bool] = os.getenv("EQRA_DEBUG", "false").lower() == "true"
LOG_LEVEL: Final[str] = os.getenv("EQRA_LOG_LEVEL", "WARNING").upper()
LOG_TO_FILE: Final[bool] = os.getenv("EQRA_LOG_TO_FILE", "false").lower() == "true"
LOG_STACKTRACE: Final[bool] = (
    os.getenv("EQRA_LOG_STACKTRACE", "false").lower() == "true"
)
LOG_FILE_PATH: Final[str] = os.getenv("EQRA_LOG_FILE_PATH", "data/logs/eqra.log")

# Relations
MAX_BASE_SIZE: Final[int] = 4096  # n x n boolean matrix guard

# Closure
ATOM_BUDGET: Final[int] = int(os.getenv("EQRA_ATOM_BUDGET", "24"))

# Primitive positive search
PP_MAX_VARS: Final[int] = int(os.getenv("EQRA_PP_MAX_VARS", "4"))
PP_MAX_CONSTRAINTS: Final[int] = int(os.getenv("EQRA_PP_MAX_CONSTRAINTS", "6"))
PP_WARN_ESTIMATE: Final[int] = 10**7
PP_HARD_CAP: Final[int] = int(os.getenv("EQRA_PP_HARD_CAP", str(10**9)))

# Algebras
MAX_ALGEBRA_SIZE: Final[int] = 10  # Bell(10) = 115975 partitions

# Constructions
MAX_PRIME: Final[int] = 11  # p^2 <= 121
MAX_REPRESENTED_M: Final[int] = 9

# Verification runs
PARALLELISM: Final[int] = int(os.getenv("EQRA_PARALLELISM", "1"))
RANDOM_SEED: Final[int] = int(os.getenv("EQRA_RANDOM_SEED", "0"))
SAMPLE_TERM_PAIRS: Final[int] = 200
SAMPLE_PP_QUERIES: Final[int] = 200
SAMPLE_ROUND_TRIPS: Final[int] = 500
SAMPLE_CLOSURES: Final[int] = 100

# Certificates
CERTIFICATE_SCHEMA: Final[int] = 1
