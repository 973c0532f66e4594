"""
Numeric constants shared by the scoring, sampling and Puiseux handlers.
"""

# Logs are base 10 throughout; softmax uses 10**p
LOG_BASE = 10.0

# Brute-force enumeration caps
ORACLE_MAX_ROWS = 10
GOOD_COEFFICIENT_MAX_COLS = 4
GOOD_COEFFICIENT_MAX_ROWS = 6
SYMBOLIC_DET_MAX_DIM = 6
CRAMER_FIT_MAX_DIM = 5

# Puiseux series arithmetic
SERIES_MAX_TERMS = 20  # lowest-order terms kept per product
CANCELLATION_TOL = 1e-12  # relative to the magnitudes of the cancelling terms

# Probability vectors
DISTRIBUTION_TOL = 1e-12

# Slope fitting for asymptotic scores
SLOPE_TOL = 0.05
DEFAULT_Z_MIN = 1e-6
DEFAULT_Z_POINTS = 9

# Covariance used to generate experiment matrices: base * decay**|i-j|
SIGMA_BASE = 2.0
SIGMA_DECAY = 0.5

# Degrees of freedom per regime (None = Gaussian)
REGIME_DOF = {
    "incoherent": None,
    "semi-coherent": 3,
    "coherent": 1,
}

# CSV output keeps enough digits to round-trip doubles
CSV_FLOAT_FORMAT = "%.17g"

# Sampling methods compared by the least-squares benchmark
LSQ_METHODS = ("exact", "maxplus", "cnrn", "uniform")
