VERSION = "0.1.0"

# Results cache
RESULTS_DIR = 'results'
RESULTS_DIR_ENV = 'EISCONG_RESULTS_DIR'
WORKERS = 4

# Precision windows
THETA_WINDOW = 1000
MIN_THETA_WINDOW = 500
HEURISTIC_WINDOW_FACTOR = 50
TABLE_TERMS = 3000
MIN_TABLE_TERMS = 100

# Sweeps
TATE_CYCLE_MAX_PRIME = 53
SAMPLE_ABOVE = 3
TRIVIAL_PRIMES = (2, 3)
SMALL_THETA_PRIMES = (2, 3, 5, 7, 11, 13)

# Coefficient rings
MAX_MODULUS = 2**63

LOG_FILE = 'eiscong.log'
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
