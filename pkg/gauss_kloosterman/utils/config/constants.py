import math

# ### tolerances ###
CROSS_PATH_TOL = 1e-9
ROUTE_TOL = 1e-6
GRAF_TOL = 1e-10
IDENTITY_TOL = 1e-12
SERIES_CUTOFF = 1e-18
# double-precision J* sums whose relative rounding error exceeds this are redone in mpmath
JSTAR_DOUBLE_TOL = 1e-10

# ### Bessel ###
MAX_BESSEL_ORDER = 200
MAX_BESSEL_ARGUMENT = 500.0
INTEGRAL_RANGE = 30.0
MAX_STAR_ARGUMENT = 60.0
MAX_G_ORDER = 64
INTEGER_NU_STEP = 1e-5

# ### B-transform ###
NU_TRUNCATION = lambda K: max(12.0 * K, 40.0)
P_TRUNCATION = lambda P: int(max(12 * math.ceil(P), 40))
XI_RANGE = 8.0
GL_ORDER = 8
TRAPEZOID_STEP = 0.25  # in units of K

# ### brute force ###
HEIGHT_SCHEDULE = (8, 16, 32, 64)
MIN_HEIGHT = 4

# ### sieve ###
BLOW_UP_FACTOR = 3.0
SIEVE_EPSILON = 0.05
# the small-modulus bound needs |c|^2 <= SMALL_C_RATIO N^(1 - eps) and 0 < |psi| <= PSI_LIMIT
SMALL_C_RATIO = 1.0
PSI_LIMIT = 2 * math.pi
TWIST_BETA = complex(0.3, 0.7)
SIEVE_FAMILIES = ("ones", "random_phase", "twist")
SIEVE_PSI = (0.0, 1.0)
# C_B is sampled at these fractions of the largest |u| along these directions
SMALL_U_RADII = (1.0, 0.5, 0.25)
SMALL_U_ANGLES = 4

# ### defaults ###
DEFAULTS = {
    "q0": "1",
    "a": "inf",
    "b": "inf",
    "w1": "1",
    "w2": "1",
    "c": None,
    "P": 2.0,
    "K": 2.0,
    "sigma": 0.75,
    "N": 16.0,
    "M": 2,
    "psi": 0.0,
    "cutoff": 10.0,
    "method": "kernel_direct",
    "output_format": "json",
    "seed": 0,
    "threads": "1",
    "budget": "fast",
}

COEFFICIENT_FAMILIES = ("ones", "spike", "random_phase", "twist")
B_METHODS = ("kernel_direct", "bessel_1d", "triple_integral")
POISSON_FAMILIES = ("1", "abs2")
SUITES = ("all", "gaussint", "cusps", "kloosterman", "bessel", "btransform", "sieve")
BUDGETS = ("fast", "full")

# per-budget sizes of the verification sweeps
BUDGET_MAP = {
    "fast": {
        "cusp_norm": 20,
        "classical_norm": 20,
        "we_exhaustive_norm": 20,
        "we_sampled_norm": 0,
        "kloosterman_levels": ("1", "1+1i"),
        "kloosterman_norm": 5,
        "frequency_norm": 2,
        "random_cases": 10,
        "crt_norm": 100,
        "gauss_norm": 30,
        "route_grid": ((2.0, 2.0),),
        "route_points": 2,
        "geometric_cutoffs": (4.0, 6.0),
        "sieve_N": (8.0, 16.0),
        "sieve_M": (0, 1),
        "inversion": False,
    },
    "full": {
        "cusp_norm": 100,
        "classical_norm": 100,
        "we_exhaustive_norm": 200,
        "we_sampled_norm": 2000,
        "kloosterman_levels": ("1", "1+1i", "2", "3"),
        "kloosterman_norm": 50,
        "frequency_norm": 8,
        "random_cases": 100,
        "crt_norm": 400,
        "gauss_norm": 100,
        "route_grid": ((1.0, 1.0), (1.0, 2.0), (2.0, 1.0), (2.0, 2.0)),
        "route_points": 8,
        "geometric_cutoffs": (20.0, 30.0),
        "sieve_N": (16.0, 64.0, 200.0),
        "sieve_M": (0, 2, 20),
        "inversion": True,
    },
}
