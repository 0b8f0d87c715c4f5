LOG_FORMAT = "%(message)s"

DELIMITER = "=========================================\n"
SUB_DELIMITER = "-----------------------------------------\n"

# ### cusps ###
CUSP_CLASSES = "q0 = {q0}: {count} cusp classes (index {index}, covolume {vol:.6f})\n"
CUSP_FRAME = "\t- {cusp}: width {width}, 1/mu {mu_inv}, stabilizer index {stab}\n"
CUSP_NORMALIZED = "{cusp} ~ {normalized} under Gamma_0({q0})\n"

# ### kloosterman ###
KLOOSTERMAN_VALUE = "S_{{{a},{b}}}({w1}, {w2}; {c}) = {value} ({terms} terms, err {err:.2e})\n"
DELTA_VALUE = "delta_{{{a},{b}}}({w1}, {w2}) = {value} ({cosets} cosets)\n"
HEIGHT_STEP = "height {height}: {count} double cosets\n"
BRUTEFORCE_STATUS = "brute force {status} at height {height}\n"
SWEEP_BLOCKS = "bound sweep: {count} blocks\n"

# ### analysis ###
BESSEL_VALUE = "{kind}[{n}]({z}) = {value}\n"
SERIES_TERMS = "J_{n} series at |z| = {modulus:.3g} used {terms} terms\n"
BTRANSFORM_VALUE = "(Bh)({u}) via {method} = {value}\n"
GEOMETRIC_SIDE = "delta part {delta}, kloosterman part {kloosterman}, tail <= {tail:.3e}\n"
SIEVE_SUMMARY = "{rows} grid points, max ratio {max_ratio:.4f} at {argmax}\n"
BLOW_UP = "ratio blow-up detected for bound '{bound}'\n"

# ### verify ###
SUITE_HEADER = DELIMITER + "Suite '{suite}' ({budget} budget)\n" + SUB_DELIMITER
CHECK_PASSED = "[ ok ] {name} ({seconds:.2f}s)\n"
CHECK_FAILED = "[FAIL] {name}: {detail}\n"
CHECK_INCONCLUSIVE = "[ ?? ] {name}: {detail}\n"
CHECK_DETAIL = "{suite}/{name}: {detail}\n"
SUITE_SUMMARY = SUB_DELIMITER + "{passed} passed, {failed} failed, {inconclusive} inconclusive\n"

# ### errors ###
MISSING_OPTION = "Option '{option}' is required for '{command}'"
ZERO_ARGUMENT = "'{name}' must be a non-zero Gaussian integer"
BOTH_ZERO = "gcd of (0, 0) is undefined"
NOT_DIVISIBLE = "{num} is not divisible by {den}"
NOT_COPRIME = "{m} is not invertible modulo {c}: common factor {g}"
BAD_LITERAL = "Malformed {kind} literal '{text}' at position {pos}"
ZETA_DIVERGENT = "Re(s) = {re} must exceed {bound} for convergence"
ZETA_CUTOFF = "cutoff X = {cutoff} must be at least {minimum}"
MISMATCHED_LEVELS = "cusp frames belong to different levels {q1} and {q2}"
NOT_ALLOWED_MODULUS = "{c} is not an allowed modulus for the cusp pair ({a}, {b})"
FACTOR_HYPOTHESIS = "factorization needs (u1 u2, q0) ~ 1; got u1 = {u1}, u2 = {u2}, q0 = {q0}"
HEIGHT_TOO_SMALL = "height bound H = {height} must be at least {minimum}"
ORDER_OUT_OF_RANGE = "order {n} outside |n| <= {limit}"
ARGUMENT_OUT_OF_RANGE = "argument |z| = {modulus:.3g} exceeds {limit}"
ZERO_KERNEL_ARGUMENT = "kernel argument must be non-zero"
KERNEL_STRIP = "|Re(nu)| = {re:.3g} outside the strip |Re(nu)| < {bound}"
GRAF_SINGULAR = "y e^(i theta) + 1/(y e^(i theta)) vanishes at y = {y}, theta = {theta:.6g}"
JSTAR_PRECISION = "J* series: {count} order(s) at |z| = {modulus:.3g} resummed in mpmath\n"
SERIES_OVERFLOW = "|z| = {modulus:.3g} beyond the series range {limit}; an asymptotic branch is needed"
ORDER_TOO_LARGE = "n = {n} exceeds the recurrence limit {limit}"
UNSUPPORTED_FAMILY = "Unsupported function family: '{family}'"
BAD_TEST_PARAMS = "test parameters need P, K >= 1 and 1/2 < sigma < 1; got P = {P}, K = {K}, sigma = {sigma}"
STRIP_VIOLATION = "|Re(nu)| = {re:.3g} exceeds sigma = {sigma}"
DELTA_WINDOW = "M = {M} violates Delta <= M/(1+|u|) <= 2 Delta for Delta = {delta}, |u| = {modulus:.4g}"
UNKNOWN_METHOD = "Unknown B-transform route: '{method}'"
INADMISSIBLE_MODULUS = "modulus {c} is not admissible for cusp {cusp}"
NOT_NORMALIZED = "{cusp} is not a normalized cusp for q0 = {q0}: need w | q0 and (u, q0) ~ 1"
NOT_INTEGRAL = "{what} for q0 = {q0} is not an integer: {value}"
NEGATIVE_M = "M = {M} must be non-negative"
UNKNOWN_BOUND = "Unknown bound kind: '{kind}'"
NON_FINITE = "non-finite value {value} from {what}"
X_OUT_OF_RANGE = "x = {x:.6g} outside |x| < pi/2"
BAD_BUMP = "bump support needs 0 < r0 < r1; got r0 = {r0}, r1 = {r1}"
OUT_OF_ANNULUS = "{omega} lies outside N/2 < |w|^2 <= N for N = {N}"
ZERO_FREQUENCIES = "w1 and w2 cannot both be zero"
UNKNOWN_INTEGRATION = "Unknown integration method: '{method}'"
BAD_E_SUM = "E-sum needs c != 0, alpha != 0, M >= 0 and T > 0; got c = {c}, alpha = {alpha}, M = {M}, T = {T}"
SMALL_N = "N = {N} must be at least 1"

# ### consistency ###
WITNESS_FAILED = "witness {gamma} does not map {src} to {dst} inside Gamma_0({q0})"
STABILIZER_FAILED = "stabilizer congruence for {cusp} has no solution although q0 mu divides 2"
BIJECTION_FAILED = "alpha <-> delta correspondence is not bijective for c' = {c}"
ALPHA_UNDETERMINED = "alpha is not determined modulo c' = {c} (lcm {lcm})"
PERIODICITY_FAILED = "indicator periodicity fails for shift ({s}, {t}) at C = {C}"
NOT_UPPER_TRIANGULAR = "coset representative {gamma} is not upper triangular after conjugation"
COSET_OUTSIDE = "matrix {gamma} from the height enumeration is not in Gamma_0({q0})"
SINGULAR_MATRIX = "{matrix} has determinant {det}, not 1"
UNEXPECTED_ERROR = "{kind}: {detail}"

# ### config ###
UNSUPPORTED_TYPE_ERROR = "Unsupported file type: '{value}'"
MISSING_CONFIG_ERROR = "Config file not found: '{path}'"
EMPTY_CONFIG_ERROR = "Empty config file: '{path}'"
UNKNOWN_CONFIG_KEY = "Unknown config entry: '{entry}'"
BAD_THREADS = "threads must be a positive integer or 'auto'; got '{value}'"

# ### cli ###
VERIFICATION_FAILED = "{failed} check(s) failed"
INCONCLUSIVE = "{count} check(s) inconclusive"
WROTE_OUTPUT = "Results written to {path}\n"
