# -----------------------------------------------------------------------------
# Numerical tolerances.

# Maximum deviation of confusion matrix column(backward) or row(forward) sums
# from one.
STOCHASTIC_TOLERANCE = 1e-9
# Matrix with absolute determinant below this value is treated as singular.
SINGULAR_DETERMINANT = 1e-12
# Entry is treated as 0 or 1 of permutation matrix within this tolerance.
PERMUTATION_TOLERANCE = 1e-12
# Probability mass functions must sum to one within this tolerance.
PMF_TOLERANCE = 1e-9
# Signed measure accepted by projection if it sums to one within this value.
PROJECTION_TOLERANCE = 1e-6
# Floor for estimated probabilities under logarithm in KL divergence.
KL_FLOOR = 1e-12
# Divergence above this value in nats is most likely caused by KL_FLOOR.
KL_FLOOR_DOMINATED_NATS = 25.0

# -----------------------------------------------------------------------------
# Density estimation.

# Pseudo count added to each (symbol, weak label) cell of empirical
# conditionals.
SMOOTHING = 0.5
# Default projection of corrected signed measures, "clip" or "simplex".
PROJECTION = "clip"

# -----------------------------------------------------------------------------
# Synthetic convergence study.

# Number of trials of each binomial class, support size is one more.
BINOMIAL_TRIALS = 20
# Binomial success parameter for each class.
SUCCESS_PARAMS = [0.52, 0.65, 0.08]
# Diagonal values of equal diagonal noise matrices.
NOISE_LEVELS = [0.95, 0.9, 0.8, 0.7, 0.6]
# Number of samples in each trial.
SAMPLE_SIZES = [1000, 3000, 10000, 30000, 100000]
# Monte Carlo trials for each (sample size, noise level) cell.
RUNS_PER_CELL = 2000
BASE_SEED = 20170101

# -----------------------------------------------------------------------------
# Personalization demo.

# GPS speed annotator thresholds in mph. Fidget [0, 0.1], slow walk
# (0.1, 1], bike (3, 25], everything else gives no reading.
FIDGET_MAX_MPH = 0.1
SLOW_WALK_MAX_MPH = 1.0
BIKE_MIN_MPH = 3.0
BIKE_MAX_MPH = 25.0
# Confusion of GPS speed annotator, rows are true classes, columns are
# annotator output: call(fidget), slow walk, bike.
GPS_CONFUSION = [[0.76, 0.24, 0.0],
                 [0.28, 0.72, 0.0],
                 [0.0, 0.0, 1.0]]
# Speed of each activity, uniform in [low, high] mph.
SPEED_MODELS = [[0.0, 0.13],
                [0.0, 0.36],
                [4.0, 20.0]]
# Size of feature alphabet produced by feature extractor.
ALPHABET_SIZE = 16
# Part of user's emission mass spread over the whole alphabet.
EMISSION_NOISE = 0.06
# Population model is user's model shifted by this number of symbols...
BASELINE_SHIFT = 2
# ...and interpolated to uniform with this weight.
BASELINE_UNIFORM_MIX = 0.7
# Total Dirichlet pseudo count of each class in population model.
BASELINE_STRENGTH = 20.0
# Samples of each class for personalization, two minutes at 1 Hz.
PERSONALIZATION_SAMPLES = 120
# Samples of each class in evaluation transition trace.
EVALUATION_SAMPLES = 300
# Samples of each class to measure annotator confusion.
ANNOTATOR_CHECK_SAMPLES = 100000
# Smoothing for weak conditionals during personalization, zero keeps
# personalization with identity confusion equal to plain counting.
PERSONALIZATION_SMOOTHING = 0.0
# Simulated users.
PERSONALIZATION_SEEDS = list(range(20))
