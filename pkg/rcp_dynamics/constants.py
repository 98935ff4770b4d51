from model_utils import Choices

VARIANTS = Choices(
    ('a', 'A_NONSWITCHED', 'Model A, non-switched queue'),
    ('a-switched', 'A_SWITCHED', 'Model A, switched queue'),
    ('b', 'B_QUEUE', 'Model B with queue feedback'),
    ('b-noqueue', 'B_NOQUEUE', 'Model B without queue feedback'),
)

MODEL_A_VARIANTS = (VARIANTS.A_NONSWITCHED, VARIANTS.A_SWITCHED)
MODEL_B_VARIANTS = (VARIANTS.B_QUEUE, VARIANTS.B_NOQUEUE)

# Chart families: the (a, beta) plane of Model A and the (a, b) plane of Model B.
CHART_MODELS = Choices(
    ('a', 'A', 'Model A (a, beta)'),
    ('b', 'B', 'Model B (a, b)'),
)

CLASSIFICATIONS = Choices(
    ('converged', 'CONVERGED', 'Converged to equilibrium'),
    ('limit-cycle', 'LIMIT_CYCLE', 'Limit cycle'),
    ('diverged', 'DIVERGED', 'Diverged'),
)

CHAR_EQ_KINDS = Choices(
    ('a-full', 'MODEL_A_FULL', 'lambda^2 e^lambda + a lambda + beta = 0'),
    ('a-noqueue', 'MODEL_A_NOQUEUE', 'lambda e^lambda + a = 0'),
    ('scalar-delay', 'SCALAR_DELAY', 'lambda + kappa tau e^-lambda = 0'),
)

OUTPUT_FORMATS = Choices('csv', 'json')
