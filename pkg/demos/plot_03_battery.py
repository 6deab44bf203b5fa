"""
The diagnostic battery
======================

``diagnose`` runs one predictor through levels, multiple regression,
changes, a lagged outcome, and an automatically selected regression with
ARIMA errors, then applies a simple verdict rule.
"""

# %%
from spurious_ts import Series, diagnose, format_table
from spurious_ts.montecarlo import gen_random_walk
from spurious_ts.rng import generator, polar_normal

# %%
# A spurious case: an unrelated walk as predictor, with two covariates.

y = gen_random_walk(63, seed=10, start=1951)
x = gen_random_walk(63, seed=11, start=1951)
covariates = [("c1", gen_random_walk(63, seed=12, start=1951)),
              ("c2", gen_random_walk(63, seed=13, start=1951))]
spurious = diagnose(y, x, covariates, predictor_name="walk")

# %%
# A genuine case: the outcome is the predictor plus noise.

z = gen_random_walk(63, seed=20, start=1951)
noise = polar_normal(generator(21), 63)
genuine = diagnose(Series(z.times, z.values + noise), z, covariates, predictor_name="genuine")

print(format_table([spurious, genuine]))

# %%
# The verdict is a function of the report fields, with thresholds held in a
# ``VerdictPolicy``. The JSON form keeps full precision.

print(spurious.to_dict()["verdict"], genuine.to_dict()["verdict"])
