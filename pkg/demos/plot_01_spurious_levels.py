"""
Two unrelated random walks
==========================

Independent random walks look strongly correlated far more often than the
nominal P-value suggests. Their first differences do not.
"""

# %%
# Generate two independent Gaussian random walks of 63 annual observations,
# the length of a 1951-2013 annual index.

from spurious_ts import align, difference, durbin_watson, fit_ols, pearson
from spurious_ts.montecarlo import gen_random_walk

y = gen_random_walk(63, seed=1, start=1951)
x = gen_random_walk(63, seed=2, start=1951)

# %%
# In levels the correlation is usually "significant".

lev = pearson(x, y)
print(f"levels:  r = {lev.r:.2f}, P = {lev.p_value:.3g}")

# %%
# The Durbin-Watson statistic of the levels regression sits far below 2,
# the value expected for uncorrelated residuals.

fit = fit_ols(align(y, [("x", x)]))
print(f"Durbin-Watson d = {durbin_watson(fit.residuals):.2f}")

# %%
# On the change scale the association disappears.

ch = pearson(difference(x), difference(y))
print(f"changes: r = {ch.r:.2f}, P = {ch.p_value:.3g}")
