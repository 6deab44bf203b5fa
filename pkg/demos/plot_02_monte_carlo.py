"""
How often are random walks "significant"?
=========================================

Correlate 10,000 random walks with a trending target and count how many
pass P < 0.01, in levels and in first differences.
"""

# %%
import numpy as np

from spurious_ts.montecarlo import McConfig, run_experiment, trend_target

target = trend_target(63, seed=0)
result = run_experiment(target, McConfig("gaussian_walk", n_series=10_000, length=63, seed=1))

print(f"levels  : {result.level_sig_rate:.1%} significant at P < 0.01")
print(f"changes : {result.change_sig_rate:.2%} significant at P < 0.01")
print(f"median |Spearman rho with time| of the walks: {result.trend_summary:.2f}")

# %%
# The change-scale P-values are close to uniform, the level P-values pile up
# near zero. The first rows of the 100-bin histogram show this.

for low, high, n_levels, n_changes in list(result.histogram_rows())[:5]:
    print(f"[{low:.2f}, {high:.2f})  levels {n_levels:5d}  changes {n_changes:4d}")

# %%
# Coin-flip walks (+/-1 steps) behave the same way.

coin = run_experiment(target, McConfig("coin_flip", n_series=10_000, length=63, seed=1))
print(f"coin flips: levels {coin.level_sig_rate:.1%}, changes {coin.change_sig_rate:.2%}, "
      f"skipped {coin.n_skipped}")
print("identical seeds, identical answer:",
      np.array_equal(coin.level_pvalues(),
                     run_experiment(target, coin.config, workers=2).level_pvalues()))
