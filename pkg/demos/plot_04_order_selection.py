"""
Choosing an ARIMA error model
=============================

KPSS tests choose the differencing order; a stepwise AICc search chooses the
AR and MA orders.
"""

# %%
from spurious_ts import auto_arima, select_d, simulate_arima
from spurious_ts.select import kpss_test

y = simulate_arima((0, 1, 1), theta=[0.5], beta=[0.0], n=300, seed=3)
print("KPSS on levels :", kpss_test(y))
print("chosen d       :", select_d(y))

# %%
# Every order the search touched, with its AICc.

trace = auto_arima(y, max_p=3, max_q=3)
print(trace)

# %%
fit = trace.chosen_fit
print(f"ARIMA{trace.chosen}: theta = {fit.theta}, sigma2 = {fit.sigma2:.3f}, "
      f"AICc = {fit.aicc:.2f}")
