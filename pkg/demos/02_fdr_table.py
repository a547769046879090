"""Estimating the false discovery rate along the ranked pair list.

For every cutoff on the pair statistic, the permutation null tells us how
many pairs we would call by chance.  Scaling that by the estimated null
proportion gives median and 90th-percentile FDR estimates.
"""

# %%
import numpy as np

from sigjeff import (PermutationConfig, SimSpec, estimate_fdr, generate,
                     partition_exhaustive, run_permutations, summarize)

data, truth = generate(SimSpec("ar1", d=500, n_per_class=50, seed=3))
part = partition_exhaustive(summarize(data))
result = run_permutations(data, part, PermutationConfig(500, seed=3))
table = estimate_fdr(result)
print(f"estimated null proportion pi0 = {table.pi0:.3f}")

# %% [markdown]
# Rows are ordered by increasing cutoff, so the number of called pairs
# falls down the table.  Show the rows that call 1..15 pairs.

# %%
print(f"{'called':>6} {'cutoff':>8} {'FDR(med)':>9} {'FDR(p90)':>9}")
for k in range(1, 16):
    row = np.flatnonzero(table.n_called == k)
    if row.size:
        r = row[0]
        print(f"{k:>6} {table.cutoff[r]:>8.3f} {table.fdr_median[r]:>9.3f} "
              f"{table.fdr_p90[r]:>9.3f}")

# %% [markdown]
# How many of the called pairs actually contain a signal variable?

# %%
order = np.argsort(-result.observed)
top = order[:15]
hit = truth.non_null_mask[result.i[top]] | truth.non_null_mask[result.j[top]]
print("top-15 pairs touching a signal variable:", int(hit.sum()))
