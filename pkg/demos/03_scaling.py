# Wall time against n at fixed m, then against m at fixed n.

from rootedcover.bench import loglog_slope, per_unit_ratio, rows_to_csv, run_ladder, run_m_sweep

ladder = run_ladder((50, 100, 200, 400, 800), m=3, repeats=3)
print(rows_to_csv(ladder))
print("log-log slope: %.2f" % loglog_slope([r.n for r in ladder], [r.seconds for r in ladder]))

# each extra depot doubles the candidate forests
sweep = run_m_sweep(n=100, k=10, repeats=5)
print(rows_to_csv(sweep))
print("time ratio per extra depot: %.2f" % per_unit_ratio(sweep))
