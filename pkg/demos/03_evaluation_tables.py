"""Reproduce the counterfactual-metrics tables for the iris dataset.

For every model family the harness answers all "Why P not Q?" queries
over the test split and aggregates CFs (counterfactuals generated),
CPs (those coinciding with dataset rows), their Ratio and the Avg per
query. Expect a couple of minutes of compute.

For the larger datasets, the CLI does the same job:
    cfshap evaluate --dataset wine --model svm --out wine-svm.md
    cfshap evaluate --dataset mobile --model knn --max-points 50 --out mobile-knn.md
"""

import cfshap as cf

ds = cf.load_builtin("iris")
config = cf.EvalConfig()  # 80/20 split, seed 42, exact attributions for d=4

reports = []
for family in cf.FAMILIES:
    report = cf.run_evaluation(ds, family, config)
    reports.append(report)
    print(
        f"{family:>4}: CFs={report.cfs:<5} CPs={report.cps:<4} "
        f"Ratio={report.ratio:5.2f}%  Avg={report.avg:5.2f}  "
        f"fallbacks={report.fallback_count}"
    )

print()
print(cf.emit_report(reports, format="markdown"))
