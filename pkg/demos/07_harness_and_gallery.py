"""
The convergence harness and the counterexample gallery
======================================================

A whole identification run is one JSON-serializable config: space,
generating formula, observation mode, rationalization policy, and
checkpoints. The same config drives the `prefid run` CLI.
"""

import os
import tempfile

from prefid import (
    ExperimentConfig,
    GALLERY_ITEMS,
    emit_report,
    report_fingerprint,
    run_convergence,
    run_gallery,
)

config = ExperimentConfig.from_dict(
    {
        "space": {"kind": "euclidean_grid", "dims": 2, "resolution": 8, "bounds": [0.0, 1.0]},
        "generator": {"formula": "cobb_douglas_mix", "params": {"mix": 0.1}},
        "mode": "strong",
        "policy": {"tag": "canonical", "monotone": "weak"},
        "utility_distance": True,
        "diameter": {"num_samples": 60, "seed": 0, "policy_class": "strict_monotone"},
        "k_grid": [16, 64, 256, 1024, 2016],
    }
)
report = run_convergence(config)

print(f"{'k':>6} {'delta_c':>8} {'diameter':>9} {'util_dist':>10} consistent")
for row in report.rows:
    diam = "" if row.diameter is None else f"{row.diameter:.4f}"
    ud = "" if row.utility_dist is None else f"{row.utility_dist:.4f}"
    print(f"{row.k:>6} {row.delta_c:>8.4f} {diam:>9} {ud:>10} {row.consistent}")
print(f"fingerprint (stable across reruns): {report_fingerprint(report)}")

# reports serialize to CSV, JSON, and a self-contained SVG chart
out = tempfile.mkdtemp()
paths = emit_report(report, formats=("csv", "json", "svg_plot"), out_dir=out, stem="demo_run")
print("wrote:", ", ".join(os.path.basename(p) for p in paths.values()))

# the gallery items are small scripted refutations of tempting claims;
# each returns named assertions with their measured values
print()
for item in GALLERY_ITEMS:
    result = run_gallery(item)
    n = len(result["assertions"])
    status = "ok" if result["ok"] else "FAILED"
    print(f"  {item:<28} {status} ({n} assertions)")
